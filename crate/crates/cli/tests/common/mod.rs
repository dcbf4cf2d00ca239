//! Seeded random instances and brute-force oracles shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use divpoly::curve::{h0, section_basis, Coord, Curve, Section, Tri};
use divpoly::divpoly::DivisorialPolytope;
use divpoly::geometry::{Cone, LatticeVec, Polyhedron, Rat, UniPoly};
use divpoly::pdiv::PolyhedralDivisor;
use divpoly::support::Affine;

const DEFAULT_SEED: u64 = 0x0d1f_b0b5;

pub fn seed() -> u64 {
    std::env::var("DIVPOLY_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Independent stream `stream` derived from the session seed.
pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn r(n: i64) -> Rat {
    Rat::from_integer(n as i128)
}

pub fn p1(labels: &[&str]) -> Curve {
    let pts: Vec<(&str, Coord)> = labels
        .iter()
        .map(|&l| {
            let c = match l {
                "inf" => Coord::Infinity,
                "0" => Coord::Finite(r(0)),
                "1" => Coord::Finite(r(1)),
                "-1" => Coord::Finite(r(-1)),
                _ => Coord::Finite(r(2)),
            };
            (l, c)
        })
        .collect();
    Curve::projective_line(&pts).expect("distinct points")
}

/// Concave piecewise affine function on `[a, a + len]` with integral graph
/// vertices, as a list of affines.
fn random_piece(rng: &mut ChaCha8Rng, a: i64, len: i64, max_slope: i64) -> Vec<Affine> {
    let q = if len % 2 == 0 && rng.gen_bool(0.3) {
        2
    } else {
        1
    };
    let mut breaks = Vec::new();
    let mut t = a + q;
    while t < a + len {
        if rng.gen_bool(0.35) {
            breaks.push(t);
        }
        t += q;
    }
    let mut slope = rng.gen_range(-max_slope * q..=max_slope * q);
    let mut constant = r(rng.gen_range(-2..=2)) - Rat::new(slope as i128, q as i128) * r(a);
    let mut out = vec![Affine::new(
        vec![Rat::new(slope as i128, q as i128)],
        constant,
    )];
    for b in breaks {
        let next = slope - rng.gen_range(1..=2);
        constant += Rat::new((slope - next) as i128, q as i128) * r(b);
        slope = next;
        out.push(Affine::new(
            vec![Rat::new(slope as i128, q as i128)],
            constant,
        ));
    }
    out
}

fn min_at(affs: &[Affine], u: Rat) -> Rat {
    affs.iter().map(|f| f.eval(&[u])).min().expect("nonempty")
}

/// A valid rank-1 divisorial polytope on the projective line.
pub fn random_divpoly(
    rng: &mut ChaCha8Rng,
    max_len: i64,
    max_points: usize,
    max_slope: i64,
) -> DivisorialPolytope {
    let len = rng.gen_range(1..=max_len);
    let a = rng.gen_range(-len..=1);
    let b = a + len;
    let mut labels = vec!["0", "inf", "1", "-1"];
    labels.shuffle(rng);
    let n = rng.gen_range(1..=max_points.min(4));
    let used: Vec<&str> = labels[..n].to_vec();
    let mut pieces: Vec<(String, Vec<Affine>)> = used
        .iter()
        .map(|l| (l.to_string(), random_piece(rng, a, len, max_slope)))
        .collect();
    let deg =
        |ps: &[(String, Vec<Affine>)], u: Rat| ps.iter().map(|(_, f)| min_at(f, u)).sum::<Rat>();
    let low = deg(&pieces, r(a)).min(deg(&pieces, r(b)));
    let mut shift = (-low).max(r(0)) + r(rng.gen_range(0..=1));
    let mid = Rat::new((a + b) as i128, 2);
    if deg(&pieces, r(a)) + shift == r(0)
        && deg(&pieces, r(b)) + shift == r(0)
        && deg(&pieces, mid) + shift == r(0)
    {
        shift += r(1);
    }
    for f in pieces[0].1.iter_mut() {
        f.constant += shift;
    }
    let bx = Polyhedron::new(1, &[vec![r(a)], vec![r(b)]], &[]).expect("interval");
    let p = DivisorialPolytope::new(p1(&labels), bx, pieces).expect("well-formed");
    assert_eq!(
        p.validate().verdict,
        Tri::Yes,
        "generator produced an invalid instance"
    );
    p
}

/// A pointed cone spanned by a few small random lattice vectors.
pub fn random_cone(rng: &mut ChaCha8Rng, dim: usize) -> Cone {
    loop {
        let k = rng.gen_range(dim..=dim + 1);
        let rays: Vec<LatticeVec> = (0..k)
            .map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let c = Cone::new(dim, &rays, &[]);
        if c.is_pointed() && c.dimension() == dim {
            return c;
        }
    }
}

/// Membership in a cone through integral facet normals of its dual.
struct Member {
    ineqs: Vec<LatticeVec>,
    eqs: Vec<LatticeVec>,
}

impl Member {
    fn new(c: &Cone) -> Member {
        let d = c.dual();
        Member {
            ineqs: d.rays().to_vec(),
            eqs: d.lineality().to_vec(),
        }
    }

    fn contains(&self, x: &[i64]) -> bool {
        let dot = |a: &LatticeVec| a.iter().zip(x).map(|(p, q)| p * q).sum::<i64>();
        self.ineqs.iter().all(|a| dot(a) >= 0) && self.eqs.iter().all(|a| dot(a) == 0)
    }
}

/// Brute-force check of a Hilbert basis: irreducibility of every element
/// and coverage of every lattice point with coordinates bounded by `bound`.
pub fn check_hilbert_basis(
    c: &Cone,
    basis: &BTreeSet<LatticeVec>,
    bound: i64,
) -> Result<(), String> {
    let dim = c.ambient_dim();
    let zero = vec![0; dim];
    let basis: Vec<LatticeVec> = basis.iter().cloned().collect();
    let c = &Member::new(c);
    for h in &basis {
        if *h == zero || !c.contains(h) {
            return Err(format!("{h:?} is not a nonzero element of the cone"));
        }
    }
    let mut memo: HashMap<LatticeVec, bool> = HashMap::new();
    fn representable(
        x: &LatticeVec,
        c: &Member,
        basis: &[LatticeVec],
        memo: &mut HashMap<LatticeVec, bool>,
    ) -> bool {
        if x.iter().all(|&v| v == 0) {
            return true;
        }
        if let Some(&b) = memo.get(x) {
            return b;
        }
        let mut ok = false;
        for h in basis {
            let rest: LatticeVec = x.iter().zip(h).map(|(a, b)| a - b).collect();
            if c.contains(&rest) && representable(&rest, c, basis, memo) {
                ok = true;
                break;
            }
        }
        memo.insert(x.clone(), ok);
        ok
    }
    for x in boxed_points(dim, bound) {
        if c.contains(&x) && !representable(&x, c, &basis, &mut memo) {
            return Err(format!("{x:?} is not a sum of basis elements"));
        }
    }
    for h in &basis {
        let reach = bound.max(h.iter().map(|v| v.abs()).max().unwrap_or(0));
        for y in boxed_points(dim, reach) {
            if y == zero || y == *h || !c.contains(&y) {
                continue;
            }
            let rest: LatticeVec = h.iter().zip(&y).map(|(a, b)| a - b).collect();
            if c.contains(&rest) {
                return Err(format!("{h:?} = {y:?} + {rest:?} is reducible"));
            }
        }
    }
    Ok(())
}

pub fn boxed_points(dim: usize, bound: i64) -> Vec<LatticeVec> {
    let mut out: Vec<LatticeVec> = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-bound..=bound).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Lattice points of `k * p` by scanning its bounding box.
pub fn brute_count(p: &Polyhedron, k: i64) -> u64 {
    let dim = p.ambient_dim();
    let kr = r(k);
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for v in p.vertices() {
        for i in 0..dim {
            lo[i] = lo[i].min((v[i] * kr).floor().to_integer() as i64);
            hi[i] = hi[i].max((v[i] * kr).ceil().to_integer() as i64);
        }
    }
    let mut pts: Vec<LatticeVec> = vec![vec![]];
    for i in 0..dim {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (lo[i]..=hi[i]).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    pts.iter()
        .filter(|x| {
            let y: Vec<Rat> = x.iter().map(|&v| r(v) / kr).collect();
            p.contains(&y)
        })
        .count() as u64
}

/// Row echelon basis of a space of polynomials, grown one vector at a time.
struct Echelon {
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Echelon {
    fn new() -> Echelon {
        Echelon { rows: Vec::new() }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Adds `p` if it is independent of the rows so far.
    fn insert(&mut self, p: &UniPoly) {
        let mut v: Vec<Rat> = p.coeffs().to_vec();
        for (pivot, row) in &self.rows {
            let c = v.get(*pivot).copied().unwrap_or_default();
            if c != Rat::default() {
                if v.len() < row.len() {
                    v.resize(row.len(), Rat::default());
                }
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= c * y;
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| *x != Rat::default()) else {
            return;
        };
        let lead = v[pivot];
        for x in v.iter_mut() {
            *x /= lead;
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row.get(pivot).copied().unwrap_or_default();
            if c != Rat::default() {
                if row.len() < v.len() {
                    row.resize(v.len(), Rat::default());
                }
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= c * y;
                }
            }
        }
        self.rows.push((pivot, v));
    }

    fn basis(self) -> Vec<UniPoly> {
        self.rows
            .into_iter()
            .map(|(_, v)| UniPoly::new(v))
            .collect()
    }
}

/// Checks that for every weight of grading `1..=max_grade` in the dual tail
/// cone, products of sections in the weights `gens` span the whole weight
/// space. The grading is the last coordinate.
pub fn check_generation(
    d: &PolyhedralDivisor,
    gens: &BTreeSet<LatticeVec>,
    max_grade: i64,
    width: i64,
) -> Result<usize, String> {
    let curve = d.curve();
    let dual = d.tail().dual();
    let n = d.ambient_dim();
    let mut weights: Vec<LatticeVec> = Vec::new();
    for k in 1..=max_grade {
        for front in boxed_points(n - 1, width * k) {
            let mut w = front;
            w.push(k);
            if dual.contains_lattice(&w) {
                weights.push(w);
            }
        }
    }
    let gens: Vec<&LatticeVec> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
    let mut spans: BTreeMap<LatticeVec, Vec<Section>> = BTreeMap::new();
    let err = |e: divpoly::Error| e.to_string();
    for w in &weights {
        let dw = d.evaluate_lattice(w).map_err(err)?;
        let target = h0(curve, &dw).exact().ok_or("inexact section count")? as usize;
        let frame = dw.floor();
        let mut basis = Echelon::new();
        if gens.contains(&w) {
            for s in section_basis(curve, &dw).map_err(err)?.basis {
                basis.insert(&s.num);
            }
        }
        for g in &gens {
            if basis.len() == target {
                break;
            }
            let rest: LatticeVec = w.iter().zip(g.iter()).map(|(a, b)| a - b).collect();
            if *rest.last().unwrap() < 1 || !dual.contains_lattice(&rest) {
                continue;
            }
            let Some(tail) = spans.get(&rest) else {
                continue;
            };
            let dg = d.evaluate_lattice(g).map_err(err)?;
            for a in section_basis(curve, &dg).map_err(err)?.basis {
                for b in tail {
                    let prod = a.mul(b).reframe(curve, &frame).map_err(err)?;
                    basis.insert(&prod.num);
                    if basis.len() == target {
                        break;
                    }
                }
            }
        }
        if basis.len() != target {
            return Err(format!(
                "weight {w:?}: products span {} of {target} sections",
                basis.len()
            ));
        }
        let secs = basis
            .basis()
            .into_iter()
            .map(|num| Section {
                num,
                frame: frame.clone(),
            })
            .collect();
        spans.insert(w.clone(), secs);
    }
    Ok(weights.len())
}
