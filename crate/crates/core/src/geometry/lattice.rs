//! Lattice-point enumeration, Ehrhart polynomials, volumes, Hilbert bases and
//! vertex smoothness.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cone::{combinations, Cone};
use super::linalg::{
    det, dot, dot_int, rank, rat, solve_combination, sub, to_rat, LatticeVec, Rat, RatVec,
};
use super::poly::UniPoly;
use super::polyhedron::Polyhedron;
use crate::error::{Error, Result};

/// Largest ambient dimension handled by the enumerative algorithms.
pub const MAX_RANK: usize = 3;

fn bounding_box(points: &[RatVec], dim: usize) -> Vec<(i64, i64)> {
    (0..dim)
        .map(|i| {
            let lo = points.iter().map(|p| p[i]).min().unwrap();
            let hi = points.iter().map(|p| p[i]).max().unwrap();
            (
                lo.ceil().to_integer() as i64,
                hi.floor().to_integer() as i64,
            )
        })
        .collect()
}

fn for_each_box_point(bounds: &[(i64, i64)], mut f: impl FnMut(&[i64])) {
    if bounds.iter().any(|(lo, hi)| lo > hi) {
        return;
    }
    let mut cur: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    loop {
        f(&cur);
        let mut i = 0;
        loop {
            if i == bounds.len() {
                return;
            }
            if cur[i] < bounds[i].1 {
                cur[i] += 1;
                break;
            }
            cur[i] = bounds[i].0;
            i += 1;
        }
    }
}

/// All lattice points of `k * p` for a bounded polyhedron.
pub fn lattice_points(p: &Polyhedron, k: i64) -> Result<Vec<LatticeVec>> {
    if !p.is_bounded() {
        return Err(Error::Unbounded);
    }
    if p.is_empty() {
        return Ok(vec![]);
    }
    let kk = rat(k);
    let scaled: Vec<RatVec> = p
        .vertices()
        .iter()
        .map(|v| v.iter().map(|x| x * kk).collect())
        .collect();
    let h = p.hrep();
    let mut out = Vec::new();
    for_each_box_point(&bounding_box(&scaled, p.ambient_dim()), |x| {
        if h.satisfied_by_dilate(&to_rat(x), kk) {
            out.push(x.to_vec());
        }
    });
    Ok(out)
}

pub fn lattice_point_count(p: &Polyhedron, k: i64) -> Result<u64> {
    Ok(lattice_points(p, k)?.len() as u64)
}

/// Ehrhart polynomial of a lattice polytope of dimension at most 3,
/// interpolated from exact counts.
pub fn ehrhart(p: &Polyhedron) -> Result<UniPoly> {
    if p.is_empty() {
        return Err(Error::Empty);
    }
    if !p.is_bounded() {
        return Err(Error::Unbounded);
    }
    if !p.is_lattice() {
        return Err(Error::NotLattice);
    }
    let d = p.dimension() as usize;
    if d > MAX_RANK {
        return Err(Error::Unsupported(format!(
            "Ehrhart polynomial in dimension {d}"
        )));
    }
    let mut pts = vec![(Rat::zero(), Rat::one())];
    for k in 1..=d as i64 {
        pts.push((rat(k), rat(lattice_point_count(p, k)? as i64)));
    }
    Ok(UniPoly::interpolate(&pts))
}

/// Pulling triangulation of a polytope given by its vertices.
fn triangulate(p: &Polyhedron) -> Vec<Vec<RatVec>> {
    let d = p.dimension();
    if d <= 0 {
        return p.vertices().iter().map(|v| vec![v.clone()]).collect();
    }
    let v0 = p.vertices()[0].clone();
    let mut out = Vec::new();
    for (a, b) in p.hrep().inequalities {
        if dot(&a, &v0) == b {
            continue;
        }
        let face: Vec<RatVec> = p
            .vertices()
            .iter()
            .filter(|v| dot(&a, v) == b)
            .cloned()
            .collect();
        let fp = Polyhedron::new(p.ambient_dim(), &face, &[]).expect("face of a polytope");
        for mut s in triangulate(&fp) {
            s.push(v0.clone());
            out.push(s);
        }
    }
    out
}

/// Euclidean volume of a bounded polyhedron in its ambient space; zero when
/// it is not full-dimensional.
pub fn euclidean_volume(p: &Polyhedron) -> Result<Rat> {
    if !p.is_bounded() {
        return Err(Error::Unbounded);
    }
    if !p.is_full_dimensional() {
        return Ok(Rat::zero());
    }
    let n = p.ambient_dim();
    let fact: i128 = (1..=n as i128).product();
    let mut total = Rat::zero();
    for s in triangulate(p) {
        let apex = &s[n];
        let rows: Vec<RatVec> = s[..n].iter().map(|v| sub(v, apex)).collect();
        total += det(&rows).abs();
    }
    Ok(total / Rat::from_integer(fact))
}

/// Greatest common divisor of the maximal minors of the given integer rows.
fn minor_gcd(rows: &[LatticeVec]) -> i128 {
    let k = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    let mut g = 0i128;
    for cols in combinations(n, k) {
        let m: Vec<RatVec> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| rat(r[c])).collect())
            .collect();
        g = g.gcd(&det(&m).to_integer());
    }
    g
}

/// Whether the primitive edge directions at the lattice vertex `v` form a
/// basis of the lattice of the affine hull of `p`.
pub fn is_smooth_at_vertex(p: &Polyhedron, v: &[Rat]) -> Result<bool> {
    if !v.iter().all(|x| x.is_integer()) {
        return Err(Error::Invalid(format!(
            "vertex {v:?} is not a lattice point"
        )));
    }
    let dirs = p.edge_directions(v)?;
    let d = p.dimension() as usize;
    if dirs.len() != d {
        return Ok(false);
    }
    if d == 0 {
        return Ok(true);
    }
    Ok(minor_gcd(&dirs) == 1)
}

/// Simplicial decomposition of a pointed cone into cones spanned by
/// linearly independent rays.
fn triangulate_cone(gens: &[LatticeVec], dim: usize) -> Vec<Vec<LatticeVec>> {
    let rat_gens: Vec<RatVec> = gens.iter().map(|g| to_rat(g)).collect();
    let r = rank(&rat_gens, dim);
    if r == 0 {
        return vec![];
    }
    if r == gens.len() {
        return vec![gens.to_vec()];
    }
    let c = Cone::new(dim, gens, &[]);
    let r0 = to_rat(&gens[0]);
    let mut out = Vec::new();
    for a in c.hrep().facets {
        if dot(&a, &r0).is_zero() {
            continue;
        }
        let face: Vec<LatticeVec> = gens
            .iter()
            .filter(|g| dot_int(&a, g).is_zero())
            .cloned()
            .collect();
        for mut s in triangulate_cone(&face, dim) {
            s.push(gens[0].clone());
            out.push(s);
        }
    }
    out
}

/// Lattice points `sum l_i g_i` with `0 <= l_i < 1`, excluding the origin.
fn parallelepiped_points(gens: &[LatticeVec], dim: usize) -> Vec<LatticeVec> {
    let mut corners: Vec<RatVec> = vec![vec![Rat::zero(); dim]];
    for g in gens {
        let gr = to_rat(g);
        let extra: Vec<RatVec> = corners
            .iter()
            .map(|c| c.iter().zip(&gr).map(|(a, b)| a + b).collect())
            .collect();
        corners.extend(extra);
    }
    let cols: Vec<RatVec> = gens.iter().map(|g| to_rat(g)).collect();
    let mut out = Vec::new();
    for_each_box_point(&bounding_box(&corners, dim), |x| {
        if x.iter().all(|&c| c == 0) {
            return;
        }
        if let Some(l) = solve_combination(&cols, &to_rat(x)) {
            if l.iter().all(|c| !c.is_negative() && *c < Rat::one()) {
                out.push(x.to_vec());
            }
        }
    });
    out
}

/// Hilbert basis of the semigroup of lattice points of a pointed cone.
pub fn hilbert_basis(c: &Cone) -> Result<BTreeSet<LatticeVec>> {
    if !c.is_pointed() {
        return Err(Error::NotPointed(c.to_string()));
    }
    let dim = c.ambient_dim();
    if dim > MAX_RANK {
        return Err(Error::Unsupported(format!("Hilbert basis in rank {dim}")));
    }
    let mut candidates: BTreeSet<LatticeVec> = c.rays().iter().cloned().collect();
    for s in triangulate_cone(c.rays(), dim) {
        candidates.extend(parallelepiped_points(&s, dim));
    }
    let h = c.hrep();
    let in_cone = |x: &[i64]| {
        h.facets.iter().all(|a| !dot_int(a, x).is_negative())
            && h.equations.iter().all(|e| dot_int(e, x).is_zero())
    };
    let cand: Vec<LatticeVec> = candidates.into_iter().collect();
    let basis = cand
        .iter()
        .filter(|x| {
            !cand.iter().any(|y| {
                y != *x && {
                    let diff: LatticeVec = x.iter().zip(y).map(|(a, b)| a - b).collect();
                    in_cone(&diff)
                }
            })
        })
        .cloned()
        .collect();
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::linalg::frac;

    fn poly(points: &[&[i64]]) -> Polyhedron {
        let pts: Vec<LatticeVec> = points.iter().map(|p| p.to_vec()).collect();
        Polyhedron::from_lattice(points[0].len(), &pts, &[]).unwrap()
    }

    #[test]
    fn interval_counts() {
        let b = poly(&[&[-2], &[2]]);
        assert_eq!(lattice_point_count(&b, 1).unwrap(), 5);
        assert_eq!(ehrhart(&b).unwrap(), UniPoly::from_ints(&[1, 4]));
    }

    #[test]
    fn fixture_tilde_deltas() {
        let t0 = poly(&[&[-2, -2], &[-1, 0], &[1, 2], &[2, 2], &[2, -2]]);
        assert_eq!(lattice_point_count(&t0, 2).unwrap(), 57);
        assert_eq!(ehrhart(&t0).unwrap(), UniPoly::from_ints(&[1, 6, 11]));
        let tinf = poly(&[&[-2, 1], &[2, -1], &[-2, -1]]);
        assert_eq!(lattice_point_count(&tinf, 1).unwrap(), 9);
        assert_eq!(euclidean_volume(&tinf).unwrap(), rat(4));
    }

    #[test]
    fn unit_cube_and_square() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(ehrhart(&sq).unwrap(), UniPoly::from_ints(&[1, 2, 1]));
        let cube = poly(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[0, 1, 0],
            &[0, 0, 1],
            &[1, 1, 0],
            &[1, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
        ]);
        assert_eq!(euclidean_volume(&cube).unwrap(), rat(1));
        assert_eq!(ehrhart(&cube).unwrap(), UniPoly::from_ints(&[1, 3, 3, 1]));
        assert!(is_smooth_at_vertex(&sq, &to_rat(&[0, 0])).unwrap());
    }

    #[test]
    fn volume_of_rational_triangle() {
        let p = Polyhedron::new(
            2,
            &[
                to_rat(&[0, 0]),
                vec![frac(1, 2), rat(0)],
                vec![rat(0), rat(1)],
            ],
            &[],
        )
        .unwrap();
        assert_eq!(euclidean_volume(&p).unwrap(), frac(1, 4));
    }

    #[test]
    fn hilbert_bases() {
        let c = Cone::new(2, &[vec![-2, 1], vec![2, 1]], &[]);
        let hb: Vec<LatticeVec> = hilbert_basis(&c).unwrap().into_iter().collect();
        assert_eq!(
            hb,
            vec![vec![-2, 1], vec![-1, 1], vec![0, 1], vec![1, 1], vec![2, 1]]
        );
        let c = Cone::new(2, &[vec![1, 0], vec![1, 4]], &[]);
        assert_eq!(hilbert_basis(&c).unwrap().len(), 5);
        let c = Cone::new(2, &[vec![1, 0], vec![0, 1]], &[]);
        assert_eq!(hilbert_basis(&c).unwrap().len(), 2);
        assert!(hilbert_basis(&Cone::full_space(2)).is_err());
    }

    #[test]
    fn smoothness_at_fixture_vertices() {
        let tri = poly(&[&[-2, 1], &[2, -1], &[-2, -1]]);
        assert!(is_smooth_at_vertex(&tri, &to_rat(&[2, -1])).unwrap());
        let d = Polyhedron::new(
            2,
            &[
                to_rat(&[-2, 1]),
                to_rat(&[2, -1]),
                vec![rat(-1), frac(-1, 2)],
                vec![rat(1), frac(-3, 2)],
            ],
            &[],
        )
        .unwrap();
        // directions (-2,1),(-2,-1) at (2,-1): determinant 4
        assert!(!is_smooth_at_vertex(&d, &to_rat(&[2, -1])).unwrap());
        assert!(is_smooth_at_vertex(&d, &to_rat(&[-1, 0])).is_err());
    }
}
