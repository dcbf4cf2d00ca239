//! Divisorial polytopes: concave piecewise affine maps from a lattice polytope
//! to rational divisors on a curve.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::curve::{multiple_is_principal, Coord, Curve, CurveKind, QDivisor, Tri, GENERIC};
use crate::error::{Error, Result};
use crate::fansy::{Condition, MarkedFansyDivisor};
use crate::geometry::lattice::{ehrhart, euclidean_volume, is_smooth_at_vertex, lattice_points};
use crate::geometry::linalg::{
    dot, is_integral, project_out, sub, to_rat, LatticeVec, Rat, RatVec,
};
use crate::geometry::{Fan, Hrep, Polyhedron, UniPoly};
use crate::pdiv::fmt_vec;
use crate::support::{Affine, Piece, SupportFunction};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorialPolytope {
    curve: Curve,
    bx: Polyhedron,
    pieces: BTreeMap<String, Vec<Affine>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivPolyReport {
    pub conditions: Vec<Condition>,
    pub verdict: Tri,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothReport {
    pub verdict: Tri,
    /// `(point, vertex)` pairs where smoothness fails. The label `P` stands
    /// for every point of the curve.
    pub witnesses: Vec<(String, RatVec)>,
}

/// Exact Hilbert polynomial, or upper and lower bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hilbert {
    Exact(UniPoly),
    Bounds { upper: UniPoly, lower: UniPoly },
}

fn zero_affine(n: usize) -> Affine {
    Affine::new(vec![Rat::zero(); n], Rat::zero())
}

/// Region of `bx` on which `affs[i]` attains the minimum.
fn region(bx: &Polyhedron, affs: &[Affine], i: usize) -> Polyhedron {
    let n = bx.ambient_dim();
    let mut h = bx.hrep();
    let f = &affs[i];
    for (j, g) in affs.iter().enumerate() {
        if j != i {
            h.inequalities
                .push((sub(&g.gradient, &f.gradient), f.constant - g.constant));
        }
    }
    Polyhedron::from_hrep(n, &h).unwrap_or_else(|_| Polyhedron::empty(n))
}

/// Canonical minimal list of affine functions with the same minimum on `bx`.
fn canonical_affines(bx: &Polyhedron, affs: &[Affine]) -> Vec<Affine> {
    let n = bx.ambient_dim();
    let normals: Vec<RatVec> = bx.hrep().equations.into_iter().map(|(a, _)| a).collect();
    let v0 = bx.vertices()[0].clone();
    let mut list: Vec<Affine> = affs
        .iter()
        .map(|f| {
            if normals.is_empty() {
                return f.clone();
            }
            let g = project_out(&f.gradient, &normals);
            let c = f.constant + dot(&sub(&f.gradient, &g), &v0);
            Affine::new(g, c)
        })
        .collect();
    list.sort();
    list.dedup();
    let d = bx.dimension();
    let keep: Vec<Affine> = (0..list.len())
        .filter(|&i| region(bx, &list, i).dimension() == d)
        .map(|i| list[i].clone())
        .collect();
    if keep.is_empty() {
        vec![zero_affine(n)]
    } else {
        keep
    }
}

fn min_of(affs: &[Affine], u: &[Rat]) -> Rat {
    affs.iter()
        .map(|f| f.eval(u))
        .min()
        .expect("nonempty piece")
}

/// Affine functions whose minimum is the sum of the minima of `a` and `b`.
fn sum_of_mins(bx: &Polyhedron, a: &[Affine], b: &[Affine]) -> Vec<Affine> {
    let mut out = Vec::new();
    for f in a {
        for g in b {
            out.push(f.add(g));
        }
    }
    canonical_affines(bx, &out)
}

fn lift(v: &[Rat], t: Rat) -> RatVec {
    let mut w = v.to_vec();
    w.push(t);
    w
}

impl DivisorialPolytope {
    pub fn new(
        curve: Curve,
        bx: Polyhedron,
        pieces: impl IntoIterator<Item = (String, Vec<Affine>)>,
    ) -> Result<DivisorialPolytope> {
        if bx.is_empty() {
            return Err(Error::Empty);
        }
        if !bx.is_bounded() {
            return Err(Error::Unbounded);
        }
        if !bx.is_lattice() {
            return Err(Error::NotLattice);
        }
        let n = bx.ambient_dim();
        let mut map = BTreeMap::new();
        for (label, affs) in pieces {
            if !curve.has_point(&label) {
                return Err(Error::UnknownPoint(label));
            }
            if affs.is_empty() {
                return Err(Error::Invalid(format!(
                    "piece at {label} has no affine functions"
                )));
            }
            if let Some(f) = affs.iter().find(|f| f.gradient.len() != n) {
                return Err(Error::RankMismatch {
                    expected: n,
                    found: f.gradient.len(),
                });
            }
            if map.contains_key(&label) {
                return Err(Error::Invalid(format!("piece at {label} listed twice")));
            }
            let canon = canonical_affines(&bx, &affs);
            map.insert(label, canon);
        }
        map.retain(|_, a| *a != vec![zero_affine(n)]);
        Ok(DivisorialPolytope {
            curve,
            bx,
            pieces: map,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn box_polytope(&self) -> &Polyhedron {
        &self.bx
    }

    pub fn ambient_dim(&self) -> usize {
        self.bx.ambient_dim()
    }

    /// Nontrivial pieces in canonical form.
    pub fn pieces(&self) -> &BTreeMap<String, Vec<Affine>> {
        &self.pieces
    }

    pub fn support(&self) -> Vec<String> {
        self.pieces.keys().cloned().collect()
    }

    pub fn piece(&self, label: &str) -> Vec<Affine> {
        self.pieces
            .get(label)
            .cloned()
            .unwrap_or_else(|| vec![zero_affine(self.ambient_dim())])
    }

    pub fn with_curve(&self, curve: Curve) -> Result<DivisorialPolytope> {
        DivisorialPolytope::new(curve, self.bx.clone(), self.pieces.clone())
    }

    pub fn eval_at(&self, label: &str, u: &[Rat]) -> Rat {
        min_of(&self.piece(label), u)
    }

    /// `Psi(u)` as a divisor.
    pub fn eval(&self, u: &[Rat]) -> QDivisor {
        let mut d = QDivisor::zero();
        for (l, affs) in &self.pieces {
            d.add_at(l, min_of(affs, u));
        }
        d
    }

    pub fn degree_at(&self, u: &[Rat]) -> Rat {
        self.pieces.values().map(|a| min_of(a, u)).sum()
    }

    /// Maximal cells of the subdivision induced by the piece at `label`.
    pub fn cells(&self, label: &str) -> Piece {
        let affs = self.piece(label);
        (0..affs.len())
            .map(|i| (region(&self.bx, &affs, i), affs[i].clone()))
            .collect()
    }

    /// Vertices `(u, Psi_P(u))` of the graph of the piece at `label`.
    pub fn graph_vertices(&self, label: &str) -> Vec<(RatVec, Rat)> {
        let mut out: BTreeSet<(RatVec, Rat)> = BTreeSet::new();
        for (cell, f) in self.cells(label) {
            for v in cell.vertices() {
                out.insert((v.clone(), f.eval(v)));
            }
        }
        out.into_iter().collect()
    }

    pub fn validate(&self) -> DivPolyReport {
        let mut w3 = Vec::new();
        for label in self.pieces.keys() {
            for (u, y) in self.graph_vertices(label) {
                if !is_integral(&u) || !y.is_integer() {
                    w3.push(format!(
                        "{label}: graph vertex ({}, {y}) is not integral",
                        fmt_vec(&u)
                    ));
                }
            }
        }
        let mut v2 = Tri::Yes;
        let mut w2 = Vec::new();
        let mut min_vertex_degree: Option<Rat> = None;
        for u in self.bx.vertices() {
            let d = self.degree_at(u);
            min_vertex_degree = Some(min_vertex_degree.map_or(d, |m: Rat| m.min(d)));
            if d.is_positive() {
                continue;
            }
            if d.is_negative() {
                v2 = Tri::No;
                w2.push(format!("deg Psi({}) = {d} < 0", fmt_vec(u)));
                continue;
            }
            let t = multiple_is_principal(&self.curve, &self.eval(u));
            if t != Tri::Yes {
                w2.push(format!(
                    "deg Psi({}) = 0 and principality of Psi({}) is {}",
                    fmt_vec(u),
                    fmt_vec(u),
                    t.as_str()
                ));
            }
            v2 = v2.and(t);
        }
        let mut w1 = Vec::new();
        if self.bx.is_full_dimensional() && self.ambient_dim() > 0 {
            let c = self.bx.interior_point().expect("nonempty box");
            let d = self.degree_at(&c);
            if !d.is_positive() {
                w1.push(format!(
                    "deg Psi({}) = {d} at an interior point",
                    fmt_vec(&c)
                ));
            }
            if let Some(m) = min_vertex_degree.filter(|m| m.is_negative()) {
                w1.push(format!("deg Psi is {m} at a vertex, hence negative nearby"));
            }
        }
        let conditions = vec![
            Condition {
                name: "positive degree in the interior",
                verdict: Tri::from_bool(w1.is_empty()),
                witnesses: w1,
            },
            Condition {
                name: "positive or principal at vertices",
                verdict: v2,
                witnesses: w2,
            },
            Condition {
                name: "integral graph vertices",
                verdict: Tri::from_bool(w3.is_empty()),
                witnesses: w3,
            },
        ];
        let verdict = Tri::all(conditions.iter().map(|c| c.verdict));
        DivPolyReport {
            conditions,
            verdict,
        }
    }

    fn require_valid(&self) -> Result<()> {
        let r = self.validate();
        if r.verdict == Tri::No {
            let c = r
                .conditions
                .iter()
                .find(|c| c.verdict == Tri::No)
                .expect("a failing condition");
            return Err(Error::Invalid(format!(
                "not a divisorial polytope: {}: {}",
                c.name,
                c.witnesses.first().cloned().unwrap_or_default()
            )));
        }
        Ok(())
    }

    /// Region below the graph of the piece at `label`.
    fn hypograph(&self, label: &str) -> Result<Polyhedron> {
        let n = self.ambient_dim();
        let pts: Vec<RatVec> = self
            .graph_vertices(label)
            .into_iter()
            .map(|(u, y)| lift(&u, y))
            .collect();
        let mut down = vec![Rat::zero(); n + 1];
        down[n] = -Rat::one();
        Polyhedron::new(n + 1, &pts, &[down])
    }

    /// Sup-convolution sum.
    pub fn add(&self, other: &DivisorialPolytope) -> Result<DivisorialPolytope> {
        if self.curve != other.curve {
            return Err(Error::BaseMismatch);
        }
        let n = self.ambient_dim();
        if other.ambient_dim() != n {
            return Err(Error::RankMismatch {
                expected: n,
                found: other.ambient_dim(),
            });
        }
        let bx = self.bx.minkowski_sum(&other.bx)?;
        let labels: BTreeSet<String> = self
            .pieces
            .keys()
            .chain(other.pieces.keys())
            .cloned()
            .collect();
        let mut pieces = Vec::new();
        for l in labels {
            let hyp = self.hypograph(&l)?.minkowski_sum(&other.hypograph(&l)?)?;
            let affs: Vec<Affine> = hyp
                .hrep()
                .inequalities
                .into_iter()
                .filter(|(a, _)| a[n].is_negative())
                .map(|(a, b)| {
                    let t = a[n];
                    Affine::new(a[..n].iter().map(|x| -*x / t).collect(), b / t)
                })
                .collect();
            pieces.push((l, affs));
        }
        DivisorialPolytope::new(self.curve.clone(), bx, pieces)
    }

    /// `k * Psi`: box `k * Box`, pieces `u -> k Psi(u / k)`.
    pub fn scale(&self, k: i64) -> Result<DivisorialPolytope> {
        if k < 1 {
            return Err(Error::Invalid("scale factor must be positive".to_string()));
        }
        let kr = Rat::from_integer(k as i128);
        let pieces: Vec<(String, Vec<Affine>)> = self
            .pieces
            .iter()
            .map(|(l, affs)| {
                let a = affs
                    .iter()
                    .map(|f| Affine::new(f.gradient.clone(), f.constant * kr))
                    .collect();
                (l.clone(), a)
            })
            .collect();
        DivisorialPolytope::new(self.curve.clone(), self.bx.dilate(kr)?, pieces)
    }

    /// The marked fansy divisor and support function of the polarized
    /// variety, via Legendre conjugation of the pieces.
    pub fn dualize(&self) -> Result<(MarkedFansyDivisor, SupportFunction)> {
        self.require_valid()?;
        if !self.bx.is_full_dimensional() {
            return Err(Error::Unsupported(
                "dualizing needs a full-dimensional box".to_string(),
            ));
        }
        let n = self.ambient_dim();
        let tailfan = Fan::normal_fan(&self.bx)?;
        let mut slices = Vec::new();
        let mut pieces = Vec::new();
        for label in self.pieces.keys() {
            let gv = self.graph_vertices(label);
            let mut cells: Piece = Vec::new();
            for (i, (ui, yi)) in gv.iter().enumerate() {
                let mut h = Hrep::default();
                for (j, (uj, yj)) in gv.iter().enumerate() {
                    if i != j {
                        h.inequalities.push((sub(uj, ui), yj - yi));
                    }
                }
                let r = Polyhedron::from_hrep(n, &h)?;
                if r.dimension() == n as i64 {
                    cells.push((r, Affine::new(ui.clone(), -yi)));
                }
            }
            slices.push((
                label.clone(),
                cells.iter().map(|(c, _)| c.clone()).collect(),
            ));
            pieces.push((label.clone(), cells));
        }
        let mut linear = Vec::new();
        for s in tailfan.full_dimensional() {
            let w = self.bx.face_of(&s.interior_point())?;
            linear.push((s, w.vertices()[0].clone()));
        }
        let mut marks = Vec::new();
        for t in tailfan.cones() {
            let f = self.bx.face_of(&t.interior_point())?;
            let c = f.interior_point().expect("nonempty face");
            if self.degree_at(&c).is_zero() {
                marks.push(t.clone());
            }
        }
        let base = MarkedFansyDivisor::new(self.curve.clone(), tailfan, slices, marks)?;
        let h = SupportFunction::new(base.clone(), linear, pieces)?;
        Ok((base, h))
    }

    fn summed_piece(&self, labels: &[&String]) -> Vec<Affine> {
        let mut acc = vec![zero_affine(self.ambient_dim())];
        for l in labels {
            acc = sum_of_mins(&self.bx, &acc, &self.piece(l));
        }
        acc
    }

    /// Region between the graphs of `sum_{P in I} Psi_P` and
    /// `-sum_{P not in I} Psi_P`.
    pub fn delta_polytope(&self, i: &[String]) -> Result<Polyhedron> {
        self.require_valid()?;
        for l in i {
            if !self.curve.has_point(l) {
                return Err(Error::UnknownPoint(l.clone()));
            }
        }
        let n = self.ambient_dim();
        let (inside, outside): (Vec<&String>, Vec<&String>) =
            self.pieces.keys().partition(|l| i.contains(l));
        let upper = self.summed_piece(&inside);
        let lower = self.summed_piece(&outside);
        let bh = self.bx.hrep();
        let mut h = Hrep::default();
        for (a, b) in bh.inequalities {
            h.inequalities.push((lift(&a, Rat::zero()), b));
        }
        for (a, b) in bh.equations {
            h.equations.push((lift(&a, Rat::zero()), b));
        }
        for f in upper {
            h.inequalities
                .push((lift(&f.gradient, -Rat::one()), -f.constant));
        }
        for f in lower {
            h.inequalities
                .push((lift(&f.gradient, Rat::one()), -f.constant));
        }
        Polyhedron::from_hrep(n + 1, &h)
    }

    /// Convex hull of the graph of `Psi_P` and `Box x {min Psi_P}`.
    pub fn tilde_delta(&self, label: &str) -> Result<Polyhedron> {
        self.require_valid()?;
        let gv = self.graph_vertices(label);
        let m = gv.iter().map(|(_, y)| *y).min().expect("nonempty box");
        let mut pts: Vec<RatVec> = gv.iter().map(|(u, y)| lift(u, *y)).collect();
        pts.extend(self.bx.vertices().iter().map(|u| lift(u, m)));
        Polyhedron::new(self.ambient_dim() + 1, &pts, &[])
    }

    /// Self-intersection number `(m+1)! vol Delta(Psi, I)`, checked to be
    /// independent of `I`.
    pub fn degree_number(&self) -> Result<Rat> {
        let support = self.support();
        let mut choices: Vec<Vec<String>> = vec![vec![], support.clone()];
        choices.extend(support.iter().map(|l| vec![l.clone()]));
        let fact: i128 = (1..=(self.ambient_dim() as i128 + 1)).product();
        let mut value: Option<Rat> = None;
        for i in choices {
            let v = euclidean_volume(&self.delta_polytope(&i)?)? * Rat::from_integer(fact);
            match value {
                None => value = Some(v),
                Some(w) if w != v => {
                    return Err(Error::Invalid(format!(
                        "volume of Delta depends on I: {w} vs {v} for {i:?}"
                    )))
                }
                _ => {}
            }
        }
        Ok(value.expect("at least one choice"))
    }

    fn cell_count_and_slope(&self, label: &str, v: &[Rat]) -> (usize, bool) {
        let d = self.bx.dimension();
        let hits: Vec<Affine> = self
            .cells(label)
            .into_iter()
            .filter(|(c, _)| c.dimension() == d && c.contains(v))
            .map(|(_, f)| f)
            .collect();
        let integral = hits.iter().all(|f| is_integral(&f.gradient));
        (hits.len(), integral)
    }

    fn vertex_smooth(&self, label: &str, v: &[Rat]) -> Result<bool> {
        let i: Vec<String> = if label == GENERIC {
            vec![]
        } else {
            vec![label.to_string()]
        };
        let delta = self.delta_polytope(&i)?;
        let y = self.eval_at(label, v);
        let p = lift(v, y);
        match is_smooth_at_vertex(&delta, &p) {
            Ok(b) => Ok(b),
            Err(Error::NotAVertex(_)) | Err(Error::Invalid(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Smoothness of `Psi` at `(P, v)`, where `(v, Psi_P(v))` is a vertex of
    /// the graph of `Psi_P`. `P` may be [`GENERIC`].
    pub fn smooth_at(&self, label: &str, v: &[Rat]) -> Result<Tri> {
        self.require_valid()?;
        if label != GENERIC && !self.curve.has_point(label) {
            return Err(Error::UnknownPoint(label.to_string()));
        }
        if !self
            .graph_vertices(label)
            .iter()
            .any(|(u, _)| u.as_slice() == v)
        {
            return Err(Error::NotAVertex(format!(
                "({}) is not a vertex of the graph at {label}",
                fmt_vec(v)
            )));
        }
        let d = self.degree_at(v);
        if d.is_positive() {
            return self.vertex_smooth(label, v).map(Tri::from_bool);
        }
        if self.curve.genus() != 0 {
            return Ok(Tri::No);
        }
        let support = self.support();
        let bad: Vec<&String> = support
            .iter()
            .filter(|l| {
                let (k, integral) = self.cell_count_and_slope(l, v);
                k != 1 || !integral
            })
            .collect();
        let mut candidates: Vec<&str> = support.iter().map(|s| s.as_str()).collect();
        candidates.push(GENERIC);
        for p1 in candidates {
            let others = bad.iter().filter(|l| l.as_str() != p1).count();
            if others <= 1 && self.vertex_smooth(p1, v)? {
                return Ok(Tri::Yes);
            }
        }
        Ok(Tri::No)
    }

    /// Smoothness of the polarized variety with the failing pairs.
    pub fn is_smooth(&self) -> Result<SmoothReport> {
        self.require_valid()?;
        let mut per_vertex: BTreeMap<RatVec, Vec<(String, Tri)>> = BTreeMap::new();
        let mut labels = self.support();
        labels.push(GENERIC.to_string());
        for l in &labels {
            for (v, _) in self.graph_vertices(l) {
                let t = self.smooth_at(l, &v)?;
                per_vertex.entry(v).or_default().push((l.clone(), t));
            }
        }
        let mut verdict = Tri::Yes;
        let mut witnesses = Vec::new();
        for (v, checks) in per_vertex {
            for (_, t) in &checks {
                verdict = verdict.and(*t);
            }
            let failing: Vec<&String> = checks
                .iter()
                .filter(|(_, t)| *t == Tri::No)
                .map(|(l, _)| l)
                .collect();
            let covers_all =
                checks.iter().any(|(l, _)| l == GENERIC) && failing.len() == checks.len();
            if covers_all {
                witnesses.push(("P".to_string(), v));
            } else {
                witnesses.extend(failing.into_iter().map(|l| (l.clone(), v.clone())));
            }
        }
        witnesses.sort();
        Ok(SmoothReport { verdict, witnesses })
    }

    /// `E_Box(k) + sum_P (E_{tilde Delta(P)}(k) - E_Box(k) (1 - k min Psi_P))`.
    pub fn ehrhart(&self) -> Result<UniPoly> {
        self.require_valid()?;
        let eb = ehrhart(&self.bx)?;
        let mut total = eb.clone();
        for l in self.pieces.keys() {
            let et = ehrhart(&self.tilde_delta(l)?)?;
            let m = self
                .graph_vertices(l)
                .iter()
                .map(|(_, y)| *y)
                .min()
                .expect("nonempty box");
            let factor = UniPoly::new(vec![Rat::one(), -m]);
            total = &total + &(&et - &(&eb * &factor));
        }
        Ok(total)
    }

    /// Hilbert polynomial of the polarization; exact on rational curves or
    /// when every `deg floor Psi(u)` reaches `2g - 1`, bounds otherwise.
    pub fn hilbert_polynomial(&self) -> Result<Hilbert> {
        let e = self.ehrhart()?;
        let g = self.curve.genus();
        if g == 0 {
            return Ok(Hilbert::Exact(e));
        }
        let eb = ehrhart(&self.bx)?;
        let lower = &e - &eb.scale(Rat::from_integer(g as i128));
        let bound = Rat::from_integer(2 * g as i128 - 1);
        let holds = lattice_points(&self.bx, 1)?
            .iter()
            .all(|u| self.eval(&to_rat(u)).floor().degree() >= bound);
        Ok(if holds {
            Hilbert::Exact(lower)
        } else {
            Hilbert::Bounds { upper: e, lower }
        })
    }

    /// The divisorial polytope on the projective line obtained by viewing a
    /// lattice polytope through the exact sequence `0 -> Z -F-> M' -G-> M -> 0`
    /// with section `s`.
    pub fn toric_downgrade(
        delta: &Polyhedron,
        f: &[i64],
        g: &[LatticeVec],
        s: &[LatticeVec],
    ) -> Result<DivisorialPolytope> {
        let big = f.len();
        let n = g.len();
        if delta.ambient_dim() != big || n + 1 != big {
            return Err(Error::Invalid(
                "sequence ranks do not match the polytope".to_string(),
            ));
        }
        if g.iter().any(|r| r.len() != big) || s.len() != big || s.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("matrix shapes do not match".to_string()));
        }
        for row in g {
            if row.iter().zip(f).map(|(a, b)| a * b).sum::<i64>() != 0 {
                return Err(Error::Invalid("G F is not zero".to_string()));
            }
        }
        for (i, row) in g.iter().enumerate() {
            for j in 0..n {
                let e: i64 = (0..big).map(|k| row[k] * s[k][j]).sum();
                if e != (i == j) as i64 {
                    return Err(Error::Invalid("G s is not the identity".to_string()));
                }
            }
        }
        if delta.is_empty() || !delta.is_bounded() || !delta.is_lattice() {
            return Err(Error::Invalid("expected a lattice polytope".to_string()));
        }
        let grows: Vec<RatVec> = g.iter().map(|r| to_rat(r)).collect();
        let bx = delta.linear_image(&grows)?;
        let fr = to_rat(f);
        let h = delta.hrep();
        let mut rows: Vec<(RatVec, Rat)> = h.inequalities.clone();
        for (a, b) in &h.equations {
            rows.push((a.clone(), *b));
            rows.push((a.iter().map(|x| -*x).collect(), -*b));
        }
        let mut top = Vec::new();
        let mut bottom = Vec::new();
        for (a, b) in rows {
            let af = dot(&a, &fr);
            if af.is_zero() {
                continue;
            }
            let sa: RatVec = (0..n)
                .map(|j| {
                    (0..big)
                        .map(|k| a[k] * Rat::from_integer(s[k][j] as i128))
                        .sum()
                })
                .collect();
            // a_f * x + <s^T a, u> >= b
            if af.is_negative() {
                top.push(Affine::new(sa.iter().map(|x| *x / -af).collect(), b / af));
            } else {
                bottom.push(Affine::new(sa.iter().map(|x| *x / af).collect(), -b / af));
            }
        }
        let curve =
            Curve::projective_line(&[("0", Coord::Finite(Rat::zero())), ("inf", Coord::Infinity)])?;
        DivisorialPolytope::new(
            curve,
            bx,
            vec![("0".to_string(), top), ("inf".to_string(), bottom)],
        )
    }

    /// Equivalence of rank-one divisorial polytopes on the projective line up
    /// to `Box -> +-Box`, automorphisms of the line, and linear principal
    /// shifts.
    pub fn equivalent_rank1(&self, other: &DivisorialPolytope) -> Result<Tri> {
        if self.ambient_dim() != 1 || other.ambient_dim() != 1 {
            return Err(Error::Unsupported(
                "equivalence search is limited to rank one".to_string(),
            ));
        }
        if self.curve.kind() != CurveKind::ProjectiveLine
            || other.curve.kind() != CurveKind::ProjectiveLine
        {
            return Err(Error::Unsupported(
                "equivalence search needs projective lines with coordinates".to_string(),
            ));
        }
        let sa = self.support();
        let sb = other.support();
        let ca: Vec<Coord> = sa
            .iter()
            .map(|l| self.curve.coord(l))
            .collect::<Result<_>>()?;
        let cb: Vec<Coord> = sb
            .iter()
            .map(|l| other.curve.coord(l))
            .collect::<Result<_>>()?;
        for sign in [1i64, -1] {
            let flipped = self
                .bx
                .linear_image(&[vec![Rat::from_integer(sign as i128)]])?;
            if flipped != other.bx {
                continue;
            }
            for m in partial_injections(sb.len(), sa.len()) {
                if !mobius_realizable(&m, &cb, &ca) {
                    continue;
                }
                if self.shift_matches(other, sign, &m, &sa, &sb) {
                    return Ok(Tri::Yes);
                }
            }
        }
        Ok(Tri::No)
    }

    /// Whether `other_Q(u) - self_{m(Q)}(sign u)` is `c_Q u` with integers
    /// `c_Q` summing to zero over all slots.
    fn shift_matches(
        &self,
        other: &DivisorialPolytope,
        sign: i64,
        m: &[Option<usize>],
        sa: &[String],
        sb: &[String],
    ) -> bool {
        let sr = Rat::from_integer(sign as i128);
        let pts: BTreeSet<Rat> = other
            .bx
            .vertices()
            .iter()
            .map(|v| v[0])
            .chain(
                sb.iter()
                    .flat_map(|l| other.graph_vertices(l).into_iter().map(|(u, _)| u[0])),
            )
            .chain(
                sa.iter()
                    .flat_map(|l| self.graph_vertices(l).into_iter().map(|(u, _)| u[0] * sr)),
            )
            .collect();
        let slope = |d: &dyn Fn(Rat) -> Rat| -> Option<Option<Rat>> {
            let nonzero: Vec<&Rat> = pts.iter().filter(|u| !u.is_zero()).collect();
            let c = match nonzero.first() {
                Some(u) => d(**u) / **u,
                None => {
                    return if d(Rat::zero()).is_zero() {
                        Some(None)
                    } else {
                        None
                    }
                }
            };
            if !c.is_integer() || pts.iter().any(|u| d(*u) != c * u) {
                return None;
            }
            Some(Some(c))
        };
        let mut total = Rat::zero();
        let mut free = false;
        let mut hit = vec![false; sa.len()];
        for (qi, q) in sb.iter().enumerate() {
            let target = m[qi];
            if let Some(a) = target {
                hit[a] = true;
            }
            let d = |u: Rat| {
                let mine = target.map_or(Rat::zero(), |a| self.eval_at(&sa[a], &[u * sr]));
                other.eval_at(q, &[u]) - mine
            };
            match slope(&d) {
                None => return false,
                Some(None) => free = true,
                Some(Some(c)) => total += c,
            }
        }
        for (ai, a) in sa.iter().enumerate() {
            if hit[ai] {
                continue;
            }
            let d = |u: Rat| -self.eval_at(a, &[u * sr]);
            match slope(&d) {
                None => return false,
                Some(None) => free = true,
                Some(Some(c)) => total += c,
            }
        }
        free || total.is_zero()
    }
}

/// Maps from `0..k` to `Option<0..l>` injective on the `Some` values.
fn partial_injections(k: usize, l: usize) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for m in &out {
            next.push({
                let mut x: Vec<Option<usize>> = m.clone();
                x.push(None);
                x
            });
            for j in 0..l {
                if !m.contains(&Some(j)) {
                    let mut x = m.clone();
                    x.push(Some(j));
                    next.push(x);
                }
            }
        }
        out = next;
    }
    out
}

fn homog(c: &Coord) -> (Rat, Rat) {
    match c {
        Coord::Finite(x) => (*x, Rat::one()),
        Coord::Infinity => (Rat::one(), Rat::zero()),
    }
}

fn cross_ratio(a: &Coord, b: &Coord, c: &Coord, d: &Coord) -> Rat {
    let det = |p: &Coord, q: &Coord| {
        let (p0, p1) = homog(p);
        let (q0, q1) = homog(q);
        p0 * q1 - p1 * q0
    };
    det(a, c) * det(b, d) / (det(b, c) * det(a, d))
}

/// Whether an automorphism of the line sends each `cb[q]` to `ca[m[q]]`
/// and no unmatched point of `cb` onto an unmatched point of `ca`.
fn mobius_realizable(m: &[Option<usize>], cb: &[Coord], ca: &[Coord]) -> bool {
    let pairs: Vec<(usize, usize)> = m
        .iter()
        .enumerate()
        .filter_map(|(q, t)| t.map(|a| (q, a)))
        .collect();
    if pairs.len() < 3 {
        return true;
    }
    let (p, r): (Vec<&Coord>, Vec<&Coord>) =
        pairs[..3].iter().map(|&(q, a)| (&cb[q], &ca[a])).unzip();
    for &(q, a) in &pairs[3..] {
        if cross_ratio(p[0], p[1], p[2], &cb[q]) != cross_ratio(r[0], r[1], r[2], &ca[a]) {
            return false;
        }
    }
    let hit: BTreeSet<usize> = pairs.iter().map(|&(_, a)| a).collect();
    for (q, t) in m.iter().enumerate() {
        if t.is_some() {
            continue;
        }
        let x = cross_ratio(p[0], p[1], p[2], &cb[q]);
        for (a, c) in ca.iter().enumerate() {
            if !hit.contains(&a) && cross_ratio(r[0], r[1], r[2], c) == x {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::lattice::lattice_point_count;
    use crate::geometry::linalg::{frac, rat};

    fn aff(g: i64, c: Rat) -> Affine {
        Affine::new(vec![rat(g)], c)
    }

    fn segment(a: i64, b: i64) -> Polyhedron {
        Polyhedron::from_lattice(1, &[vec![a], vec![b]], &[]).unwrap()
    }

    #[test]
    fn fixture_is_valid_and_degree_is_concave_tent() {
        let psi = fixtures::ldp_divpoly();
        assert_eq!(psi.validate().verdict, Tri::Yes);
        for (u, d) in [(-2, 0), (-1, 1), (0, 1), (1, 1), (2, 0)] {
            assert_eq!(psi.degree_at(&[rat(u)]), rat(d));
        }
        assert_eq!(
            psi.graph_vertices("0"),
            vec![
                (vec![rat(-2)], rat(-2)),
                (vec![rat(-1)], rat(0)),
                (vec![rat(1)], rat(2)),
                (vec![rat(2)], rat(2))
            ]
        );
    }

    #[test]
    fn literal_tent_at_zero_is_invalid() {
        let psi = fixtures::ldp_divpoly();
        let tent = vec![aff(1, rat(2)), aff(0, rat(1)), aff(-1, rat(2))];
        let pieces = vec![
            ("0".to_string(), tent),
            ("inf".to_string(), psi.piece("inf")),
            ("1".to_string(), psi.piece("1")),
        ];
        let bad = DivisorialPolytope::new(psi.curve().clone(), segment(-2, 2), pieces).unwrap();
        let r = bad.validate();
        assert_eq!(r.verdict, Tri::No);
        assert_eq!(bad.degree_at(&[rat(2)]), rat(-2));
    }

    #[test]
    fn point_box_is_valid() {
        let psi = DivisorialPolytope::new(fixtures::ldp_curve(), segment(0, 0), vec![]).unwrap();
        assert_eq!(psi.validate().verdict, Tri::Yes);
        assert_eq!(psi.degree_number().unwrap(), rat(0));
        assert_eq!(psi.is_smooth().unwrap().verdict, Tri::Yes);
        assert_eq!(psi.ehrhart().unwrap(), UniPoly::from_ints(&[1]));
    }

    #[test]
    fn redundant_affines_are_dropped() {
        let psi = fixtures::ldp_divpoly();
        let mut affs = psi.piece("0");
        affs.push(aff(0, rat(7)));
        affs.push(aff(1, rat(1)));
        let q = DivisorialPolytope::new(
            psi.curve().clone(),
            segment(-2, 2),
            vec![
                ("0".to_string(), affs),
                ("inf".to_string(), psi.piece("inf")),
                ("1".to_string(), psi.piece("1")),
            ],
        )
        .unwrap();
        assert_eq!(q, psi);
    }

    #[test]
    fn scale_and_add_agree() {
        let psi = fixtures::ldp_divpoly();
        let two = psi.scale(2).unwrap();
        assert_eq!(two.box_polytope(), &segment(-4, 4));
        assert_eq!(
            two.piece("0"),
            vec![aff(0, rat(4)), aff(1, rat(2)), aff(2, rat(4))]
        );
        assert_eq!(psi.add(&psi).unwrap(), two);
        let zero = DivisorialPolytope::new(psi.curve().clone(), segment(0, 0), vec![]).unwrap();
        assert_eq!(psi.add(&zero).unwrap(), psi);
    }

    #[test]
    fn sup_convolution_matches_brute_force() {
        let psi = fixtures::ldp_divpoly();
        let other = DivisorialPolytope::new(
            psi.curve().clone(),
            segment(0, 1),
            vec![("inf".to_string(), vec![aff(-1, rat(0))])],
        )
        .unwrap();
        let sum = psi.add(&other).unwrap();
        for num in -8..=12 {
            let u = frac(num, 4);
            for l in ["0", "inf", "1"] {
                // maximize over u' in [0, 1], sampled finely enough for the
                // breakpoints at quarter integers
                let best = (0..=4)
                    .map(|j| frac(j, 4))
                    .filter(|&b| (u - b) >= rat(-2) && (u - b) <= rat(2))
                    .map(|b| psi.eval_at(l, &[u - b]) + other.eval_at(l, &[b]))
                    .max()
                    .unwrap();
                assert_eq!(sum.eval_at(l, &[u]), best, "{l} at {u}");
            }
        }
    }

    #[test]
    fn delta_polytopes() {
        let psi = fixtures::ldp_divpoly();
        let all: Vec<String> = psi.support();
        let d = psi.delta_polytope(&all).unwrap();
        let expect =
            Polyhedron::from_lattice(2, &[vec![-2, 0], vec![-1, 1], vec![1, 1], vec![2, 0]], &[])
                .unwrap();
        assert_eq!(d, expect);
        let e = psi.delta_polytope(&[]).unwrap();
        assert_eq!(
            e,
            expect
                .linear_image(&[vec![rat(1), rat(0)], vec![rat(0), rat(-1)]])
                .unwrap()
        );
        let inf = psi.delta_polytope(&["inf".to_string()]).unwrap();
        assert_eq!(euclidean_volume(&inf).unwrap(), rat(3));
        assert_eq!(psi.degree_number().unwrap(), rat(6));
        assert_eq!(psi.scale(2).unwrap().degree_number().unwrap(), rat(24));
    }

    #[test]
    fn tilde_deltas_and_ehrhart() {
        let psi = fixtures::ldp_divpoly();
        let t0 = psi.tilde_delta("0").unwrap();
        let expect = Polyhedron::from_lattice(
            2,
            &[
                vec![-2, -2],
                vec![-1, 0],
                vec![1, 2],
                vec![2, 2],
                vec![2, -2],
            ],
            &[],
        )
        .unwrap();
        assert_eq!(t0, expect);
        let ti = psi.tilde_delta("inf").unwrap();
        let expect =
            Polyhedron::from_lattice(2, &[vec![-2, 1], vec![2, -1], vec![-2, -1]], &[]).unwrap();
        assert_eq!(ti, expect);
        assert_eq!(
            psi.tilde_delta("generic").unwrap(),
            Polyhedron::from_lattice(2, &[vec![-2, 0], vec![2, 0]], &[]).unwrap()
        );
        assert_eq!(psi.ehrhart().unwrap(), UniPoly::from_ints(&[1, 2, 3]));
        assert_eq!(
            psi.hilbert_polynomial().unwrap(),
            Hilbert::Exact(UniPoly::from_ints(&[1, 2, 3]))
        );
    }

    #[test]
    fn ehrhart_matches_floor_degree_sum() {
        let psi = fixtures::ldp_divpoly();
        let e = psi.ehrhart().unwrap();
        for k in 1..=3 {
            let pk = psi.scale(k).unwrap();
            let direct: i128 = lattice_points(pk.box_polytope(), 1)
                .unwrap()
                .iter()
                .map(|u| 1 + pk.eval(&to_rat(u)).floor().degree().to_integer())
                .sum();
            assert_eq!(e.eval_int(k), Rat::from_integer(direct));
            assert_eq!(pk.ehrhart().unwrap().eval_int(1), e.eval_int(k));
        }
        assert_eq!(lattice_point_count(psi.box_polytope(), 1).unwrap(), 5);
    }

    #[test]
    fn genus_one_gives_bounds() {
        let psi = fixtures::ldp_divpoly();
        let curve = Curve::abstract_curve(1, &["0", "inf", "1"]).unwrap();
        let g1 = psi.with_curve(curve).unwrap();
        let e = UniPoly::from_ints(&[1, 2, 3]);
        let eb = UniPoly::from_ints(&[1, 4]);
        assert_eq!(
            g1.hilbert_polynomial().unwrap(),
            Hilbert::Bounds {
                upper: e.clone(),
                lower: &e - &eb
            }
        );
    }

    #[test]
    fn smoothness() {
        let psi = fixtures::ldp_divpoly();
        assert_eq!(psi.smooth_at("0", &[rat(-1)]).unwrap(), Tri::Yes);
        assert_eq!(psi.smooth_at("0", &[rat(1)]).unwrap(), Tri::Yes);
        for l in ["0", "inf", "1", GENERIC] {
            assert_eq!(psi.smooth_at(l, &[rat(2)]).unwrap(), Tri::No);
            assert_eq!(psi.smooth_at(l, &[rat(-2)]).unwrap(), Tri::No);
        }
        assert!(psi.smooth_at("inf", &[rat(0)]).is_err());
        let r = psi.is_smooth().unwrap();
        assert_eq!(r.verdict, Tri::No);
        assert_eq!(
            r.witnesses,
            vec![
                ("P".to_string(), vec![rat(-2)]),
                ("P".to_string(), vec![rat(2)])
            ]
        );
    }

    fn unit_square_downgrade() -> DivisorialPolytope {
        let sq =
            Polyhedron::from_lattice(2, &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], &[])
                .unwrap();
        DivisorialPolytope::toric_downgrade(&sq, &[0, 1], &[vec![1, 0]], &[vec![1], vec![0]])
            .unwrap()
    }

    #[test]
    fn downgrades() {
        let d = unit_square_downgrade();
        assert_eq!(d.box_polytope(), &segment(0, 1));
        assert_eq!(d.piece("0"), vec![aff(0, rat(1))]);
        assert!(!d.pieces().contains_key("inf"));
        assert_eq!(d.is_smooth().unwrap().verdict, Tri::Yes);
        let seg = Polyhedron::from_lattice(2, &[vec![0, 0], vec![1, 1]], &[]).unwrap();
        let d =
            DivisorialPolytope::toric_downgrade(&seg, &[0, 1], &[vec![1, 0]], &[vec![1], vec![0]])
                .unwrap();
        assert_eq!(d.piece("0"), vec![aff(1, rat(0))]);
        assert_eq!(d.piece("inf"), vec![aff(-1, rat(0))]);
        assert!(DivisorialPolytope::toric_downgrade(
            &seg,
            &[1, 1],
            &[vec![1, 0]],
            &[vec![1], vec![0]]
        )
        .is_err());
    }

    #[test]
    fn ehrhart_with_two_pieces_is_that_of_delta() {
        let d = unit_square_downgrade();
        let shifted = DivisorialPolytope::new(
            d.curve().clone(),
            segment(0, 2),
            vec![
                ("0".to_string(), vec![aff(0, rat(1)), aff(-1, rat(3))]),
                ("inf".to_string(), vec![aff(0, rat(0))]),
            ],
        )
        .unwrap();
        for p in [d, shifted] {
            let l = p.support()[0].clone();
            let delta = p.delta_polytope(&[l]).unwrap();
            assert_eq!(p.ehrhart().unwrap(), ehrhart(&delta).unwrap());
        }
    }

    #[test]
    fn dualize_fixture() {
        let psi = fixtures::ldp_divpoly();
        let (xi, h) = psi.dualize().unwrap();
        assert_eq!(xi, fixtures::ldp_fansy());
        assert_eq!(h, fixtures::ldp_support_function());
        assert_eq!(h.dualize().unwrap(), psi);
    }

    #[test]
    fn equivalence_search() {
        let psi = fixtures::ldp_divpoly();
        assert_eq!(psi.equivalent_rank1(&psi).unwrap(), Tri::Yes);
        let shifted = DivisorialPolytope::new(
            psi.curve().clone(),
            segment(-2, 2),
            vec![
                (
                    "0".to_string(),
                    psi.piece("0")
                        .iter()
                        .map(|f| f.add(&aff(-1, rat(0))))
                        .collect(),
                ),
                (
                    "inf".to_string(),
                    psi.piece("inf")
                        .iter()
                        .map(|f| f.add(&aff(1, rat(0))))
                        .collect(),
                ),
                ("1".to_string(), psi.piece("1")),
            ],
        )
        .unwrap();
        assert_eq!(psi.equivalent_rank1(&shifted).unwrap(), Tri::Yes);
        assert_eq!(
            psi.equivalent_rank1(&psi.scale(2).unwrap()).unwrap(),
            Tri::No
        );
        let moved = Curve::projective_line(&[
            ("0", Coord::Finite(rat(0))),
            ("inf", Coord::Finite(rat(5))),
            ("1", Coord::Infinity),
        ])
        .unwrap();
        assert_eq!(
            psi.equivalent_rank1(&psi.with_curve(moved).unwrap())
                .unwrap(),
            Tri::Yes
        );
        let lopsided = DivisorialPolytope::new(
            psi.curve().clone(),
            segment(-2, 2),
            vec![
                ("0".to_string(), psi.piece("0")),
                ("inf".to_string(), vec![aff(-1, rat(0))]),
            ],
        )
        .unwrap();
        assert_eq!(psi.equivalent_rank1(&lopsided).unwrap(), Tri::No);
    }
}
