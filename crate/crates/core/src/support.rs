//! Piecewise affine support functions on marked fansy divisors.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::curve::{h0, is_principal, QDivisor, Tri, H0};
use crate::divpoly::DivisorialPolytope;
use crate::error::{Error, Result};
use crate::fansy::MarkedFansyDivisor;
use crate::geometry::linalg::{
    denominator_lcm, dot, dot_int, is_integral, scale, sub, to_rat, Rat, RatVec,
};
use crate::geometry::{Cone, Hrep, Polyhedron};

/// The affine function `v -> <gradient, v> + constant`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Affine {
    pub gradient: RatVec,
    pub constant: Rat,
}

impl Affine {
    pub fn new(gradient: RatVec, constant: Rat) -> Affine {
        Affine { gradient, constant }
    }

    pub fn eval(&self, v: &[Rat]) -> Rat {
        dot(&self.gradient, v) + self.constant
    }

    pub fn scale(&self, k: Rat) -> Affine {
        Affine::new(scale(&self.gradient, k), self.constant * k)
    }

    pub fn add(&self, o: &Affine) -> Affine {
        Affine::new(
            self.gradient
                .iter()
                .zip(&o.gradient)
                .map(|(a, b)| a + b)
                .collect(),
            self.constant + o.constant,
        )
    }

    /// Whether `self >= other` on the polyhedron `p`.
    pub fn dominates_on(&self, other: &Affine, p: &Polyhedron) -> bool {
        let diff = sub(&self.gradient, &other.gradient);
        p.vertices().iter().all(|v| self.eval(v) >= other.eval(v))
            && p.rays().iter().all(|r| !dot_int(&diff, r).is_negative())
    }

    /// Whether `self` and `other` agree on the polyhedron `p`.
    pub fn agrees_on(&self, other: &Affine, p: &Polyhedron) -> bool {
        self.dominates_on(other, p) && other.dominates_on(self, p)
    }
}

/// A cell of a slice together with the affine function on it.
pub type Piece = Vec<(Polyhedron, Affine)>;

/// `h = sum_P h_P (x) P` on a marked fansy divisor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportFunction {
    base: MarkedFansyDivisor,
    linear: Vec<(Cone, RatVec)>,
    pieces: BTreeMap<String, Piece>,
}

impl SupportFunction {
    /// Builds and checks a support function: one gradient per full cone of
    /// the tail fan, one affine function per cell of every nontrivial slice.
    pub fn new(
        base: MarkedFansyDivisor,
        linear: impl IntoIterator<Item = (Cone, RatVec)>,
        pieces: impl IntoIterator<Item = (String, Piece)>,
    ) -> Result<SupportFunction> {
        let n = base.ambient_dim();
        let mut lin: Vec<(Cone, RatVec)> = linear.into_iter().collect();
        lin.sort();
        lin.dedup();
        let full = base.tailfan().full_dimensional();
        let cones: Vec<Cone> = lin.iter().map(|(c, _)| c.clone()).collect();
        if cones != full {
            return Err(Error::Invalid(
                "linear part must give one gradient per full-dimensional cone of the tail fan"
                    .to_string(),
            ));
        }
        for (c, g) in &lin {
            if g.len() != n || !is_integral(g) {
                return Err(Error::Invalid(format!(
                    "gradient on {c} is not a lattice point"
                )));
            }
        }
        let mut map = BTreeMap::new();
        for (label, mut cells) in pieces {
            cells.sort();
            let mut expected = base.slice(&label);
            expected.sort();
            let got: Vec<Polyhedron> = cells.iter().map(|(c, _)| c.clone()).collect();
            if got != expected {
                return Err(Error::Invalid(format!(
                    "cells of the piece at {label} do not match the slice"
                )));
            }
            map.insert(label, cells);
        }
        for label in base.support() {
            if !map.contains_key(&label) {
                return Err(Error::Invalid(format!("missing piece at {label}")));
            }
        }
        let h = SupportFunction {
            base,
            linear: lin,
            pieces: map,
        };
        h.check()?;
        let default = h.default_piece();
        let mut h = h;
        h.pieces.retain(|_, p| *p != default);
        Ok(h)
    }

    fn default_piece(&self) -> Piece {
        self.linear
            .iter()
            .map(|(c, g)| {
                (
                    Polyhedron::from_cone(c).expect("pointed cone"),
                    Affine::new(g.clone(), Rat::zero()),
                )
            })
            .collect()
    }

    fn check(&self) -> Result<()> {
        let lin = self.default_piece();
        check_continuity("linear part", &lin)?;
        for (label, cells) in &self.pieces {
            check_continuity(label, cells)?;
            for (cell, a) in cells {
                if !is_integral(&a.gradient) {
                    return Err(Error::Invalid(format!(
                        "gradient on cell {cell} at {label} is not a lattice point"
                    )));
                }
                for v in cell.vertices() {
                    let k = Rat::from_integer(denominator_lcm(v));
                    if !(a.eval(v) * k).is_integer() {
                        return Err(Error::Invalid(format!(
                            "value at vertex {v:?} of {cell} at {label} violates integrality"
                        )));
                    }
                }
                if cell.tail().is_full_dimensional() {
                    let u = self.gradient_on(&cell.tail())?;
                    if u != a.gradient {
                        return Err(Error::Invalid(format!(
                            "slope on the cell {cell} at {label} differs from the linear part"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &MarkedFansyDivisor {
        &self.base
    }

    pub fn linear(&self) -> &[(Cone, RatVec)] {
        &self.linear
    }

    /// Nontrivial pieces.
    pub fn pieces(&self) -> &BTreeMap<String, Piece> {
        &self.pieces
    }

    pub fn piece(&self, label: &str) -> Piece {
        self.pieces
            .get(label)
            .cloned()
            .unwrap_or_else(|| self.default_piece())
    }

    /// Points with a nontrivial slice or a nontrivial piece.
    fn labels(&self) -> Vec<String> {
        let mut out: BTreeSet<String> = self.base.support().into_iter().collect();
        out.extend(self.pieces.keys().cloned());
        out.into_iter().collect()
    }

    /// `u_sigma`, the gradient of the linear part on a full cone.
    pub fn gradient_on(&self, sigma: &Cone) -> Result<RatVec> {
        self.linear
            .iter()
            .find(|(c, _)| c == sigma)
            .map(|(_, g)| g.clone())
            .ok_or_else(|| Error::Invalid(format!("{sigma} is not a full cone of the tail fan")))
    }

    pub fn eval(&self, label: &str, v: &[Rat]) -> Rat {
        let piece = self.piece(label);
        piece
            .iter()
            .find(|(c, _)| c.contains(v))
            .map(|(_, a)| a.eval(v))
            .expect("slices are complete")
    }

    /// `h|sigma(0) = sum_P a_P P` from the affine constants on the cells
    /// with tail `sigma`.
    pub fn restrict_zero(&self, sigma: &Cone) -> Result<QDivisor> {
        if !sigma.is_full_dimensional() || !self.base.tailfan().contains(sigma) {
            return Err(Error::Invalid(format!(
                "{sigma} is not a full-dimensional cone of the tail fan"
            )));
        }
        let mut d = QDivisor::zero();
        for (label, cells) in &self.pieces {
            let (_, a) = cells
                .iter()
                .find(|(c, _)| &c.tail() == sigma)
                .expect("slice has a cell for every full cone");
            d.add_at(label, a.constant);
        }
        Ok(d)
    }

    pub fn is_cartier(&self) -> Tri {
        Tri::all(
            self.base
                .marks()
                .iter()
                .filter(|s| s.is_full_dimensional())
                .map(|s| {
                    is_principal(
                        self.base.curve(),
                        &self.restrict_zero(s).expect("marked cone"),
                    )
                }),
        )
    }

    /// Strict concavity of every piece and of the linear part, plus
    /// `-deg h|sigma(0) > 0` on unmarked full cones.
    pub fn is_ample(&self) -> Result<Tri> {
        self.ample_report().map(|(t, _)| t)
    }

    /// Ampleness verdict with the first failure, if any.
    pub fn ample_report(&self) -> Result<(Tri, Option<String>)> {
        let cartier = self.is_cartier();
        if cartier == Tri::No {
            return Err(Error::NotAmple(
                "support function is not Cartier".to_string(),
            ));
        }
        let mut pieces: Vec<(String, Piece)> =
            vec![("linear part".to_string(), self.default_piece())];
        pieces.extend(self.pieces.iter().map(|(l, p)| (l.clone(), p.clone())));
        for (label, cells) in &pieces {
            if let Some(why) = concavity_failure(cells) {
                return Ok((Tri::No, Some(format!("{label}: {why}"))));
            }
        }
        for s in self.base.tailfan().full_dimensional() {
            if self.base.marks().contains(&s) {
                continue;
            }
            let deg = self.restrict_zero(&s)?.degree();
            if !(-deg).is_positive() {
                return Ok((
                    Tri::No,
                    Some(format!("unmarked cone {s} has -deg h|(0) = {} <= 0", -deg)),
                ));
            }
        }
        Ok((cartier, None))
    }

    /// `Box_h = intersection over full cones of (u_sigma + sigma^dual)`.
    pub fn weight_polytope(&self) -> Polyhedron {
        let n = self.base.ambient_dim();
        let mut h = Hrep::default();
        for (c, u) in &self.linear {
            for r in c.rays() {
                let r = to_rat(r);
                h.inequalities.push((r.clone(), dot(&r, u)));
            }
            for l in c.lineality() {
                let l = to_rat(l);
                h.equations.push((l.clone(), dot(&l, u)));
            }
        }
        Polyhedron::from_hrep(n, &h).unwrap_or_else(|_| Polyhedron::empty(n))
    }

    /// `h_P^*(u) = min over vertices v of Xi_P of <v, u> - h_P(v)`.
    pub fn conjugate_affines(&self, label: &str) -> Vec<Affine> {
        let mut out: Vec<Affine> = Vec::new();
        for (cell, a) in self.piece(label) {
            for v in cell.vertices() {
                let f = Affine::new(v.clone(), -a.eval(v));
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        }
        out.sort();
        out
    }

    /// `h^*(u)` as a divisor, for `u` in the weight polytope.
    pub fn conjugate_at(&self, u: &[Rat]) -> QDivisor {
        let mut d = QDivisor::zero();
        for label in self.pieces.keys() {
            let m = self
                .conjugate_affines(label)
                .iter()
                .map(|f| f.eval(u))
                .min()
                .expect("slices have vertices");
            d.add_at(label, m);
        }
        d
    }

    pub fn dualize(&self) -> Result<DivisorialPolytope> {
        match self.ample_report()? {
            (Tri::Yes, _) => {}
            (Tri::No, why) => return Err(Error::NotAmple(why.unwrap_or_default())),
            (Tri::Unknown, _) => {
                return Err(Error::Undecided(
                    "ampleness of the support function".to_string(),
                ))
            }
        }
        let pieces: Vec<(String, Vec<Affine>)> = self
            .pieces
            .keys()
            .map(|l| (l.clone(), self.conjugate_affines(l)))
            .collect();
        DivisorialPolytope::new(self.base.curve().clone(), self.weight_polytope(), pieces)
    }

    /// Dimension of the degree-`u` sections of the associated line bundle.
    pub fn sections_dim(&self, u: &[i64]) -> H0 {
        let ur = to_rat(u);
        let b = self.weight_polytope();
        if !b.contains(&ur) {
            return H0::Exact(0);
        }
        h0(self.base.curve(), &self.conjugate_at(&ur))
    }

    pub fn add(&self, other: &SupportFunction) -> Result<SupportFunction> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let linear: Vec<(Cone, RatVec)> = self
            .linear
            .iter()
            .zip(&other.linear)
            .map(|((c, a), (_, b))| (c.clone(), a.iter().zip(b).map(|(x, y)| x + y).collect()))
            .collect();
        let mut labels: BTreeSet<String> = self.labels().into_iter().collect();
        labels.extend(other.labels());
        let mut pieces = Vec::new();
        for label in labels {
            let a = self.piece(&label);
            let b = other.piece(&label);
            let sum: Piece = a
                .iter()
                .zip(&b)
                .map(|((c, f), (_, g))| (c.clone(), f.add(g)))
                .collect();
            pieces.push((label, sum));
        }
        SupportFunction::new(self.base.clone(), linear, pieces)
    }

    pub fn scale(&self, k: i64) -> Result<SupportFunction> {
        if k <= 0 {
            return Err(Error::Invalid("scale factor must be positive".to_string()));
        }
        let kr = Rat::from_integer(k as i128);
        let linear: Vec<(Cone, RatVec)> = self
            .linear
            .iter()
            .map(|(c, g)| (c.clone(), scale(g, kr)))
            .collect();
        let pieces: Vec<(String, Piece)> = self
            .labels()
            .into_iter()
            .map(|l| {
                let p = self
                    .piece(&l)
                    .into_iter()
                    .map(|(c, a)| (c, a.scale(kr)))
                    .collect();
                (l, p)
            })
            .collect();
        SupportFunction::new(self.base.clone(), linear, pieces)
    }

    /// The same function with different marks.
    pub fn with_base(&self, base: MarkedFansyDivisor) -> Result<SupportFunction> {
        let mut labels: BTreeSet<String> = base.support().into_iter().collect();
        labels.extend(self.pieces.keys().cloned());
        let pieces: Vec<(String, Piece)> = labels
            .into_iter()
            .map(|l| {
                let p = self.piece(&l);
                (l, p)
            })
            .collect();
        SupportFunction::new(base, self.linear.clone(), pieces)
    }
}

fn check_continuity(label: &str, cells: &[(Polyhedron, Affine)]) -> Result<()> {
    for (i, (a, f)) in cells.iter().enumerate() {
        for (b, g) in &cells[i + 1..] {
            let x = a.intersect(b)?;
            if x.is_empty() {
                continue;
            }
            if !f.agrees_on(g, &x) {
                return Err(Error::Invalid(format!(
                    "piece at {label} is discontinuous across {x}"
                )));
            }
        }
    }
    Ok(())
}

/// First violation of strict concavity, if any.
fn concavity_failure(cells: &[(Polyhedron, Affine)]) -> Option<String> {
    let n = cells.first()?.0.ambient_dim() as i64;
    for (a, f) in cells {
        for (b, g) in cells {
            if a == b {
                continue;
            }
            if !f.dominates_on(g, b) {
                return Some(format!(
                    "not concave: the function on {a} drops below it on {b}"
                ));
            }
            let x = a.intersect(b).expect("same rank");
            if x.dimension() == n - 1 && f == g {
                return Some(format!("not strictly concave across {x}"));
            }
        }
    }
    None
}
