//! Polyhedral divisors on curves.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::curve::{h0, multiple_is_principal, Curve, QDivisor, Tri, H0};
use crate::error::{Error, Result};
use crate::geometry::linalg::{to_rat, Rat, RatVec};
use crate::geometry::{Cone, Polyhedron};

/// `sum_P coeffs[P] * P` with every unlisted coefficient equal to the tail
/// cone. Coefficients may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyhedralDivisor {
    curve: Curve,
    tail: Cone,
    coeffs: BTreeMap<String, Polyhedron>,
}

/// Points removed from the base curve by empty coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Locus {
    pub removed: Vec<String>,
    pub complete: bool,
}

/// Outcome of the properness test, with a reason when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Properness {
    pub verdict: Tri,
    pub reason: Option<String>,
    pub witness: Option<RatVec>,
}

const SHIFTED_TAIL: [[i64; 2]; 2] = [[-1, 2], [1, 2]];
const SHIFTED_VERTICES: [[i64; 2]; 3] = [[-1, 2], [0, 1], [1, 2]];

impl PolyhedralDivisor {
    pub fn new(
        curve: Curve,
        tail: Cone,
        coeffs: impl IntoIterator<Item = (String, Polyhedron)>,
    ) -> Result<PolyhedralDivisor> {
        if !tail.is_pointed() {
            return Err(Error::NotPointed(tail.to_string()));
        }
        let dim = tail.ambient_dim();
        let tail_poly = Polyhedron::from_cone(&tail)?;
        let mut map = BTreeMap::new();
        for (label, p) in coeffs {
            if !curve.has_point(&label) {
                return Err(Error::UnknownPoint(label));
            }
            if p.ambient_dim() != dim {
                return Err(Error::RankMismatch {
                    expected: dim,
                    found: p.ambient_dim(),
                });
            }
            if !p.is_empty() && p.tail() != tail {
                return Err(Error::Invalid(format!(
                    "coefficient at {label} has tail {} instead of {tail}",
                    p.tail()
                )));
            }
            if map.contains_key(&label) {
                return Err(Error::Invalid(format!("point {label} listed twice")));
            }
            if p != tail_poly {
                map.insert(label, p);
            }
        }
        Ok(PolyhedralDivisor {
            curve,
            tail,
            coeffs: map,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn ambient_dim(&self) -> usize {
        self.tail.ambient_dim()
    }

    /// Nontrivial coefficients.
    pub fn coefficients(&self) -> &BTreeMap<String, Polyhedron> {
        &self.coeffs
    }

    pub fn coefficient(&self, label: &str) -> Polyhedron {
        self.coeffs
            .get(label)
            .cloned()
            .unwrap_or_else(|| Polyhedron::from_cone(&self.tail).expect("tail is pointed"))
    }

    pub fn with_curve(&self, curve: Curve) -> Result<PolyhedralDivisor> {
        PolyhedralDivisor::new(curve, self.tail.clone(), self.coeffs.clone())
    }

    pub fn locus(&self) -> Locus {
        let removed: Vec<String> = self
            .coeffs
            .iter()
            .filter(|(_, p)| p.is_empty())
            .map(|(l, _)| l.clone())
            .collect();
        Locus {
            complete: removed.is_empty(),
            removed,
        }
    }

    pub fn has_complete_locus(&self) -> bool {
        self.coeffs.values().all(|p| !p.is_empty())
    }

    /// `D(u) = sum_P min_{v in D_P} <v, u> P` over the locus.
    pub fn evaluate(&self, u: &[Rat]) -> Result<QDivisor> {
        if u.len() != self.ambient_dim() {
            return Err(Error::RankMismatch {
                expected: self.ambient_dim(),
                found: u.len(),
            });
        }
        if !self.tail.pairs_nonnegatively(u) {
            return Err(Error::OutsideDualCone(format!("{u:?}")));
        }
        let mut d = QDivisor::zero();
        for (l, p) in &self.coeffs {
            if let Some(m) = p.min_pairing(u) {
                d.add_at(l, m);
            }
        }
        Ok(d)
    }

    pub fn evaluate_lattice(&self, u: &[i64]) -> Result<QDivisor> {
        self.evaluate(&to_rat(u))
    }

    /// Minkowski sum of all coefficients; empty if some coefficient is.
    pub fn degree_poly(&self) -> Polyhedron {
        let mut acc = Polyhedron::from_cone(&self.tail).expect("tail is pointed");
        for p in self.coeffs.values() {
            acc = acc.minkowski_sum(p).expect("same rank");
        }
        acc
    }

    pub fn properness(&self) -> Properness {
        if !self.has_complete_locus() {
            return Properness {
                verdict: Tri::Yes,
                reason: None,
                witness: None,
            };
        }
        let deg = self.degree_poly();
        let tail_poly = Polyhedron::from_cone(&self.tail).expect("tail is pointed");
        if let Some(v) = deg.vertices().iter().find(|v| !self.tail.contains(v)) {
            return Properness {
                verdict: Tri::No,
                reason: Some(format!(
                    "degree polyhedron has vertex {} outside the tail cone",
                    fmt_vec(v)
                )),
                witness: Some(v.clone()),
            };
        }
        if deg == tail_poly {
            return Properness {
                verdict: Tri::No,
                reason: Some("degree polyhedron equals the tail cone".to_string()),
                witness: None,
            };
        }
        let dual = self.tail.dual();
        let mut candidates: Vec<RatVec> = dual.rays().iter().map(|r| to_rat(r)).collect();
        for l in dual.lineality() {
            candidates.push(to_rat(l));
            candidates.push(l.iter().map(|&x| Rat::from_integer(-(x as i128))).collect());
        }
        let mut verdict = Tri::Yes;
        let mut reason = None;
        let mut witness = None;
        for u in candidates {
            if deg.min_pairing(&u) != Some(Rat::zero()) {
                continue;
            }
            let du = self.evaluate(&u).expect("u in dual cone");
            let t = multiple_is_principal(&self.curve, &du);
            if t != Tri::Yes && reason.is_none() {
                reason = Some(format!(
                    "no multiple of D({}) = {du} is known to be principal",
                    fmt_vec(&u)
                ));
                witness = Some(u.clone());
            }
            verdict = verdict.and(t);
        }
        Properness {
            verdict,
            reason,
            witness,
        }
    }

    pub fn is_proper(&self) -> Tri {
        self.properness().verdict
    }

    pub fn intersect(&self, other: &PolyhedralDivisor) -> Result<PolyhedralDivisor> {
        if self.curve != other.curve {
            return Err(Error::BaseMismatch);
        }
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::RankMismatch {
                expected: self.ambient_dim(),
                found: other.ambient_dim(),
            });
        }
        let tail = self.tail.intersect(&other.tail);
        let labels: BTreeSet<&String> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        let mut coeffs = Vec::new();
        for l in labels {
            coeffs.push((
                l.clone(),
                self.coefficient(l).intersect(&other.coefficient(l))?,
            ));
        }
        PolyhedralDivisor::new(self.curve.clone(), tail, coeffs)
    }

    /// Whether `self` is a face of `d`: coefficientwise faces, the tail is a
    /// face of the tail of `d`, and `deg self = deg d ∩ tail(self)`.
    pub fn is_face_of(&self, d: &PolyhedralDivisor) -> Result<bool> {
        match d.is_proper() {
            Tri::Yes => {}
            Tri::No => return Err(Error::Invalid("divisor is not proper".to_string())),
            Tri::Unknown => {
                return Err(Error::Undecided(
                    "properness of the ambient divisor".to_string(),
                ))
            }
        }
        if self.curve != d.curve || self.ambient_dim() != d.ambient_dim() {
            return Ok(false);
        }
        if !self.tail.is_face_of(&d.tail) {
            return Ok(false);
        }
        let labels: BTreeSet<&String> = self.coeffs.keys().chain(d.coeffs.keys()).collect();
        for l in labels {
            if !d.coefficient(l).has_face(&self.coefficient(l)) {
                return Ok(false);
            }
        }
        let own_tail = Polyhedron::from_cone(&self.tail)?;
        Ok(d.degree_poly().intersect(&own_tail)? == self.degree_poly())
    }

    /// `h^0(floor D(u))`.
    pub fn weight_module_dim(&self, u: &[Rat]) -> Result<H0> {
        if !self.has_complete_locus() {
            return Err(Error::Unsupported(
                "weight modules over an affine locus are infinite-dimensional".to_string(),
            ));
        }
        Ok(h0(&self.curve, &self.evaluate(u)?))
    }

    /// Detects coefficient data whose vertices are those of the degree
    /// polyhedron of the standard example rather than of its coefficient,
    /// which makes the divisor improper.
    pub fn known_inconsistency_note(&self) -> Option<String> {
        if self.ambient_dim() != 2 {
            return None;
        }
        let tail: Vec<Vec<i64>> = SHIFTED_TAIL.iter().map(|r| r.to_vec()).collect();
        if self.tail != Cone::new(2, &tail, &[]) {
            return None;
        }
        let shifted: Vec<RatVec> = SHIFTED_VERTICES.iter().map(|v| to_rat(v)).collect();
        let hit = self
            .coeffs
            .iter()
            .find(|(_, p)| p.vertices() == shifted.as_slice())?;
        if self.is_proper() != Tri::No {
            return None;
        }
        Some(format!(
            "coefficient at {} has vertices (-1,2),(0,1),(1,2), which are the vertices of the \
             degree polyhedron rather than of a coefficient; together with the other \
             coefficients the degree polyhedron contains (-2,2), outside the tail cone, so the \
             divisor is not proper. The coefficient with vertices (0,2),(1,1),(2,2) yields the \
             proper divisor with this degree polyhedron.",
            hit.0
        ))
    }
}

pub(crate) fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}
