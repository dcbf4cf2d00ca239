//! Marked fansy divisors and their divisorial fans.

use std::collections::{BTreeMap, BTreeSet};

use crate::curve::{Curve, Tri};
use crate::error::{Error, Result};
use crate::geometry::{Cone, Fan, Polyhedron};
use crate::pdiv::PolyhedralDivisor;

/// Complete slices `Xi_P` (maximal cells only) over a common tail fan,
/// together with a set of marked cones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedFansyDivisor {
    curve: Curve,
    tailfan: Fan,
    slices: BTreeMap<String, Vec<Polyhedron>>,
    marks: BTreeSet<Cone>,
}

/// Verdict on one defining condition, with human readable witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub name: &'static str,
    pub verdict: Tri,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FansyReport {
    pub conditions: Vec<Condition>,
    pub verdict: Tri,
}

fn cone_polyhedra(fan: &Fan) -> Result<Vec<Polyhedron>> {
    fan.full_dimensional()
        .iter()
        .map(Polyhedron::from_cone)
        .collect()
}

impl MarkedFansyDivisor {
    pub fn new(
        curve: Curve,
        tailfan: Fan,
        slices: impl IntoIterator<Item = (String, Vec<Polyhedron>)>,
        marks: impl IntoIterator<Item = Cone>,
    ) -> Result<MarkedFansyDivisor> {
        let default = cone_polyhedra(&tailfan)?;
        let mut map = BTreeMap::new();
        for (label, mut cells) in slices {
            if !curve.has_point(&label) {
                return Err(Error::UnknownPoint(label));
            }
            for c in &cells {
                if c.ambient_dim() != tailfan.ambient_dim() {
                    return Err(Error::RankMismatch {
                        expected: tailfan.ambient_dim(),
                        found: c.ambient_dim(),
                    });
                }
            }
            cells.sort();
            cells.dedup();
            if map.insert(label.clone(), cells.clone()).is_some() {
                return Err(Error::Invalid(format!("slice at {label} listed twice")));
            }
            if cells == default {
                map.remove(&label);
            }
        }
        let marks: BTreeSet<Cone> = marks.into_iter().collect();
        if let Some(m) = marks.iter().find(|m| !tailfan.contains(m)) {
            return Err(Error::Invalid(format!(
                "marked cone {m} is not in the tail fan"
            )));
        }
        Ok(MarkedFansyDivisor {
            curve,
            tailfan,
            slices: map,
            marks,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn tailfan(&self) -> &Fan {
        &self.tailfan
    }

    pub fn marks(&self) -> &BTreeSet<Cone> {
        &self.marks
    }

    pub fn ambient_dim(&self) -> usize {
        self.tailfan.ambient_dim()
    }

    /// Points with a nontrivial slice.
    pub fn support(&self) -> Vec<String> {
        self.slices.keys().cloned().collect()
    }

    pub fn nontrivial_slices(&self) -> &BTreeMap<String, Vec<Polyhedron>> {
        &self.slices
    }

    /// Maximal cells of the slice at `label`.
    pub fn slice(&self, label: &str) -> Vec<Polyhedron> {
        match self.slices.get(label) {
            Some(c) => c.clone(),
            None => cone_polyhedra(&self.tailfan).expect("pointed tail fan"),
        }
    }

    pub fn with_marks(&self, marks: impl IntoIterator<Item = Cone>) -> Result<MarkedFansyDivisor> {
        MarkedFansyDivisor::new(
            self.curve.clone(),
            self.tailfan.clone(),
            self.slices.clone(),
            marks,
        )
    }

    pub fn with_curve(&self, curve: Curve) -> Result<MarkedFansyDivisor> {
        MarkedFansyDivisor::new(
            curve,
            self.tailfan.clone(),
            self.slices.clone(),
            self.marks.clone(),
        )
    }

    fn check_slice(&self, label: &str, cells: &[Polyhedron], witnesses: &mut Vec<String>) {
        let n = self.ambient_dim() as i64;
        let full_cones = self.tailfan.full_dimensional();
        for c in cells {
            if c.dimension() != n {
                witnesses.push(format!("{label}: cell {c} is not full-dimensional"));
            }
        }
        let tails: Vec<Cone> = cells.iter().map(|c| c.tail()).collect();
        for s in &full_cones {
            let k = tails.iter().filter(|t| *t == s).count();
            if k != 1 {
                witnesses.push(format!("{label}: {k} cells have tail {s}"));
            }
        }
        for c in cells {
            for f in c.faces() {
                if !self.tailfan.contains(&f.tail()) {
                    witnesses.push(format!("{label}: face {f} has tail outside the tail fan"));
                }
            }
        }
        for (i, a) in cells.iter().enumerate() {
            for b in &cells[i + 1..] {
                let x = a.intersect(b).expect("same rank");
                if !(a.has_face(&x) && b.has_face(&x)) {
                    witnesses.push(format!(
                        "{label}: cells {a} and {b} do not meet in a common face"
                    ));
                } else if x.dimension() == n {
                    witnesses.push(format!("{label}: cells {a} and {b} overlap"));
                }
            }
        }
        for c in cells {
            for f in c.faces() {
                if f.dimension() != n - 1 {
                    continue;
                }
                let shared = cells.iter().any(|d| d != c && d.has_face(&f));
                if !shared {
                    witnesses.push(format!("{label}: facet {f} of {c} lies on the boundary"));
                }
            }
        }
    }

    pub fn validate(&self) -> FansyReport {
        let mut w1 = Vec::new();
        if !self.tailfan.is_complete() {
            w1.push("tail fan is not complete".to_string());
        }
        for (label, cells) in &self.slices {
            self.check_slice(label, cells, &mut w1);
        }
        let c1 = Condition {
            name: "complete subdivisions with tail fan",
            verdict: Tri::from_bool(w1.is_empty()),
            witnesses: w1,
        };
        if c1.verdict != Tri::Yes {
            let skipped = |name| Condition {
                name,
                verdict: Tri::Unknown,
                witnesses: vec!["not checked: slices are malformed".to_string()],
            };
            return FansyReport {
                conditions: vec![
                    c1,
                    skipped("marked full cones are proper"),
                    skipped("faces marked iff degree meets them"),
                    skipped("marks closed upwards"),
                ],
                verdict: Tri::No,
            };
        }

        let mut v2 = Tri::Yes;
        let mut w2 = Vec::new();
        let mut w3 = Vec::new();
        for s in self.marks.iter().filter(|s| s.is_full_dimensional()) {
            let d = self.dsigma(s).expect("validated slices");
            let p = d.properness();
            if p.verdict != Tri::Yes {
                w2.push(format!(
                    "{s}: {}",
                    p.reason
                        .unwrap_or_else(|| "properness undecided".to_string())
                ));
            }
            v2 = v2.and(p.verdict);
            let deg = d.degree_poly();
            for t in s.faces() {
                if &t == s {
                    continue;
                }
                let meets = !deg
                    .intersect(&Polyhedron::from_cone(&t).expect("face of pointed cone"))
                    .expect("same rank")
                    .is_empty();
                if meets != self.marks.contains(&t) {
                    w3.push(format!(
                        "face {t} of {s}: degree {} it but it is {}",
                        if meets { "meets" } else { "misses" },
                        if self.marks.contains(&t) {
                            "marked"
                        } else {
                            "unmarked"
                        }
                    ));
                }
            }
        }
        let mut w4 = Vec::new();
        for t in &self.marks {
            for s in self.tailfan.cones() {
                if s != t && t.is_face_of(s) && !self.marks.contains(s) {
                    w4.push(format!("{t} is marked but {s} is not"));
                }
            }
        }
        let c2 = Condition {
            name: "marked full cones are proper",
            verdict: v2,
            witnesses: w2,
        };
        let c3 = Condition {
            name: "faces marked iff degree meets them",
            verdict: Tri::from_bool(w3.is_empty()),
            witnesses: w3,
        };
        let c4 = Condition {
            name: "marks closed upwards",
            verdict: Tri::from_bool(w4.is_empty()),
            witnesses: w4,
        };
        let verdict = Tri::all([c1.verdict, c2.verdict, c3.verdict, c4.verdict]);
        FansyReport {
            conditions: vec![c1, c2, c3, c4],
            verdict,
        }
    }

    /// `D^sigma`: the cells with tail `sigma`, one per point.
    pub fn dsigma(&self, sigma: &Cone) -> Result<PolyhedralDivisor> {
        if !sigma.is_full_dimensional() || !self.tailfan.contains(sigma) {
            return Err(Error::Invalid(format!(
                "{sigma} is not a full-dimensional cone of the tail fan"
            )));
        }
        let mut coeffs = Vec::new();
        for (label, cells) in &self.slices {
            let mut hits = cells.iter().filter(|c| &c.tail() == sigma);
            let cell = hits.next().ok_or_else(|| {
                Error::Invalid(format!("no cell of the slice at {label} has tail {sigma}"))
            })?;
            if hits.next().is_some() {
                return Err(Error::Invalid(format!(
                    "several cells of the slice at {label} have tail {sigma}"
                )));
            }
            coeffs.push((label.clone(), cell.clone()));
        }
        PolyhedralDivisor::new(self.curve.clone(), sigma.clone(), coeffs)
    }

    /// The divisorial fan generated by the `D^sigma` of marked cones and the
    /// affine-locus divisors of cells with unmarked tail, closed under
    /// intersection.
    pub fn to_divisorial_fan(&self) -> Result<Vec<PolyhedralDivisor>> {
        let report = self.validate();
        if report.verdict != Tri::Yes {
            return Err(Error::Invalid(format!(
                "marked fansy divisor fails validation: {}",
                first_failure(&report)
            )));
        }
        let mut gens: Vec<PolyhedralDivisor> = Vec::new();
        for s in self.marks.iter().filter(|s| s.is_full_dimensional()) {
            gens.push(self.dsigma(s)?);
        }
        let labels: Vec<String> = self
            .curve
            .points()
            .iter()
            .map(|p| p.label.clone())
            .collect();
        // trivial slices are not stored but still contribute charts
        for label in &labels {
            for cell in &self.slice(label) {
                let tail = cell.tail();
                if self.marks.contains(&tail) {
                    continue;
                }
                let others: Vec<&String> = labels.iter().filter(|l| *l != label).collect();
                if others.is_empty() {
                    return Err(Error::Unsupported(
                        "an affine chart needs a second point on the curve".to_string(),
                    ));
                }
                let mut coeffs = vec![(label.clone(), cell.clone())];
                coeffs.extend(
                    others
                        .into_iter()
                        .map(|l| (l.clone(), Polyhedron::empty(self.ambient_dim()))),
                );
                gens.push(PolyhedralDivisor::new(self.curve.clone(), tail, coeffs)?);
            }
        }
        let mut all: Vec<PolyhedralDivisor> = Vec::new();
        for g in gens {
            if !all.contains(&g) {
                all.push(g);
            }
        }
        loop {
            let mut fresh = Vec::new();
            for (i, a) in all.iter().enumerate() {
                for b in &all[i + 1..] {
                    let x = a.intersect(b)?;
                    if !all.contains(&x) && !fresh.contains(&x) {
                        fresh.push(x);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            all.extend(fresh);
        }
        Ok(all)
    }

    /// Reassembles slices and marks from a divisorial fan.
    pub fn from_divisorial_fan(s: &[PolyhedralDivisor]) -> Result<MarkedFansyDivisor> {
        let first = s
            .first()
            .ok_or_else(|| Error::Invalid("empty divisorial fan".to_string()))?;
        let curve = first.curve().clone();
        let n = first.ambient_dim();
        if s.iter().any(|d| d.curve() != &curve) {
            return Err(Error::BaseMismatch);
        }
        for (i, a) in s.iter().enumerate() {
            for (j, b) in s.iter().enumerate().skip(i + 1) {
                let x = a.intersect(b)?;
                if !s.contains(&x) {
                    return Err(Error::Invalid(format!(
                        "intersection of members {i} and {j} is missing"
                    )));
                }
                for (k, d) in [(i, a), (j, b)] {
                    if d.is_proper() == Tri::Yes && !x.is_face_of(d)? {
                        return Err(Error::Invalid(format!(
                            "intersection of members {i} and {j} is not a face of member {k}"
                        )));
                    }
                }
            }
        }
        let tails: Vec<Cone> = s.iter().map(|d| d.tail().clone()).collect();
        let tailfan = Fan::from_maximal(n, &tails);
        let mut labels: BTreeSet<String> = BTreeSet::new();
        for d in s {
            labels.extend(d.coefficients().keys().cloned());
        }
        let mut slices = Vec::new();
        for l in labels {
            let mut cells: BTreeSet<Polyhedron> = BTreeSet::new();
            for d in s {
                let c = d.coefficient(&l);
                if c.dimension() == n as i64 {
                    cells.insert(c);
                }
            }
            slices.push((l, cells.into_iter().collect()));
        }
        let marks: Vec<Cone> = s
            .iter()
            .filter(|d| d.has_complete_locus())
            .map(|d| d.tail().clone())
            .collect();
        MarkedFansyDivisor::new(curve, tailfan, slices, marks)
    }
}

pub(crate) fn first_failure(r: &FansyReport) -> String {
    r.conditions
        .iter()
        .find(|c| c.verdict != Tri::Yes)
        .map(|c| {
            format!(
                "{}: {}",
                c.name,
                c.witnesses.first().cloned().unwrap_or_default()
            )
        })
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::linalg::{frac, rat};

    fn ray(x: i64) -> Cone {
        Cone::new(1, &[vec![x]], &[])
    }

    #[test]
    fn fixture_is_valid() {
        let x = fixtures::ldp_fansy();
        let r = x.validate();
        assert_eq!(r.verdict, Tri::Yes, "{r:?}");
        let unmarked = x.with_marks([ray(-1)]).unwrap();
        assert_eq!(unmarked.validate().verdict, Tri::Yes);
        let bad = x.with_marks([Cone::zero(1)]).unwrap();
        let r = bad.validate();
        assert_eq!(r.verdict, Tri::No);
        assert_eq!(r.conditions[3].verdict, Tri::No);
    }

    #[test]
    fn dsigma_cells() {
        let x = fixtures::ldp_fansy();
        let d = x.dsigma(&ray(1)).unwrap();
        assert_eq!(d.coefficient("0").vertices(), &[vec![rat(2)]]);
        assert_eq!(d.coefficient("inf").vertices(), &[vec![frac(-1, 2)]]);
        assert_eq!(d.is_proper(), Tri::Yes);
        let d = x.dsigma(&ray(-1)).unwrap();
        assert_eq!(d.coefficient("0").vertices(), &[vec![rat(0)]]);
        assert!(x.dsigma(&Cone::zero(1)).is_err());
    }

    #[test]
    fn divisorial_fan_round_trip() {
        let x = fixtures::ldp_fansy();
        let s = x.to_divisorial_fan().unwrap();
        let marked = s.iter().filter(|d| d.has_complete_locus()).count();
        assert_eq!(marked, 2);
        for d in &s {
            let host = s
                .iter()
                .any(|h| h.is_proper() == Tri::Yes && d.is_face_of(h).unwrap_or(false));
            assert!(host);
        }
        assert_eq!(MarkedFansyDivisor::from_divisorial_fan(&s).unwrap(), x);
        let none = x.with_marks([]).unwrap();
        let s = none.to_divisorial_fan().unwrap();
        // four cells at 0 and two at each of the other points
        assert!(s.iter().all(|d| !d.has_complete_locus()));
        assert_eq!(MarkedFansyDivisor::from_divisorial_fan(&s).unwrap(), none);
    }

    #[test]
    fn missing_intersection_is_rejected() {
        let x = fixtures::ldp_fansy();
        let a = x.dsigma(&ray(1)).unwrap();
        let b = x.dsigma(&ray(-1)).unwrap();
        assert!(MarkedFansyDivisor::from_divisorial_fan(&[a, b]).is_err());
    }
}
