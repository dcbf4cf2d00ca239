//! Base curves, rational divisors on them, and section spaces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::linalg::{rank, Rat, RatVec};
use crate::geometry::UniPoly;

/// Three-valued verdict for questions that are not always decidable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            _ => Tri::Unknown,
        }
    }

    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::Yes, _) | (_, Tri::Yes) => Tri::Yes,
            (Tri::No, Tri::No) => Tri::No,
            _ => Tri::Unknown,
        }
    }

    pub fn all(items: impl IntoIterator<Item = Tri>) -> Tri {
        items.into_iter().fold(Tri::Yes, Tri::and)
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Coordinate of a point of the projective line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Finite(Rat),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId {
    pub label: String,
    pub coord: Option<Coord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    ProjectiveLine,
    Abstract { genus: u32 },
}

/// A smooth complete curve with a finite list of named points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    kind: CurveKind,
    points: Vec<PointId>,
}

/// Label reserved for a point outside every support.
pub const GENERIC: &str = "generic";

impl Curve {
    pub fn projective_line(points: &[(&str, Coord)]) -> Result<Curve> {
        let pts: Vec<PointId> = points
            .iter()
            .map(|(l, c)| PointId {
                label: l.to_string(),
                coord: Some(*c),
            })
            .collect();
        Curve::new(CurveKind::ProjectiveLine, pts)
    }

    pub fn abstract_curve(genus: u32, labels: &[&str]) -> Result<Curve> {
        let pts: Vec<PointId> = labels
            .iter()
            .map(|l| PointId {
                label: l.to_string(),
                coord: None,
            })
            .collect();
        Curve::new(CurveKind::Abstract { genus }, pts)
    }

    pub fn new(kind: CurveKind, points: Vec<PointId>) -> Result<Curve> {
        let mut labels = BTreeSet::new();
        let mut coords = BTreeSet::new();
        for p in &points {
            if p.label == GENERIC {
                return Err(Error::InvalidCurve(format!("label {GENERIC} is reserved")));
            }
            if !labels.insert(p.label.clone()) {
                return Err(Error::InvalidCurve(format!("duplicate label {}", p.label)));
            }
            match (kind, p.coord) {
                (CurveKind::ProjectiveLine, Some(c)) => {
                    if !coords.insert(c) {
                        return Err(Error::InvalidCurve(format!(
                            "two points share the coordinate of {}",
                            p.label
                        )));
                    }
                }
                (CurveKind::ProjectiveLine, None) => {
                    return Err(Error::InvalidCurve(format!(
                        "point {} needs a coordinate",
                        p.label
                    )))
                }
                (CurveKind::Abstract { .. }, Some(_)) => {
                    return Err(Error::InvalidCurve(format!(
                        "point {} on an abstract curve cannot carry a coordinate",
                        p.label
                    )))
                }
                (CurveKind::Abstract { .. }, None) => {}
            }
        }
        Ok(Curve { kind, points })
    }

    /// The projective line with the points 0, infinity and 1.
    pub fn standard_p1() -> Curve {
        Curve::projective_line(&[
            ("0", Coord::Finite(Rat::zero())),
            ("inf", Coord::Infinity),
            ("1", Coord::Finite(Rat::one())),
        ])
        .expect("distinct points")
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn genus(&self) -> u32 {
        match self.kind {
            CurveKind::ProjectiveLine => 0,
            CurveKind::Abstract { genus } => genus,
        }
    }

    pub fn is_p1(&self) -> bool {
        self.kind == CurveKind::ProjectiveLine
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn point(&self, label: &str) -> Option<&PointId> {
        self.points.iter().find(|p| p.label == label)
    }

    pub fn has_point(&self, label: &str) -> bool {
        self.point(label).is_some()
    }

    pub fn coord(&self, label: &str) -> Result<Coord> {
        self.point(label)
            .and_then(|p| p.coord)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    /// The same points on a curve of a different genus.
    pub fn with_genus(&self, genus: u32) -> Curve {
        if genus == 0 && self.is_p1() {
            return self.clone();
        }
        Curve {
            kind: CurveKind::Abstract { genus },
            points: self
                .points
                .iter()
                .map(|p| PointId {
                    label: p.label.clone(),
                    coord: None,
                })
                .collect(),
        }
    }
}

/// A rational divisor: finitely many labelled points with rational
/// coefficients. Zero coefficients are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QDivisor {
    coeffs: BTreeMap<String, Rat>,
}

impl QDivisor {
    pub fn zero() -> QDivisor {
        QDivisor::default()
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: impl IntoIterator<Item = (S, Rat)>) -> QDivisor {
        let mut d = QDivisor::zero();
        for (l, c) in pairs {
            d.add_at(l.as_ref(), c);
        }
        d
    }

    pub fn get(&self, label: &str) -> Rat {
        self.coeffs.get(label).copied().unwrap_or_else(Rat::zero)
    }

    pub fn add_at(&mut self, label: &str, c: Rat) {
        let v = self.get(label) + c;
        if v.is_zero() {
            self.coeffs.remove(label);
        } else {
            self.coeffs.insert(label.to_string(), v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rat)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &String> {
        self.coeffs.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Rat {
        self.coeffs.values().fold(Rat::zero(), |a, b| a + b)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn floor(&self) -> QDivisor {
        QDivisor::from_pairs(self.coeffs.iter().map(|(l, c)| (l.as_str(), c.floor())))
    }

    pub fn add(&self, other: &QDivisor) -> QDivisor {
        let mut d = self.clone();
        for (l, c) in &other.coeffs {
            d.add_at(l, *c);
        }
        d
    }

    pub fn sub(&self, other: &QDivisor) -> QDivisor {
        self.add(&other.scale(-Rat::one()))
    }

    pub fn scale(&self, s: Rat) -> QDivisor {
        QDivisor::from_pairs(self.coeffs.iter().map(|(l, c)| (l.as_str(), c * s)))
    }

    /// Coefficientwise `self >= other`.
    pub fn dominates(&self, other: &QDivisor) -> bool {
        let labels: BTreeSet<&String> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        labels.into_iter().all(|l| self.get(l) >= other.get(l))
    }

    /// Least positive integer `k` with `k * self` integral.
    pub fn denominator(&self) -> i128 {
        crate::geometry::linalg::denominator_lcm(&self.coeffs.values().copied().collect::<RatVec>())
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*[{l}]")?;
        }
        Ok(())
    }
}

fn check_labels(curve: &Curve, d: &QDivisor) -> Result<()> {
    for l in d.support() {
        if !curve.has_point(l) {
            return Err(Error::UnknownPoint(l.clone()));
        }
    }
    Ok(())
}

/// Principality of a rational divisor.
pub fn is_principal(curve: &Curve, d: &QDivisor) -> Tri {
    if !d.degree().is_zero() || !d.is_integral() {
        return Tri::No;
    }
    if curve.genus() == 0 || d.is_zero() {
        Tri::Yes
    } else {
        Tri::Unknown
    }
}

/// Whether some positive multiple of `d` is principal.
pub fn multiple_is_principal(curve: &Curve, d: &QDivisor) -> Tri {
    let k = Rat::from_integer(d.denominator());
    is_principal(curve, &d.scale(k))
}

/// Dimension of a space of global sections: exact, or an interval when
/// Riemann-Roch alone does not determine it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum H0 {
    Exact(u64),
    Range(u64, u64),
}

impl H0 {
    pub fn exact(self) -> Option<u64> {
        match self {
            H0::Exact(n) => Some(n),
            H0::Range(..) => None,
        }
    }

    pub fn bounds(self) -> (u64, u64) {
        match self {
            H0::Exact(n) => (n, n),
            H0::Range(a, b) => (a, b),
        }
    }

    pub fn add(self, other: H0) -> H0 {
        let (a, b) = self.bounds();
        let (c, d) = other.bounds();
        if a == b && c == d {
            H0::Exact(a + c)
        } else {
            H0::Range(a + c, b + d)
        }
    }
}

pub fn h0(curve: &Curve, d: &QDivisor) -> H0 {
    let n = d.floor().degree().to_integer();
    if n < 0 {
        return H0::Exact(0);
    }
    let g = curve.genus() as i128;
    if n >= 2 * g - 1 {
        return H0::Exact((n + 1 - g).max(0) as u64);
    }
    if d.floor().is_zero() {
        return H0::Exact(1);
    }
    H0::Range((n + 1 - g).max(0) as u64, (n + 1) as u64)
}

/// A rational function `num(z) * prod_p (z - p)^(-frame_p)` on the projective
/// line, the product running over the finite points of `frame`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Section {
    pub num: UniPoly,
    pub frame: QDivisor,
}

/// A basis of `H^0(P^1, floor(d))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSpace {
    pub divisor: QDivisor,
    pub basis: Vec<Section>,
}

fn finite_coord(curve: &Curve, label: &str) -> Result<Option<Rat>> {
    Ok(match curve.coord(label)? {
        Coord::Finite(c) => Some(c),
        Coord::Infinity => None,
    })
}

pub fn section_basis(curve: &Curve, d: &QDivisor) -> Result<SectionSpace> {
    if !curve.is_p1() {
        return Err(Error::Unsupported(
            "explicit sections need the projective line".to_string(),
        ));
    }
    check_labels(curve, d)?;
    let e = d.floor();
    let n = e.degree().to_integer();
    let basis = (0..=n.max(-1))
        .filter(|_| n >= 0)
        .map(|j| Section {
            num: UniPoly::monomial(j as usize),
            frame: e.clone(),
        })
        .collect();
    Ok(SectionSpace { divisor: e, basis })
}

impl Section {
    /// Product of two sections; the frames add.
    pub fn mul(&self, other: &Section) -> Section {
        Section {
            num: &self.num * &other.num,
            frame: self.frame.add(&other.frame),
        }
    }

    /// The same function written in a larger integral frame.
    pub fn reframe(&self, curve: &Curve, frame: &QDivisor) -> Result<Section> {
        if !frame.dominates(&self.frame) {
            return Err(Error::Invalid(format!(
                "frame {frame} does not dominate {}",
                self.frame
            )));
        }
        let mut num = self.num.clone();
        let diff = frame.sub(&self.frame);
        for (l, k) in diff.iter() {
            if let Some(c) = finite_coord(curve, l)? {
                num = &num * &UniPoly::linear_root(c).pow(k.to_integer() as usize);
            }
        }
        Ok(Section {
            num,
            frame: frame.clone(),
        })
    }

    /// Whether the function lies in `H^0(floor(d))`.
    pub fn lies_in(&self, curve: &Curve, d: &QDivisor) -> Result<bool> {
        let e = d.floor();
        if self.num.is_zero() {
            return Ok(true);
        }
        // order at every finite point and at infinity
        let mut labels: BTreeSet<String> = e.support().cloned().collect();
        labels.extend(self.frame.support().cloned());
        let mut frame_finite_deg = Rat::zero();
        for l in self.frame.support() {
            if finite_coord(curve, l)?.is_some() {
                frame_finite_deg += self.frame.get(l);
            }
        }
        for l in &labels {
            if let Some(c) = finite_coord(curve, l)? {
                let ord =
                    root_multiplicity(&self.num, c) as i128 - self.frame.get(l).to_integer();
                if ord < -e.get(l).to_integer() {
                    return Ok(false);
                }
            }
        }
        let deg = self.num.degree().unwrap() as i128;
        let inf_label = curve
            .points()
            .iter()
            .find(|p| p.coord == Some(Coord::Infinity))
            .map(|p| p.label.clone());
        let e_inf = inf_label.map_or(0, |l| e.get(&l).to_integer());
        let ord_inf = -deg + frame_finite_deg.to_integer();
        // poles away from labelled points are impossible: num is a polynomial
        Ok(ord_inf >= -e_inf)
    }

    /// Human readable `numerator/denominator` in the variable `z`.
    pub fn render(&self, curve: &Curve) -> Result<String> {
        let mut num = self.num.clone();
        let mut den = Vec::new();
        for (l, k) in self.frame.iter() {
            let Some(c) = finite_coord(curve, l)? else {
                continue;
            };
            let k = k.to_integer();
            if k < 0 {
                num = &num * &UniPoly::linear_root(c).pow((-k) as usize);
            } else if k > 0 {
                let base = UniPoly::linear_root(c).format_in("z");
                let base = if c.is_zero() {
                    base
                } else {
                    format!("({base})")
                };
                den.push(if k == 1 { base } else { format!("{base}^{k}") });
            }
        }
        let n = num.format_in("z");
        Ok(if den.is_empty() {
            n
        } else {
            format!("({n})/({})", den.join("*"))
        })
    }
}

fn root_multiplicity(p: &UniPoly, c: Rat) -> usize {
    let mut q = p.clone();
    let mut m = 0;
    while !q.is_zero() && q.eval(c).is_zero() {
        q = divide_linear(&q, c);
        m += 1;
    }
    m
}

/// Quotient of `p` by `(z - c)`, assuming exact divisibility.
fn divide_linear(p: &UniPoly, c: Rat) -> UniPoly {
    let n = p.coeffs().len();
    let mut out = vec![Rat::zero(); n.saturating_sub(1)];
    let mut carry = Rat::zero();
    for i in (1..n).rev() {
        carry = p.coeff(i) + carry * c;
        out[i - 1] = carry;
    }
    UniPoly::new(out)
}

/// Rank of a family of polynomials as vectors of coefficients.
pub fn span_rank(polys: &[UniPoly]) -> usize {
    let width = polys
        .iter()
        .filter_map(|p| p.degree())
        .max()
        .map_or(0, |d| d + 1);
    let rows: Vec<RatVec> = polys
        .iter()
        .map(|p| (0..width).map(|i| p.coeff(i)).collect())
        .collect();
    rank(&rows, width)
}

/// Whether `H^0(floor d1) x H^0(floor d2) -> H^0(floor d1 + floor d2)` is onto.
pub fn products_surjective(curve: &Curve, d1: &QDivisor, d2: &QDivisor) -> Result<Tri> {
    check_labels(curve, d1)?;
    check_labels(curve, d2)?;
    let e1 = d1.floor();
    let e2 = d2.floor();
    let target = e1.add(&e2);
    if curve.is_p1() {
        let n = target.degree().to_integer();
        if n < 0 {
            return Ok(Tri::Yes);
        }
        let b1 = section_basis(curve, &e1)?;
        let b2 = section_basis(curve, &e2)?;
        let prods: Vec<UniPoly> = b1
            .basis
            .iter()
            .flat_map(|a| b2.basis.iter().map(move |b| a.mul(b).num))
            .collect();
        return Ok(Tri::from_bool(span_rank(&prods) as i128 == n + 1));
    }
    let g = curve.genus() as i128;
    if target.degree().to_integer() < 0 {
        return Ok(Tri::Yes);
    }
    if is_principal(curve, &e1).is_yes() || is_principal(curve, &e2).is_yes() {
        return Ok(Tri::Yes);
    }
    let a = e1.degree().to_integer();
    let b = e2.degree().to_integer();
    if (a > 2 * g && b >= 2 * g) || (b > 2 * g && a >= 2 * g) {
        return Ok(Tri::Yes);
    }
    Ok(Tri::Unknown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::linalg::{frac, rat};

    fn div(pairs: &[(&str, Rat)]) -> QDivisor {
        QDivisor::from_pairs(pairs.iter().map(|(l, c)| (*l, *c)))
    }

    #[test]
    fn floors_and_degrees() {
        let d = div(&[("0", rat(0)), ("inf", frac(1, 2)), ("1", frac(1, 2))]);
        assert!(d.floor().is_zero());
        assert_eq!(
            div(&[("inf", frac(-1, 2))]).floor(),
            div(&[("inf", rat(-1))])
        );
        assert_eq!(
            div(&[("0", rat(2)), ("inf", frac(-1, 2)), ("1", frac(-1, 2))])
                .floor()
                .degree(),
            rat(0)
        );
    }

    #[test]
    fn principality() {
        let p1 = Curve::standard_p1();
        let d = div(&[("0", rat(2)), ("inf", rat(-1)), ("1", rat(-1))]);
        assert_eq!(is_principal(&p1, &d), Tri::Yes);
        assert_eq!(is_principal(&p1, &div(&[("0", rat(1))])), Tri::No);
        let e = Curve::abstract_curve(1, &["a", "b"]).unwrap();
        let d = div(&[("a", rat(1)), ("b", rat(-1))]);
        assert_eq!(is_principal(&e, &d), Tri::Unknown);
    }

    #[test]
    fn section_counts() {
        let p1 = Curve::standard_p1();
        assert_eq!(h0(&p1, &div(&[("0", rat(1))])), H0::Exact(2));
        let d = div(&[("0", rat(-4)), ("inf", rat(2)), ("1", rat(2))]);
        assert_eq!(h0(&p1, &d), H0::Exact(1));
        let e = Curve::abstract_curve(1, &["a"]).unwrap();
        assert_eq!(h0(&e, &div(&[("a", rat(1))])), H0::Exact(1));
        assert_eq!(
            section_basis(&p1, &QDivisor::zero()).unwrap().basis.len(),
            1
        );
        let b = section_basis(&p1, &div(&[("0", rat(1))])).unwrap();
        assert_eq!(b.basis.len(), 2);
        assert_eq!(b.basis[0].render(&p1).unwrap(), "(1)/(z)");
    }

    #[test]
    fn products() {
        let p1 = Curve::standard_p1();
        let d = div(&[("0", rat(1))]);
        assert_eq!(products_surjective(&p1, &d, &d).unwrap(), Tri::Yes);
        let e = Curve::abstract_curve(1, &["a"]).unwrap();
        let d = div(&[("a", rat(1))]);
        assert_eq!(products_surjective(&e, &d, &d).unwrap(), Tri::Unknown);
    }

    #[test]
    fn products_lie_in_sum() {
        let p1 = Curve::standard_p1();
        let d1 = div(&[("0", rat(2)), ("inf", rat(-1))]);
        let d2 = div(&[("1", rat(1)), ("0", rat(-1)), ("inf", rat(1))]);
        let b1 = section_basis(&p1, &d1).unwrap();
        let b2 = section_basis(&p1, &d2).unwrap();
        for a in &b1.basis {
            assert!(a.lies_in(&p1, &d1).unwrap());
            for b in &b2.basis {
                assert!(a.mul(b).lies_in(&p1, &d1.add(&d2)).unwrap());
            }
        }
    }
}
