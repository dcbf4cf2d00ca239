//! The affine cone over a polarized variety as a polyhedral divisor, and the
//! generators of its graded coordinate ring.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::curve::{h0, is_principal, section_basis, span_rank, Section, Tri};
use crate::divpoly::DivisorialPolytope;
use crate::error::{Error, Result};
use crate::fansy::MarkedFansyDivisor;
use crate::geometry::lattice::hilbert_basis;
use crate::geometry::linalg::{dot, to_rat, LatticeVec, Rat, RatVec};
use crate::geometry::{Cone, Fan, Hrep, Polyhedron, UniPoly};
use crate::pdiv::PolyhedralDivisor;
use crate::support::{Affine, Piece, SupportFunction};

/// Weights of algebra generators and, on the projective line, explicit
/// sections in those weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorReport {
    pub sigma_fan: Fan,
    pub c: u64,
    pub alphas: BTreeMap<LatticeVec, u64>,
    pub g_tau: BTreeMap<Cone, BTreeSet<LatticeVec>>,
    pub g_all: BTreeSet<LatticeVec>,
    pub g_min: BTreeSet<LatticeVec>,
    pub generators: BTreeMap<LatticeVec, Vec<Section>>,
    pub normality: Tri,
}

fn require_ample(h: &SupportFunction) -> Result<()> {
    match h.ample_report()? {
        (Tri::Yes, _) => Ok(()),
        (Tri::No, why) => Err(Error::NotAmple(why.unwrap_or_default())),
        (Tri::Unknown, _) => Err(Error::Undecided(
            "ampleness of the support function".to_string(),
        )),
    }
}

fn require_proper(d: &PolyhedralDivisor) -> Result<()> {
    match d.properness() {
        p if p.verdict == Tri::Yes => Ok(()),
        p if p.verdict == Tri::No => Err(Error::Invalid(format!(
            "polyhedral divisor is not proper: {}",
            p.reason.unwrap_or_default()
        ))),
        _ => Err(Error::Undecided(
            "properness of the polyhedral divisor".to_string(),
        )),
    }
}

fn lift(v: &[Rat], t: Rat) -> RatVec {
    let mut w = v.to_vec();
    w.push(t);
    w
}

/// Epigraph of `-h_P` over `N`, as a polyhedron in `N + Z`.
fn epigraph(cells: &Piece) -> Result<Polyhedron> {
    let n = cells.first().map_or(0, |(c, _)| c.ambient_dim());
    let mut pts = Vec::new();
    let mut rays = vec![lift(&vec![Rat::zero(); n], Rat::one())];
    for (cell, f) in cells {
        for v in cell.vertices() {
            pts.push(lift(v, -f.eval(v)));
        }
        for r in cell.rays() {
            let r = to_rat(r);
            rays.push(lift(&r, -dot(&f.gradient, &r)));
        }
    }
    Polyhedron::new(n + 1, &pts, &rays)
}

/// The polyhedral divisor on `N + Z` of the affine cone over the polarized
/// variety of an ample support function.
pub fn cone_divisor(h: &SupportFunction) -> Result<PolyhedralDivisor> {
    require_ample(h)?;
    let lin: Piece = h
        .linear()
        .iter()
        .map(|(c, g)| {
            Ok((
                Polyhedron::from_cone(c)?,
                Affine::new(g.clone(), Rat::zero()),
            ))
        })
        .collect::<Result<_>>()?;
    let tail_poly = epigraph(&lin)?;
    let gens: Vec<RatVec> = tail_poly.rays().iter().map(|r| to_rat(r)).collect();
    let tail = Cone::from_rat_generators(tail_poly.ambient_dim(), &gens);
    let mut coeffs = Vec::new();
    for (label, cells) in h.pieces() {
        coeffs.push((label.clone(), epigraph(cells)?));
    }
    PolyhedralDivisor::new(h.base().curve().clone(), tail, coeffs)
}

/// Lower envelope of a polyhedron in `N + Z`: affine functions `g` with
/// `min {t : (v, t) in p} = max_g -g(v)`, so that `h = min g`.
fn lower_envelope(p: &Polyhedron) -> Result<Vec<Affine>> {
    let dim = p.ambient_dim();
    let n = dim - 1;
    let h = p.hrep();
    let mut rows: Vec<(RatVec, Rat)> = h.inequalities.clone();
    for (a, b) in &h.equations {
        if a[n].is_zero() {
            return Err(Error::Invalid(
                "coefficient does not project onto the whole space".to_string(),
            ));
        }
        rows.push((a.clone(), *b));
        rows.push((a.iter().map(|x| -*x).collect(), -*b));
    }
    let affs: Vec<Affine> = rows
        .into_iter()
        .filter(|(a, _)| a[n].is_positive())
        .map(|(a, b)| {
            let t = a[n];
            Affine::new(a[..n].iter().map(|x| *x / t).collect(), -b / t)
        })
        .collect();
    if affs.is_empty() {
        return Err(Error::UnboundedBelow("fiber".to_string()));
    }
    Ok(affs)
}

/// Full-dimensional linearity regions of `min affs` on all of `N`.
fn linearity_regions(n: usize, affs: &[Affine]) -> Result<Piece> {
    let mut out = Vec::new();
    let mut list = affs.to_vec();
    list.sort();
    list.dedup();
    for (i, f) in list.iter().enumerate() {
        let mut h = Hrep::default();
        for (j, g) in list.iter().enumerate() {
            if i != j {
                h.inequalities.push((
                    g.gradient
                        .iter()
                        .zip(&f.gradient)
                        .map(|(a, b)| a - b)
                        .collect(),
                    f.constant - g.constant,
                ));
            }
        }
        let r = Polyhedron::from_hrep(n, &h)?;
        if r.dimension() == n as i64 {
            out.push((r, f.clone()));
        }
    }
    Ok(out)
}

fn check_fibers(d: &PolyhedralDivisor) -> Result<usize> {
    require_proper(d)?;
    if !d.has_complete_locus() {
        return Err(Error::Unsupported(
            "the locus must be the whole curve".to_string(),
        ));
    }
    let dim = d.ambient_dim();
    if dim < 2 {
        return Err(Error::Invalid(
            "expected a divisor on N + Z with N of positive rank".to_string(),
        ));
    }
    let mut down = vec![Rat::zero(); dim];
    down[dim - 1] = -Rat::one();
    if d.tail().contains(&down) {
        return Err(Error::UnboundedBelow(
            "the tail cone contains the downward grading direction".to_string(),
        ));
    }
    Ok(dim - 1)
}

/// Marked fansy divisor and support function with `cone_divisor` equal to `d`.
pub fn recover(d: &PolyhedralDivisor) -> Result<(MarkedFansyDivisor, SupportFunction)> {
    let n = check_fibers(d)?;
    let tail_poly = Polyhedron::from_cone(d.tail())?;
    let lin = linearity_regions(n, &lower_envelope(&tail_poly)?)?;
    let mut linear = Vec::new();
    let mut cones = Vec::new();
    for (cell, f) in &lin {
        let c = cell.tail();
        if !f.constant.is_zero() {
            return Err(Error::Invalid(
                "tail cone has an affine lower facet".to_string(),
            ));
        }
        cones.push(c.clone());
        linear.push((c, f.gradient.clone()));
    }
    let tailfan = Fan::from_maximal(n, &cones);
    if !tailfan.is_complete() {
        return Err(Error::Invalid(
            "tail cone does not project onto the whole space".to_string(),
        ));
    }
    let mut slices = Vec::new();
    let mut pieces = Vec::new();
    for (label, p) in d.coefficients() {
        let cells = linearity_regions(n, &lower_envelope(p)?)?;
        slices.push((
            label.clone(),
            cells.iter().map(|(c, _)| c.clone()).collect::<Vec<_>>(),
        ));
        pieces.push((label.clone(), cells));
    }
    let unmarked = MarkedFansyDivisor::new(d.curve().clone(), tailfan.clone(), slices, [])?;
    let h = SupportFunction::new(unmarked.clone(), linear, pieces)?;
    let mut marks: BTreeSet<Cone> = BTreeSet::new();
    for s in tailfan.full_dimensional() {
        if is_principal(d.curve(), &h.restrict_zero(&s)?) == Tri::Yes {
            marks.insert(s);
        }
    }
    let full_marks: Vec<Cone> = marks.iter().cloned().collect();
    for t in tailfan.cones() {
        if t.is_full_dimensional() {
            continue;
        }
        for s in &full_marks {
            if !t.is_face_of(s) {
                continue;
            }
            let deg = unmarked.dsigma(s)?.degree_poly();
            if !deg.intersect(&Polyhedron::from_cone(t)?)?.is_empty() {
                marks.insert(t.clone());
            }
        }
    }
    let base = unmarked.with_marks(marks)?;
    let h = h.with_base(base.clone())?;
    Ok((base, h))
}

/// Divisorial polytope with `h^* = D((u, 1))` over the grading-one slice of
/// the dual tail.
pub fn recover_divpoly(d: &PolyhedralDivisor) -> Result<DivisorialPolytope> {
    let n = check_fibers(d)?;
    let mut h = Hrep::default();
    for r in d.tail().rays() {
        let r = to_rat(r);
        h.inequalities.push((r[..n].to_vec(), -r[n]));
    }
    for l in d.tail().lineality() {
        let l = to_rat(l);
        h.equations.push((l[..n].to_vec(), -l[n]));
    }
    let bx = Polyhedron::from_hrep(n, &h)?;
    let pieces: Vec<(String, Vec<Affine>)> = d
        .coefficients()
        .iter()
        .map(|(l, p)| {
            let affs = p
                .vertices()
                .iter()
                .map(|v| Affine::new(v[..n].to_vec(), v[n]))
                .collect();
            (l.clone(), affs)
        })
        .collect();
    DivisorialPolytope::new(d.curve().clone(), bx, pieces)
}

/// Coarsest common refinement of the normal fans of the coefficients,
/// inside the dual tail cone.
pub fn refinement_sigma(d: &PolyhedralDivisor) -> Result<Fan> {
    require_proper(d)?;
    if !d.has_complete_locus() {
        return Err(Error::Unsupported(
            "refinement needs a complete locus".to_string(),
        ));
    }
    let fans: Vec<Fan> = d
        .coefficients()
        .values()
        .map(Fan::normal_fan)
        .collect::<Result<_>>()?;
    Ok(Fan::common_refinement(&fans, &d.tail().dual()))
}

/// `max(0, k - 1)` for `k` the number of non-lattice coefficients.
pub fn constant_c(d: &PolyhedralDivisor) -> u64 {
    let k = d
        .coefficients()
        .values()
        .filter(|p| !p.is_lattice())
        .count() as u64;
    k.saturating_sub(1)
}

pub fn default_alpha_cap(genus: u32, c: u64) -> u64 {
    64 * (4 * genus as u64 + 2 + 2 * c + 1)
}

/// Least `a >= 1` with `D(a u)` integral and principal, or `a` even with
/// `D(a u / 2)` integral and `deg D(a u) >= 4g + 2 + 2c`.
pub fn alpha(d: &PolyhedralDivisor, u: &[i64], c: u64, cap: u64) -> Result<u64> {
    require_proper(d)?;
    let g = d.curve().genus() as i128;
    let bound = Rat::from_integer(4 * g + 2 + 2 * c as i128);
    let du = d.evaluate_lattice(u)?;
    for a in 1..=cap {
        let da = du.scale(Rat::from_integer(a as i128));
        if da.is_integral() {
            match is_principal(d.curve(), &da) {
                Tri::Yes => return Ok(a),
                Tri::Unknown => {
                    return Err(Error::Undecided(format!(
                        "principality of D({a} * {u:?}) on a curve of genus {g}"
                    )))
                }
                Tri::No => {}
            }
        }
        if a % 2 == 0
            && da.degree() >= bound
            && du.scale(Rat::from_integer(a as i128 / 2)).is_integral()
        {
            return Ok(a);
        }
    }
    Err(Error::CapExceeded(cap))
}

/// Splits `tau = tau' + <u_tau>` with `tau'` pointed.
fn split_lineality(tau: &Cone) -> Result<(Cone, Option<LatticeVec>)> {
    match tau.lineality() {
        [] => Ok((tau.clone(), None)),
        [l] => {
            let lr = to_rat(l);
            let n = tau.ambient_dim();
            let gens: Vec<RatVec> = tau
                .rays()
                .iter()
                .map(|r| {
                    let r = to_rat(r);
                    let f = dot(&r, &lr) / dot(&lr, &lr);
                    r.iter().zip(&lr).map(|(a, b)| a - f * b).collect()
                })
                .collect();
            Ok((Cone::from_rat_generators(n, &gens), Some(l.clone())))
        }
        _ => Err(Error::Unsupported(format!(
            "refinement cone {tau} has lineality of rank above one"
        ))),
    }
}

/// Degrees `G_tau` for every maximal cone of the refinement and their union.
pub fn generator_weights(d: &PolyhedralDivisor, cap: Option<u64>) -> Result<GeneratorReport> {
    let sigma_fan = refinement_sigma(d)?;
    let c = constant_c(d);
    let cap = cap.unwrap_or_else(|| default_alpha_cap(d.curve().genus(), c));
    let mut alphas = BTreeMap::new();
    let mut g_tau = BTreeMap::new();
    let mut g_all = BTreeSet::new();
    for tau in sigma_fan.maximal() {
        let (pointed, line) = split_lineality(&tau)?;
        let hb = hilbert_basis(&pointed)?;
        let mut weights: BTreeSet<LatticeVec> = BTreeSet::from([vec![0; d.ambient_dim()]]);
        for u in &hb {
            let a = alpha(d, u, c, cap)?;
            alphas.insert(u.clone(), a);
            let mut next = BTreeSet::new();
            for w in &weights {
                for k in 0..=a as i64 {
                    next.insert(
                        w.iter()
                            .zip(u)
                            .map(|(x, y)| x + k * y)
                            .collect::<LatticeVec>(),
                    );
                }
            }
            weights = next;
        }
        if let Some(l) = line {
            for s in [1i64, -1] {
                let v: LatticeVec = l.iter().map(|x| s * x).collect();
                let a = alpha(d, &v, c, cap)?;
                alphas.insert(v.clone(), a);
                weights.insert(v.iter().map(|x| x * a as i64).collect());
            }
        }
        g_all.extend(weights.iter().cloned());
        g_tau.insert(tau, weights);
    }
    Ok(GeneratorReport {
        sigma_fan,
        c,
        alphas,
        g_tau,
        g_all,
        g_min: BTreeSet::new(),
        generators: BTreeMap::new(),
        normality: Tri::Unknown,
    })
}

fn check_minimal_preconditions(d: &PolyhedralDivisor) -> Result<()> {
    if !d.tail().is_full_dimensional() {
        return Err(Error::Invalid(
            "minimal weights need a full-dimensional tail cone".to_string(),
        ));
    }
    if !d.curve().is_p1() {
        return Err(Error::Unsupported(
            "minimal weights need exact sections on the projective line".to_string(),
        ));
    }
    Ok(())
}

/// Numerators of the products `A_a * A_b` written in the frame of
/// `floor D(a + b)`.
pub fn product_numerators(d: &PolyhedralDivisor, a: &[i64], b: &[i64]) -> Result<Vec<UniPoly>> {
    let curve = d.curve();
    let sum: LatticeVec = a.iter().zip(b).map(|(x, y)| x + y).collect();
    let target = d.evaluate_lattice(&sum)?.floor();
    let sa = section_basis(curve, &d.evaluate_lattice(a)?)?;
    let sb = section_basis(curve, &d.evaluate_lattice(b)?)?;
    let mut out = Vec::new();
    for x in &sa.basis {
        for y in &sb.basis {
            out.push(x.mul(y).reframe(curve, &target)?.num);
        }
    }
    Ok(out)
}

/// `G_D^min`: the weights of `G_D` whose sections are not all products of
/// sections in lower weights of `G_D`.
pub fn minimal_weights(d: &PolyhedralDivisor, cap: Option<u64>) -> Result<GeneratorReport> {
    check_minimal_preconditions(d)?;
    let mut report = generator_weights(d, cap)?;
    let dual = d.tail().dual();
    let zero = vec![0; d.ambient_dim()];
    let mut g_min = BTreeSet::new();
    for u in &report.g_all {
        if *u == zero {
            continue;
        }
        let target = h0(d.curve(), &d.evaluate_lattice(u)?)
            .exact()
            .expect("exact on the line") as usize;
        if target == 0 {
            continue;
        }
        let mut nums = Vec::new();
        for w in &report.g_all {
            if w == u || *w == zero {
                continue;
            }
            let rest: LatticeVec = u.iter().zip(w).map(|(x, y)| x - y).collect();
            if !dual.contains_lattice(&rest) {
                continue;
            }
            nums.extend(product_numerators(d, w, &rest)?);
            if span_rank(&nums) == target {
                break;
            }
        }
        if span_rank(&nums) < target {
            g_min.insert(u.clone());
        }
    }
    report.g_min = g_min;
    Ok(report)
}

/// Minimal weights together with explicit section bases in those weights
/// and the projective normality verdict.
pub fn generators(d: &PolyhedralDivisor, cap: Option<u64>) -> Result<GeneratorReport> {
    let mut report = minimal_weights(d, cap)?;
    for u in &report.g_min {
        let s = section_basis(d.curve(), &d.evaluate_lattice(u)?)?;
        report.generators.insert(u.clone(), s.basis);
    }
    let n = d.ambient_dim();
    report.normality = Tri::from_bool(report.g_min.iter().all(|u| u[n - 1] == 1));
    Ok(report)
}

/// Projective normality of the embedding given by an ample support function.
pub fn projectively_normal(h: &SupportFunction, cap: Option<u64>) -> Result<Tri> {
    require_ample(h)?;
    if !h.base().curve().is_p1() {
        return Ok(Tri::Unknown);
    }
    Ok(generators(&cone_divisor(h)?, cap)?.normality)
}
