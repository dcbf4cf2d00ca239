//! The standard rank-one example on the projective line with marked points
//! `0`, `inf` and `1`, in all of its incarnations.

use crate::curve::Curve;
use crate::divpoly::DivisorialPolytope;
use crate::fansy::MarkedFansyDivisor;
use crate::geometry::linalg::{frac, rat, to_rat};
use crate::geometry::{Cone, Fan, Polyhedron, Rat};
use crate::pdiv::PolyhedralDivisor;
use crate::support::{Affine, SupportFunction};

pub fn ldp_curve() -> Curve {
    Curve::standard_p1()
}

pub fn ldp_tail() -> Cone {
    Cone::new(2, &[vec![-1, 2], vec![1, 2]], &[])
}

fn half_vertex_coefficient() -> Polyhedron {
    Polyhedron::new(
        2,
        &[vec![frac(-1, 2), rat(0)]],
        &[to_rat(&[-1, 2]), to_rat(&[1, 2])],
    )
    .expect("valid coefficient")
}

fn cone_divisor_with_zero_coefficient(vertices: &[Vec<i64>]) -> PolyhedralDivisor {
    let p0 = Polyhedron::from_lattice(2, vertices, &[vec![-1, 2], vec![1, 2]]).expect("valid");
    PolyhedralDivisor::new(
        ldp_curve(),
        ldp_tail(),
        vec![
            ("0".to_string(), p0),
            ("inf".to_string(), half_vertex_coefficient()),
            ("1".to_string(), half_vertex_coefficient()),
        ],
    )
    .expect("valid divisor")
}

/// Polyhedral divisor of the affine cone over the example surface.
pub fn ldp_cone_divisor() -> PolyhedralDivisor {
    cone_divisor_with_zero_coefficient(&[vec![0, 2], vec![1, 1], vec![2, 2]])
}

/// The same data with the degree-polyhedron vertices used as the coefficient
/// at `0`; not proper.
pub fn ldp_literal_cone_divisor() -> PolyhedralDivisor {
    cone_divisor_with_zero_coefficient(&[vec![-1, 2], vec![0, 1], vec![1, 2]])
}

fn interval(lo: Option<Rat>, hi: Option<Rat>) -> Polyhedron {
    match (lo, hi) {
        (Some(a), Some(b)) => Polyhedron::new(1, &[vec![a], vec![b]], &[]),
        (Some(a), None) => Polyhedron::new(1, &[vec![a]], &[vec![rat(1)]]),
        (None, Some(b)) => Polyhedron::new(1, &[vec![b]], &[vec![rat(-1)]]),
        (None, None) => unreachable!("cells are pointed"),
    }
    .expect("valid interval")
}

/// Subdivision of the line at the given breakpoints.
pub fn line_subdivision(breaks: &[Rat]) -> Vec<Polyhedron> {
    let mut cells = vec![interval(None, Some(breaks[0]))];
    for w in breaks.windows(2) {
        cells.push(interval(Some(w[0]), Some(w[1])));
    }
    cells.push(interval(Some(*breaks.last().expect("nonempty")), None));
    cells
}

pub fn line_fan() -> Fan {
    Fan::from_maximal(
        1,
        &[
            Cone::new(1, &[vec![1]], &[]),
            Cone::new(1, &[vec![-1]], &[]),
        ],
    )
}

/// Slices with breakpoints 0, 1, 2 at `0` and -1/2 at `inf` and `1`; both
/// rays marked.
pub fn ldp_fansy() -> MarkedFansyDivisor {
    let half = line_subdivision(&[frac(-1, 2)]);
    MarkedFansyDivisor::new(
        ldp_curve(),
        line_fan(),
        vec![
            ("0".to_string(), line_subdivision(&[rat(0), rat(1), rat(2)])),
            ("inf".to_string(), half.clone()),
            ("1".to_string(), half),
        ],
        line_fan().full_dimensional(),
    )
    .expect("valid fansy divisor")
}

fn affine(g: i64, c: Rat) -> Affine {
    Affine::new(vec![rat(g)], c)
}

/// Support function on [`ldp_fansy`]: slopes 2, 1, -1, -2 at `0` and
/// `2v + 1`, `-2v - 1` at `inf` and `1`.
pub fn ldp_support_function() -> SupportFunction {
    let base = ldp_fansy();
    let zero_cells = base.slice("0");
    let zero_affs = [
        affine(2, rat(-2)),
        affine(1, rat(-2)),
        affine(-1, rat(0)),
        affine(-2, rat(2)),
    ];
    let half_cells = base.slice("inf");
    let half_affs = [affine(2, rat(1)), affine(-2, rat(-1))];
    let pair = |cells: Vec<Polyhedron>, affs: &[Affine]| -> Vec<(Polyhedron, Affine)> {
        cells.into_iter().zip(affs.iter().cloned()).collect()
    };
    let linear = vec![
        (Cone::new(1, &[vec![1]], &[]), vec![rat(-2)]),
        (Cone::new(1, &[vec![-1]], &[]), vec![rat(2)]),
    ];
    SupportFunction::new(
        base,
        linear,
        vec![
            ("0".to_string(), pair(zero_cells, &zero_affs)),
            ("inf".to_string(), pair(half_cells.clone(), &half_affs)),
            ("1".to_string(), pair(half_cells, &half_affs)),
        ],
    )
    .expect("valid support function")
}

/// Divisorial polytope on `[-2, 2]` with `Psi_0 = min(2, u + 1, 2u + 2)` and
/// `Psi_inf = Psi_1 = -u / 2`.
pub fn ldp_divpoly() -> DivisorialPolytope {
    let bx = Polyhedron::from_lattice(1, &[vec![-2], vec![2]], &[]).expect("segment");
    let half = vec![Affine::new(vec![frac(-1, 2)], rat(0))];
    DivisorialPolytope::new(
        ldp_curve(),
        bx,
        vec![
            (
                "0".to_string(),
                vec![affine(0, rat(2)), affine(1, rat(1)), affine(2, rat(2))],
            ),
            ("inf".to_string(), half.clone()),
            ("1".to_string(), half),
        ],
    )
    .expect("valid divisorial polytope")
}
