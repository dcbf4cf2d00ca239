use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::cone::{cone_hrep, Cone};
use super::linalg::{
    add, dot, dot_int, is_zero, primitive, rank, rat, scale, to_rat, LatticeVec, Rat, RatVec,
};
use crate::error::{Error, Result};

/// Inequality description `a.x >= b` / `a.x = b` of a polyhedron.
#[derive(Clone, Debug, Default)]
pub struct Hrep {
    pub inequalities: Vec<(RatVec, Rat)>,
    pub equations: Vec<(RatVec, Rat)>,
}

impl Hrep {
    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        self.inequalities.iter().all(|(a, b)| dot(a, x) >= *b)
            && self.equations.iter().all(|(a, b)| dot(a, x) == *b)
    }

    /// Membership test for `x / k` without dividing.
    pub fn satisfied_by_dilate(&self, x: &[Rat], k: Rat) -> bool {
        self.inequalities.iter().all(|(a, b)| dot(a, x) >= *b * k)
            && self.equations.iter().all(|(a, b)| dot(a, x) == *b * k)
    }
}

/// A pointed rational polyhedron in V-representation.
///
/// `vertices` are exactly the vertices (sorted), `rays` the primitive extreme
/// rays of the tail cone (sorted). The empty polyhedron has no vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polyhedron {
    dim: usize,
    vertices: Vec<RatVec>,
    rays: Vec<LatticeVec>,
}

impl Polyhedron {
    /// Convex hull of `points` plus the cone generated by `rays`.
    pub fn new(dim: usize, points: &[RatVec], rays: &[RatVec]) -> Result<Polyhedron> {
        for p in points.iter().chain(rays) {
            if p.len() != dim {
                return Err(Error::RankMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        if points.is_empty() {
            return Ok(Polyhedron::empty(dim));
        }
        let mut gens: Vec<RatVec> = points
            .iter()
            .map(|p| {
                let mut h = p.clone();
                h.push(Rat::one());
                h
            })
            .collect();
        for r in rays {
            let mut h = r.clone();
            h.push(Rat::zero());
            gens.push(h);
        }
        let cone = Cone::from_rat_generators(dim + 1, &gens);
        Polyhedron::from_homogenized(dim, &cone)
    }

    pub fn from_lattice(
        dim: usize,
        points: &[LatticeVec],
        rays: &[LatticeVec],
    ) -> Result<Polyhedron> {
        let pts: Vec<RatVec> = points.iter().map(|p| to_rat(p)).collect();
        let rs: Vec<RatVec> = rays.iter().map(|p| to_rat(p)).collect();
        Polyhedron::new(dim, &pts, &rs)
    }

    /// A single point.
    pub fn point(p: RatVec) -> Polyhedron {
        Polyhedron {
            dim: p.len(),
            vertices: vec![p],
            rays: vec![],
        }
    }

    pub fn empty(dim: usize) -> Polyhedron {
        Polyhedron {
            dim,
            vertices: vec![],
            rays: vec![],
        }
    }

    /// A pointed cone viewed as a polyhedron with apex at the origin.
    pub fn from_cone(cone: &Cone) -> Result<Polyhedron> {
        if !cone.is_pointed() {
            return Err(Error::NotPointed(cone.to_string()));
        }
        Ok(Polyhedron {
            dim: cone.ambient_dim(),
            vertices: vec![vec![Rat::zero(); cone.ambient_dim()]],
            rays: cone.rays().to_vec(),
        })
    }

    fn from_homogenized(dim: usize, cone: &Cone) -> Result<Polyhedron> {
        let mut vertices = Vec::new();
        let mut rays = Vec::new();
        for r in cone.rays() {
            let last = r[dim];
            if last > 0 {
                let t = rat(last);
                vertices.push(r[..dim].iter().map(|&x| rat(x) / t).collect::<RatVec>());
            } else {
                rays.push(r[..dim].to_vec());
            }
        }
        if vertices.is_empty() {
            return Ok(Polyhedron::empty(dim));
        }
        if !cone.is_pointed() {
            return Err(Error::NotPointed("polyhedron contains a line".to_string()));
        }
        vertices.sort();
        rays.sort();
        Ok(Polyhedron {
            dim,
            vertices,
            rays,
        })
    }

    /// `{x : a.x >= b for (a, b) in ineqs, a.x = b for (a, b) in eqs}`.
    pub fn from_hrep(dim: usize, h: &Hrep) -> Result<Polyhedron> {
        let mut ineqs: Vec<RatVec> = h
            .inequalities
            .iter()
            .map(|(a, b)| {
                let mut r = a.clone();
                r.push(-*b);
                r
            })
            .collect();
        let mut t = vec![Rat::zero(); dim];
        t.push(Rat::one());
        ineqs.push(t);
        let eqs: Vec<RatVec> = h
            .equations
            .iter()
            .map(|(a, b)| {
                let mut r = a.clone();
                r.push(-*b);
                r
            })
            .collect();
        let cone = Cone::from_inequalities(dim + 1, &ineqs, &eqs);
        Polyhedron::from_homogenized(dim, &cone)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn rays(&self) -> &[LatticeVec] {
        &self.rays
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| v.iter().all(|x| x.is_integer()))
    }

    pub fn tail(&self) -> Cone {
        Cone::new(self.dim, &self.rays, &[])
    }

    fn homogenized_generators(&self) -> Vec<RatVec> {
        let mut gens: Vec<RatVec> = self
            .vertices
            .iter()
            .map(|v| {
                let mut h = v.clone();
                h.push(Rat::one());
                h
            })
            .collect();
        for r in &self.rays {
            let mut h = to_rat(r);
            h.push(Rat::zero());
            gens.push(h);
        }
        gens
    }

    pub fn hrep(&self) -> Hrep {
        if self.is_empty() {
            let mut zero = vec![Rat::zero(); self.dim];
            if self.dim > 0 {
                zero[0] = Rat::zero();
            }
            return Hrep {
                inequalities: vec![(zero, Rat::one())],
                equations: vec![],
            };
        }
        let h = cone_hrep(&self.homogenized_generators(), self.dim + 1);
        let split = |v: &RatVec| (v[..self.dim].to_vec(), -v[self.dim]);
        Hrep {
            inequalities: h
                .facets
                .iter()
                .filter(|f| !is_zero(&f[..self.dim]))
                .map(split)
                .collect(),
            equations: h.equations.iter().map(split).collect(),
        }
    }

    /// Affine dimension; `-1` for the empty set.
    pub fn dimension(&self) -> i64 {
        if self.is_empty() {
            return -1;
        }
        let v0 = &self.vertices[0];
        let mut dirs: Vec<RatVec> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        dirs.extend(self.rays.iter().map(|r| to_rat(r)));
        rank(&dirs, self.dim) as i64
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.dim as i64
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.is_empty() && self.hrep().satisfied_by(x)
    }

    pub fn contains_polyhedron(&self, other: &Polyhedron) -> bool {
        if other.is_empty() {
            return true;
        }
        if self.is_empty() {
            return false;
        }
        let h = self.hrep();
        let tail = self.tail();
        other.vertices.iter().all(|v| h.satisfied_by(v))
            && other.rays.iter().all(|r| tail.contains_lattice(r))
    }

    /// Minkowski sum. The empty polyhedron annihilates.
    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.dim != other.dim {
            return Err(Error::RankMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let mut pts = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(add(a, b));
            }
        }
        let rays: Vec<RatVec> = self
            .rays
            .iter()
            .chain(&other.rays)
            .map(|r| to_rat(r))
            .collect();
        Polyhedron::new(self.dim, &pts, &rays)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.dim != other.dim {
            return Err(Error::RankMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let mut h = self.hrep();
        let o = other.hrep();
        h.inequalities.extend(o.inequalities);
        h.equations.extend(o.equations);
        Polyhedron::from_hrep(self.dim, &h)
    }

    /// Minimum of `<., u>` over the polyhedron, or `None` if unbounded below.
    pub fn min_pairing(&self, u: &[Rat]) -> Option<Rat> {
        if self.rays.iter().any(|r| dot_int(u, r).is_negative()) {
            return None;
        }
        self.vertices.iter().map(|v| dot(v, u)).min()
    }

    /// The face on which `<., u>` attains its minimum.
    pub fn face_of(&self, u: &[Rat]) -> Result<Polyhedron> {
        if self.is_empty() {
            return Ok(self.clone());
        }
        let m = self
            .min_pairing(u)
            .ok_or_else(|| Error::UnboundedBelow(format!("{u:?}")))?;
        let vertices: Vec<RatVec> = self
            .vertices
            .iter()
            .filter(|v| dot(v, u) == m)
            .cloned()
            .collect();
        let rays: Vec<RatVec> = self
            .rays
            .iter()
            .filter(|r| dot_int(u, r).is_zero())
            .map(|r| to_rat(r))
            .collect();
        Polyhedron::new(self.dim, &vertices, &rays)
    }

    /// Smallest face of `self` containing the polyhedron `f` (which must be a
    /// subset).
    fn smallest_face_containing(&self, f: &Polyhedron) -> Result<Polyhedron> {
        let h = self.hrep();
        let mut tight = Hrep {
            inequalities: vec![],
            equations: h.equations.clone(),
        };
        for (a, b) in &h.inequalities {
            let on_vertices = f.vertices.iter().all(|v| dot(a, v) == *b);
            let on_rays = f.rays.iter().all(|r| dot_int(a, r).is_zero());
            if on_vertices && on_rays {
                tight.equations.push((a.clone(), *b));
            } else {
                tight.inequalities.push((a.clone(), *b));
            }
        }
        Polyhedron::from_hrep(self.dim, &tight)
    }

    /// Whether `f` is a face of `self` (the empty set is a face).
    pub fn has_face(&self, f: &Polyhedron) -> bool {
        if f.is_empty() {
            return true;
        }
        if !self.contains_polyhedron(f) {
            return false;
        }
        match self.smallest_face_containing(f) {
            Ok(g) => &g == f,
            Err(_) => false,
        }
    }

    /// All nonempty faces.
    pub fn faces(&self) -> Vec<Polyhedron> {
        if self.is_empty() {
            return vec![];
        }
        let h = self.hrep();
        let n = h.inequalities.len();
        let mut out: BTreeSet<Polyhedron> = BTreeSet::new();
        // Faces are generated by vertex/ray subsets tight on a set of facets.
        for mask in 0u64..(1u64 << n.min(20)) {
            let chosen: Vec<&(RatVec, Rat)> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| &h.inequalities[i])
                .collect();
            let vs: Vec<RatVec> = self
                .vertices
                .iter()
                .filter(|v| chosen.iter().all(|(a, b)| dot(a, v) == *b))
                .cloned()
                .collect();
            if vs.is_empty() {
                continue;
            }
            let rs: Vec<RatVec> = self
                .rays
                .iter()
                .filter(|r| chosen.iter().all(|(a, _)| dot_int(a, r).is_zero()))
                .map(|r| to_rat(r))
                .collect();
            if let Ok(p) = Polyhedron::new(self.dim, &vs, &rs) {
                out.insert(p);
            }
        }
        out.into_iter().collect()
    }

    /// A point in the relative interior.
    pub fn interior_point(&self) -> Option<RatVec> {
        if self.is_empty() {
            return None;
        }
        let n = Rat::from_integer(self.vertices.len() as i128);
        let mut p = vec![Rat::zero(); self.dim];
        for v in &self.vertices {
            p = add(&p, v);
        }
        p = scale(&p, n.recip());
        for r in &self.rays {
            p = add(&p, &to_rat(r));
        }
        Some(p)
    }

    pub fn translate(&self, t: &[Rat]) -> Polyhedron {
        Polyhedron {
            dim: self.dim,
            vertices: {
                let mut v: Vec<RatVec> = self.vertices.iter().map(|v| add(v, t)).collect();
                v.sort();
                v
            },
            rays: self.rays.clone(),
        }
    }

    /// Dilation by a nonnegative rational.
    pub fn dilate(&self, k: Rat) -> Result<Polyhedron> {
        if k.is_zero() {
            if self.is_empty() {
                return Ok(self.clone());
            }
            let rays: Vec<RatVec> = self.rays.iter().map(|r| to_rat(r)).collect();
            return Polyhedron::new(self.dim, &[vec![Rat::zero(); self.dim]], &rays);
        }
        let mut v: Vec<RatVec> = self.vertices.iter().map(|v| scale(v, k)).collect();
        v.sort();
        Ok(Polyhedron {
            dim: self.dim,
            vertices: v,
            rays: self.rays.clone(),
        })
    }

    /// Image under the linear map with the given rows (`out_dim x dim`).
    pub fn linear_image(&self, rows: &[RatVec]) -> Result<Polyhedron> {
        let out_dim = rows.len();
        if self.is_empty() {
            return Ok(Polyhedron::empty(out_dim));
        }
        let apply = |x: &[Rat]| -> RatVec { rows.iter().map(|r| dot(r, x)).collect() };
        let pts: Vec<RatVec> = self.vertices.iter().map(|v| apply(v)).collect();
        let rays: Vec<RatVec> = self.rays.iter().map(|r| apply(&to_rat(r))).collect();
        Polyhedron::new(out_dim, &pts, &rays)
    }

    /// Primitive directions of the edges and rays emanating from vertex `v`.
    pub fn edge_directions(&self, v: &[Rat]) -> Result<Vec<LatticeVec>> {
        if !self.vertices.iter().any(|w| w.as_slice() == v) {
            return Err(Error::NotAVertex(format!("{v:?}")));
        }
        let h = self.hrep();
        let eq_rows: Vec<RatVec> = h.equations.iter().map(|(a, _)| a.clone()).collect();
        let tight_at = |x: &[Rat]| -> Vec<RatVec> {
            h.inequalities
                .iter()
                .filter(|(a, b)| dot(a, x) == *b)
                .map(|(a, _)| a.clone())
                .collect()
        };
        let tv = tight_at(v);
        let mut dirs = BTreeSet::new();
        for w in &self.vertices {
            if w.as_slice() == v {
                continue;
            }
            let mut common: Vec<RatVec> = tv
                .iter()
                .filter(|a| {
                    h.inequalities
                        .iter()
                        .any(|(c, b)| c == *a && dot(c, w) == *b)
                })
                .cloned()
                .collect();
            common.extend(eq_rows.iter().cloned());
            if rank(&common, self.dim) == self.dim - 1 {
                let d: RatVec = w.iter().zip(v).map(|(a, b)| a - b).collect();
                dirs.insert(primitive(&d));
            }
        }
        for r in &self.rays {
            let mut common: Vec<RatVec> = tv
                .iter()
                .filter(|a| dot_int(a, r).is_zero())
                .cloned()
                .collect();
            common.extend(eq_rows.iter().cloned());
            if rank(&common, self.dim) == self.dim - 1 {
                dirs.insert(r.clone());
            }
        }
        Ok(dirs.into_iter().collect())
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "(")?;
            for (j, x) in v.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")?;
        if !self.rays.is_empty() {
            write!(f, "+cone{{")?;
            for (i, r) in self.rays.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{r:?}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::linalg::frac;

    fn interval(a: i64, b: i64) -> Polyhedron {
        Polyhedron::from_lattice(1, &[vec![a], vec![b]], &[]).unwrap()
    }

    fn fixture_p0() -> Polyhedron {
        Polyhedron::from_lattice(
            2,
            &[vec![0, 2], vec![1, 1], vec![2, 2]],
            &[vec![-1, 2], vec![1, 2]],
        )
        .unwrap()
    }

    fn fixture_pinf() -> Polyhedron {
        Polyhedron::new(
            2,
            &[vec![frac(-1, 2), rat(0)]],
            &[to_rat(&[-1, 2]), to_rat(&[1, 2])],
        )
        .unwrap()
    }

    #[test]
    fn interval_doubling() {
        let a = interval(-1, 1);
        assert_eq!(a.minkowski_sum(&a).unwrap(), interval(-2, 2));
    }

    #[test]
    fn minkowski_sum_of_fixture_coefficients() {
        let s = fixture_p0()
            .minkowski_sum(&fixture_pinf())
            .unwrap()
            .minkowski_sum(&fixture_pinf())
            .unwrap();
        let expected = Polyhedron::from_lattice(
            2,
            &[vec![-1, 2], vec![0, 1], vec![1, 2]],
            &[vec![-1, 2], vec![1, 2]],
        )
        .unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn minkowski_identity_and_empty() {
        let p = fixture_p0();
        let origin = Polyhedron::point(vec![rat(0), rat(0)]);
        assert_eq!(p.minkowski_sum(&origin).unwrap(), p);
        assert!(p.minkowski_sum(&Polyhedron::empty(2)).unwrap().is_empty());
        assert!(p.minkowski_sum(&interval(0, 1)).is_err());
    }

    #[test]
    fn faces_by_functional() {
        assert_eq!(
            interval(-2, 2).face_of(&[rat(1)]).unwrap(),
            interval(-2, -2)
        );
        let f = fixture_p0().face_of(&to_rat(&[-2, 1])).unwrap();
        assert_eq!(
            f,
            Polyhedron::from_lattice(2, &[vec![2, 2]], &[vec![1, 2]]).unwrap()
        );
        assert_eq!(
            fixture_p0().face_of(&to_rat(&[0, 0])).unwrap(),
            fixture_p0()
        );
        assert!(matches!(
            fixture_p0().face_of(&to_rat(&[0, -1])),
            Err(Error::UnboundedBelow(_))
        ));
        assert!(fixture_p0().has_face(&f));
    }

    #[test]
    fn hrep_round_trip() {
        let p = fixture_p0();
        let q = Polyhedron::from_hrep(2, &p.hrep()).unwrap();
        assert_eq!(p, q);
        let seg = Polyhedron::from_lattice(2, &[vec![0, 0], vec![1, 1]], &[]).unwrap();
        assert_eq!(Polyhedron::from_hrep(2, &seg.hrep()).unwrap(), seg);
        assert_eq!(seg.dimension(), 1);
    }

    #[test]
    fn redundant_points_are_dropped() {
        let p = Polyhedron::from_lattice(
            2,
            &[
                vec![0, 0],
                vec![2, 0],
                vec![0, 2],
                vec![2, 2],
                vec![1, 1],
                vec![1, 0],
            ],
            &[],
        )
        .unwrap();
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn intersection_can_be_empty_or_lower_dimensional() {
        let a = interval(0, 2);
        let b = interval(2, 5);
        assert_eq!(a.intersect(&b).unwrap(), interval(2, 2));
        assert!(a.intersect(&interval(3, 4)).unwrap().is_empty());
    }

    #[test]
    fn line_is_rejected() {
        let r = Polyhedron::from_lattice(1, &[vec![0]], &[vec![1], vec![-1]]);
        assert!(matches!(r, Err(Error::NotPointed(_))));
    }
}
