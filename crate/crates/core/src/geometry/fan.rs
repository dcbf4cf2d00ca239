use std::collections::BTreeSet;

use super::cone::Cone;
use super::linalg::{sub, RatVec};
use super::polyhedron::Polyhedron;
use crate::error::{Error, Result};

/// A fan, stored with all of its cones (closed under faces, sorted).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fan {
    dim: usize,
    cones: Vec<Cone>,
}

impl Fan {
    /// Fan generated by the given cones and all of their faces.
    pub fn from_maximal(dim: usize, maximal: &[Cone]) -> Fan {
        let mut all: BTreeSet<Cone> = BTreeSet::new();
        for c in maximal {
            all.extend(c.faces());
        }
        Fan {
            dim,
            cones: all.into_iter().collect(),
        }
    }

    /// The fan consisting of the whole space.
    pub fn trivial(dim: usize) -> Fan {
        Fan::from_maximal(dim, &[Cone::full_space(dim)])
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn contains(&self, c: &Cone) -> bool {
        self.cones.binary_search(c).is_ok()
    }

    /// Cones that are not proper faces of another cone in the fan.
    pub fn maximal(&self) -> Vec<Cone> {
        self.cones
            .iter()
            .filter(|c| {
                !self
                    .cones
                    .iter()
                    .any(|d| d != *c && d.contains_cone(c) && c.is_face_of(d))
            })
            .cloned()
            .collect()
    }

    pub fn full_dimensional(&self) -> Vec<Cone> {
        self.cones
            .iter()
            .filter(|c| c.is_full_dimensional())
            .cloned()
            .collect()
    }

    /// Whether the full-dimensional cones cover the ambient space, tested by
    /// facet matching: every facet of a full-dimensional cone is shared with
    /// another full-dimensional cone.
    pub fn is_complete(&self) -> bool {
        let full = self.full_dimensional();
        if full.is_empty() {
            return self.dim == 0;
        }
        full.iter().all(|c| {
            c.faces()
                .iter()
                .filter(|f| f.dimension() + 1 == self.dim)
                .all(|f| full.iter().any(|d| d != c && f.is_face_of(d)))
        })
    }

    /// Normal fan of a nonempty polyhedron: for every vertex `w` the cone of
    /// functionals minimized at `w`.
    pub fn normal_fan(p: &Polyhedron) -> Result<Fan> {
        if p.is_empty() {
            return Err(Error::Empty);
        }
        let dim = p.ambient_dim();
        let mut cones = Vec::new();
        for w in p.vertices() {
            let mut ineqs: Vec<RatVec> = p
                .vertices()
                .iter()
                .filter(|x| *x != w)
                .map(|x| sub(x, w))
                .collect();
            ineqs.extend(p.rays().iter().map(|r| super::linalg::to_rat(r)));
            cones.push(Cone::from_inequalities(dim, &ineqs, &[]));
        }
        Ok(Fan::from_maximal(dim, &cones))
    }

    /// Common refinement of `fans`, restricted to `within`. Only cones of the
    /// same dimension as `within` are kept as maximal cells.
    pub fn common_refinement(fans: &[Fan], within: &Cone) -> Fan {
        let target = within.dimension();
        let mut current: BTreeSet<Cone> = BTreeSet::from([within.clone()]);
        for f in fans {
            let mut next = BTreeSet::new();
            for c in &current {
                for m in f.maximal() {
                    let i = c.intersect(&m);
                    if i.dimension() == target {
                        next.insert(i);
                    }
                }
            }
            current = next;
        }
        let maximal: Vec<Cone> = current.into_iter().collect();
        Fan::from_maximal(within.ambient_dim(), &maximal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::linalg::to_rat;

    #[test]
    fn normal_fan_of_interval() {
        let p = Polyhedron::from_lattice(1, &[vec![-2], vec![2]], &[]).unwrap();
        let f = Fan::normal_fan(&p).unwrap();
        assert_eq!(f.cones().len(), 3);
        assert_eq!(f.maximal().len(), 2);
        assert!(f.contains(&Cone::new(1, &[vec![1]], &[])));
        assert!(f.contains(&Cone::zero(1)));
        assert!(f.is_complete());
    }

    #[test]
    fn normal_fan_of_point_is_whole_space() {
        let p = Polyhedron::point(to_rat(&[1, 1]));
        let f = Fan::normal_fan(&p).unwrap();
        assert_eq!(f.maximal(), vec![Cone::full_space(2)]);
    }

    #[test]
    fn normal_fan_of_pentagon() {
        let p = Polyhedron::from_lattice(
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
        let f = Fan::normal_fan(&p).unwrap();
        assert_eq!(f.maximal().len(), 5);
        assert!(f.maximal().iter().all(|c| c.is_full_dimensional()));
        assert!(f.is_complete());
    }

    #[test]
    fn refinement_is_idempotent() {
        let p = Polyhedron::from_lattice(1, &[vec![-2], vec![2]], &[]).unwrap();
        let f = Fan::normal_fan(&p).unwrap();
        let r = Fan::common_refinement(&[f.clone(), f.clone()], &Cone::full_space(1));
        assert_eq!(r, f);
        let t = Fan::common_refinement(std::slice::from_ref(&f), &Cone::full_space(1));
        assert_eq!(t, f);
    }
}
