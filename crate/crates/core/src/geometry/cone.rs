use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use super::linalg::{
    canonical_subspace, dot, nullspace, primitive, project_out, rank, to_rat, LatticeVec, Rat,
    RatVec,
};

/// Facet description of a polyhedral cone `{x : a.x >= 0 (facets), e.x = 0 (equations)}`.
///
/// Facet normals lie in the linear span of the cone and are primitive.
#[derive(Clone, Debug)]
pub(crate) struct ConeHrep {
    pub facets: Vec<RatVec>,
    pub equations: Vec<RatVec>,
}

/// Computes the facets of `cone(gens)` by enumerating hyperplanes spanned by
/// `rank - 1` generators. Exact and adequate for ambient dimension <= 4.
pub(crate) fn cone_hrep(gens: &[RatVec], n: usize) -> ConeHrep {
    let gens: Vec<RatVec> = dedup_directions(gens);
    let r = rank(&gens, n);
    let equations = nullspace(&gens, n);
    let mut facets: BTreeSet<LatticeVec> = BTreeSet::new();
    if r > 0 {
        for subset in combinations(gens.len(), r - 1) {
            let mut rows: Vec<RatVec> = subset.iter().map(|&i| gens[i].clone()).collect();
            if rank(&rows, n) != r - 1 {
                continue;
            }
            rows.extend(equations.iter().cloned());
            let ns = nullspace(&rows, n);
            if ns.len() != 1 {
                continue;
            }
            let a = &ns[0];
            let signs: Vec<Rat> = gens.iter().map(|g| dot(a, g)).collect();
            if signs.iter().all(|s| !s.is_negative()) {
                facets.insert(primitive(a));
            } else if signs.iter().all(|s| !s.is_positive()) {
                let neg: RatVec = a.iter().map(|x| -x).collect();
                facets.insert(primitive(&neg));
            }
        }
    }
    // A facet normal that vanishes on all generators is an equation; drop it.
    let facets: Vec<RatVec> = facets
        .into_iter()
        .map(|f| to_rat(&f))
        .filter(|f| gens.iter().any(|g| !dot(f, g).is_zero()))
        .collect();
    ConeHrep { facets, equations }
}

fn dedup_directions(gens: &[RatVec]) -> Vec<RatVec> {
    let set: BTreeSet<LatticeVec> = gens
        .iter()
        .map(|g| primitive(g))
        .filter(|g| g.iter().any(|&x| x != 0))
        .collect();
    set.into_iter().map(|g| to_rat(&g)).collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// A rational polyhedral cone in canonical form.
///
/// `lineality` is a canonical basis of the largest linear subspace contained
/// in the cone; `rays` are primitive generators of the minimal proper faces,
/// projected orthogonally to the lineality space. Both lists are sorted, so
/// structural equality is equality of cones.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cone {
    dim: usize,
    rays: Vec<LatticeVec>,
    lineality: Vec<LatticeVec>,
}

impl Cone {
    /// Cone generated by `rays` together with the linear span of `lineality`.
    pub fn new(dim: usize, rays: &[LatticeVec], lineality: &[LatticeVec]) -> Cone {
        let mut gens: Vec<RatVec> = rays.iter().map(|r| to_rat(r)).collect();
        for l in lineality {
            gens.push(to_rat(l));
            gens.push(l.iter().map(|&x| Rat::from_integer(-(x as i128))).collect());
        }
        Cone::from_generators(dim, &gens)
    }

    pub fn from_rat_generators(dim: usize, gens: &[RatVec]) -> Cone {
        Cone::from_generators(dim, gens)
    }

    fn from_generators(dim: usize, gens: &[RatVec]) -> Cone {
        let gens = dedup_directions(gens);
        let h = cone_hrep(&gens, dim);
        let mut lin_rows = h.facets.clone();
        lin_rows.extend(h.equations.iter().cloned());
        let lin = nullspace(&lin_rows, dim);
        let lineality = canonical_subspace(&lin, dim);
        let lin_rat: Vec<RatVec> = lineality.iter().map(|l| to_rat(l)).collect();
        let mut rays: BTreeSet<LatticeVec> = BTreeSet::new();
        let target_rank = (dim - lin.len()).saturating_sub(1);
        for g in gens.iter().filter(|_| lin.len() < dim) {
            let projected = project_out(g, &lin_rat);
            if projected.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut tight: Vec<RatVec> = h
                .facets
                .iter()
                .filter(|a| dot(a, g).is_zero())
                .cloned()
                .collect();
            tight.extend(h.equations.iter().cloned());
            if rank(&tight, dim) == target_rank {
                rays.insert(primitive(&projected));
            }
        }
        Cone {
            dim,
            rays: rays.into_iter().collect(),
            lineality,
        }
    }

    /// `{x : a.x >= 0 for a in ineqs, e.x = 0 for e in eqs}`.
    pub fn from_inequalities(dim: usize, ineqs: &[RatVec], eqs: &[RatVec]) -> Cone {
        let mut gens: Vec<RatVec> = ineqs.to_vec();
        for e in eqs {
            gens.push(e.clone());
            gens.push(e.iter().map(|x| -x).collect());
        }
        Cone::from_generators(dim, &gens).dual()
    }

    pub fn zero(dim: usize) -> Cone {
        Cone {
            dim,
            rays: vec![],
            lineality: vec![],
        }
    }

    pub fn full_space(dim: usize) -> Cone {
        let id: Vec<LatticeVec> = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Cone::new(dim, &[], &id)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVec] {
        &self.rays
    }

    pub fn lineality(&self) -> &[LatticeVec] {
        &self.lineality
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Generators including both signs of each lineality vector.
    pub fn generators(&self) -> Vec<RatVec> {
        let mut gens: Vec<RatVec> = self.rays.iter().map(|r| to_rat(r)).collect();
        for l in &self.lineality {
            gens.push(to_rat(l));
            gens.push(l.iter().map(|&x| Rat::from_integer(-(x as i128))).collect());
        }
        gens
    }

    pub(crate) fn hrep(&self) -> ConeHrep {
        cone_hrep(&self.generators(), self.dim)
    }

    /// Dimension of the linear span.
    pub fn dimension(&self) -> usize {
        rank(&self.generators(), self.dim)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.dim
    }

    /// `{m : <m, x> >= 0 for all x in self}`.
    pub fn dual(&self) -> Cone {
        let h = self.hrep();
        let mut gens = h.facets.clone();
        for e in &h.equations {
            gens.push(e.clone());
            gens.push(e.iter().map(|x| -x).collect());
        }
        Cone::from_generators(self.dim, &gens)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        let h = self.hrep();
        h.facets.iter().all(|a| !dot(a, x).is_negative())
            && h.equations.iter().all(|e| dot(e, x).is_zero())
    }

    pub fn contains_lattice(&self, x: &[i64]) -> bool {
        self.contains(&to_rat(x))
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let a = self.hrep();
        let b = other.hrep();
        let mut ineqs = a.facets;
        ineqs.extend(b.facets);
        let mut eqs = a.equations;
        eqs.extend(b.equations);
        Cone::from_inequalities(self.dim, &ineqs, &eqs)
    }

    /// Minkowski sum of two cones.
    pub fn sum(&self, other: &Cone) -> Cone {
        let mut gens = self.generators();
        gens.extend(other.generators());
        Cone::from_generators(self.dim, &gens)
    }

    /// All faces, including the cone itself and its minimal face.
    pub fn faces(&self) -> Vec<Cone> {
        let h = self.hrep();
        let gens = self.generators();
        let mut out: BTreeSet<Cone> = BTreeSet::new();
        let f = h.facets.len();
        for mask in 0u32..(1u32 << f) {
            let chosen: Vec<&RatVec> = (0..f)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| &h.facets[i])
                .collect();
            let face_gens: Vec<RatVec> = gens
                .iter()
                .filter(|g| chosen.iter().all(|a| dot(a, g).is_zero()))
                .cloned()
                .collect();
            out.insert(Cone::from_generators(self.dim, &face_gens));
        }
        out.into_iter().collect()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        other.faces().contains(self)
    }

    /// Face on which the functional `u` (from the dual cone) vanishes.
    pub fn face_of(&self, u: &[Rat]) -> Cone {
        let gens: Vec<RatVec> = self
            .generators()
            .into_iter()
            .filter(|g| dot(u, g).is_zero())
            .collect();
        Cone::from_generators(self.dim, &gens)
    }

    /// A point in the relative interior: sum of all generators.
    pub fn interior_point(&self) -> RatVec {
        let mut p = vec![Rat::zero(); self.dim];
        for r in &self.rays {
            for (x, &y) in p.iter_mut().zip(r) {
                *x += Rat::from_integer(y as i128);
            }
        }
        p
    }

    /// Whether `<m, x> >= 0` on all generators.
    pub fn pairs_nonnegatively(&self, m: &[Rat]) -> bool {
        self.generators().iter().all(|g| !dot(m, g).is_negative())
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{{")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r:?}")?;
        }
        if !self.lineality.is_empty() {
            write!(f, "; lin ")?;
            for l in &self.lineality {
                write!(f, "{l:?}")?;
            }
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::linalg::rat;

    #[test]
    fn dual_of_fixture_tail() {
        let sigma = Cone::new(2, &[vec![-1, 2], vec![1, 2]], &[]);
        let dual = sigma.dual();
        assert_eq!(dual, Cone::new(2, &[vec![-2, 1], vec![2, 1]], &[]));
        assert_eq!(dual.dual(), sigma);
        // cross-check: sampled lattice points of the dual pair nonnegatively
        for x in -5i64..=5 {
            for y in -5i64..=5 {
                let m = to_rat(&[x, y]);
                let expected = sigma
                    .rays()
                    .iter()
                    .all(|r| !dot(&to_rat(r), &m).is_negative());
                assert_eq!(dual.contains(&m), expected);
            }
        }
    }

    #[test]
    fn dual_of_trivial_cones() {
        assert_eq!(Cone::full_space(2).dual(), Cone::zero(2));
        assert_eq!(Cone::zero(3).dual(), Cone::full_space(3));
        let orthant = Cone::new(2, &[vec![1, 0], vec![0, 1]], &[]);
        assert_eq!(orthant.dual(), orthant);
    }

    #[test]
    fn redundant_generators_are_removed() {
        let c = Cone::new(2, &[vec![1, 0], vec![2, 2], vec![0, 3], vec![1, 1]], &[]);
        assert_eq!(c.rays(), &[vec![0, 1], vec![1, 0]]);
        let half = Cone::new(2, &[vec![1, 0], vec![0, 1], vec![-1, 0]], &[]);
        assert_eq!(half.lineality(), &[vec![1, 0]]);
        assert_eq!(half.rays(), &[vec![0, 1]]);
        assert!(half.contains(&[rat(-7), rat(1)]));
    }

    #[test]
    fn faces_of_square_cone() {
        let c = Cone::new(
            3,
            &[vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]],
            &[],
        );
        let faces = c.faces();
        // apex, 4 rays, 4 two-dimensional faces, the cone itself
        assert_eq!(faces.len(), 10);
        assert_eq!(c.dual().rays().len(), 4);
    }

    #[test]
    fn intersection_of_half_planes() {
        let a = Cone::from_inequalities(2, &[to_rat(&[1, 0])], &[]);
        let b = Cone::from_inequalities(2, &[to_rat(&[0, 1])], &[]);
        assert_eq!(
            a.intersect(&b),
            Cone::new(2, &[vec![1, 0], vec![0, 1]], &[])
        );
    }
}
