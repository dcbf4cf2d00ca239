//! Exact polyhedral geometry over the rationals.

pub mod cone;
pub mod fan;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod polyhedron;

pub use cone::Cone;
pub use fan::Fan;
pub use linalg::{frac, rat, LatticeVec, Rat, RatVec};
pub use poly::UniPoly;
pub use polyhedron::{Hrep, Polyhedron};
