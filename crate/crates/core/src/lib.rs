//! Exact combinatorics of complexity-one torus actions on varieties:
//! polyhedral divisors, marked fansy divisors, support functions and
//! divisorial polytopes, together with their invariants.

pub mod cone_algebra;
pub mod curve;
pub mod divpoly;
pub mod error;
pub mod fansy;
pub mod fixtures;
pub mod geometry;
pub mod json;
pub mod pdiv;
pub mod render;
pub mod support;

pub use error::{Error, Result};
