//! Noncommutative polynomials, rewrite systems and graded derivations.

pub mod derivation;
pub mod gen;
pub mod poly;
pub mod rewrite;

pub use derivation::{theta_project, GradedDerivation, ThetaParts};
pub use gen::{Class, Gen, Word};
pub use poly::NCPoly;
pub use rewrite::{RewriteSystem, Strategy, SystemBuilder};
