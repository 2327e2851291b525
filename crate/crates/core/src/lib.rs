//! Exact symbolic verification of q-deformed differential calculi.

pub mod error;
pub mod hspace;
pub mod espace;
pub mod ncalg;
pub mod parse;
pub mod qscalar;
pub mod qgauge;
pub mod qsphere;
pub mod qtensor;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
pub use ncalg::{Gen, NCPoly, RewriteSystem};
pub use qscalar::{QScalar, Rational};
