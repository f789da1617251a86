//! The q-Heun equation and its two variants, the eigenvalue equations of the
//! fourth, third and second degenerations of the one-variable
//! Ruijsenaars-van Diejen operator.
//!
//! - [`operator`]: the operators as three-term q-difference equations, their
//!   action on monomials, gauge transformations and the q-hypergeometric case.
//! - [`local`]: exponents, series solutions and apparency at `x = 0, inf`.
//! - [`characterize`]: recovering the variants from local data.
//! - [`qes`]: finite-dimensional invariant subspaces and exact eigenpairs.
//! - [`degeneration`]: the `q -> 1` limit to Fuchsian differential equations.
//!
//! All computations are in `f64`; thresholds live in [`tolerance`].

pub mod characterize;
pub mod degeneration;
pub mod error;
pub mod laurent;
pub mod local;
pub mod operator;
pub mod params;
pub mod qes;
pub mod tolerance;

pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use local::{BasePoint, ExponentPair, LocalExpansion, SeriesStatus};
pub use operator::{build_equation, QDiffEquation};
pub use params::{Family, ModelParams};
pub use tolerance::Tolerances;

/// Library version reported by the command-line front end.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
