use thiserror::Error;

/// Errors raised by the library.
///
/// The variants split into two families: precondition/validation failures
/// and numerical failures. [`Error::is_numerical`] tells them apart, which
/// the command-line front end uses to pick an exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("point {0} is not a regular singularity")]
    IrregularPoint(&'static str),

    #[error("characteristic root {root} at {point} is not a positive real number")]
    NonRealExponent { point: &'static str, root: String },

    #[error("lambda = {lambda} is not an exponent (characteristic residual {residual:e})")]
    ExponentMismatch { lambda: f64, residual: f64 },

    #[error("equation is not reducible to the q-hypergeometric form: {0}")]
    NotReducible(String),

    #[error("q-Pochhammer denominator vanishes at index {index}")]
    PochhammerPole { index: usize },

    #[error("invariant subspace closure violated: out-of-space coefficient {magnitude:e} (relative)")]
    ClosureViolation { magnitude: f64 },

    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("exponent difference beta must be nonzero")]
    DegenerateBeta,

    #[error("singular points coincide or vanish: {0}")]
    CoincidentSingularities(String),

    #[error("resonance at index {index} is logarithmic (consistency sum {sum:e})")]
    ResonantLogarithmic { index: usize, sum: f64 },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonRealExponent { .. }
                | Error::ClosureViolation { .. }
                | Error::ConvergenceFailure(_)
                | Error::ResonantLogarithmic { .. }
        )
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "InvalidParams",
            Error::IrregularPoint(_) => "IrregularPoint",
            Error::NonRealExponent { .. } => "NonRealExponent",
            Error::ExponentMismatch { .. } => "ExponentMismatch",
            Error::NotReducible(_) => "NotReducible",
            Error::PochhammerPole { .. } => "PochhammerPole",
            Error::ClosureViolation { .. } => "ClosureViolation",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::DegenerateBeta => "DegenerateBeta",
            Error::CoincidentSingularities(_) => "CoincidentSingularities",
            Error::ResonantLogarithmic { .. } => "ResonantLogarithmic",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
