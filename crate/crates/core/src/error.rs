use thiserror::Error;

use crate::algebra::Var;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable mismatch: {0:?} vs {1:?}")]
    VarMismatch(Var, Var),
    #[error("exact division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{op} requires constant term {expected}")]
    ConstantTerm { op: &'static str, expected: &'static str },
    #[error("seed value 1 is not a root of the bivariate polynomial at the origin")]
    NotARoot,
    #[error("dominant root is degenerate (vanishing derivative or repeated eigenvalue)")]
    DegenerateRoot,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0} is a structure function and has no graph realization")]
    NoGraphRealization(String),
    #[error("moment integral diverges: reliability polynomial has nonzero constant term")]
    DivergentMoment,
    #[error("moment generating function diverges: z/lambda = {x} >= smallest exponent {k_min}")]
    DivergentMgf { x: f64, k_min: usize },
    #[error("quadrature did not converge (estimate {estimate}, error {error})")]
    QuadratureNonConvergence { estimate: f64, error: f64 },
    #[error("missing expansion coefficient {0}")]
    MissingCoefficient(String),
    #[error("signature extraction inconsistent at size {0}")]
    InconsistentSizes(u32),
    #[error("first-order amplitude coefficient is nonzero ({0}); order-1 Weibull equivalent undefined")]
    NonzeroFirstCut(String),
    #[error("graph has {0} edges; brute force is limited to 22")]
    TooManyEdges(usize),
    #[error("classification inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Variant name, used for CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::VarMismatch(..) => "VarMismatch",
            Error::NonzeroRemainder => "NonzeroRemainder",
            Error::DivisionByZero => "DivisionByZero",
            Error::ConstantTerm { .. } => "ConstantTerm",
            Error::NotARoot => "NotARoot",
            Error::DegenerateRoot => "DegenerateRoot",
            Error::Unsupported(_) => "Unsupported",
            Error::NoGraphRealization(_) => "NoGraphRealization",
            Error::DivergentMoment => "DivergentMoment",
            Error::DivergentMgf { .. } => "DivergentMGF",
            Error::QuadratureNonConvergence { .. } => "QuadratureNonConvergence",
            Error::MissingCoefficient(_) => "MissingCoefficient",
            Error::InconsistentSizes(_) => "InconsistentSizes",
            Error::NonzeroFirstCut(_) => "NonzeroFirstCut",
            Error::TooManyEdges(_) => "TooManyEdges",
            Error::Inconclusive(_) => "Inconclusive",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
