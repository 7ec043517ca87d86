use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pole of the gamma function at z = {0}")]
    GammaPole(Complex64),

    #[error("argument outside the domain of {function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },

    #[error("{what} did not converge after {terms} terms (last value {last})")]
    NonConvergence {
        what: &'static str,
        terms: usize,
        last: Complex64,
    },

    #[error("continued fraction has a_{index} = 0")]
    ZeroCoefficient { index: usize },

    #[error("division by zero in continued fraction at depth {depth}")]
    DivisionByZero { depth: usize },

    #[error("Bauer-Muir transform undefined: lambda_{index} = 0")]
    TransformUndefined { index: usize },

    #[error("continued fraction has no limits; fixed-point tail unavailable")]
    MissingLimits,

    #[error("fixed points are degenerate: {0}")]
    DegenerateFixedPoints(&'static str),

    #[error("energy {0} is singular for this operator")]
    SingularEnergy(Complex64),

    #[error("operator is diagonal; limit coefficients are undefined")]
    DiagonalOperator,

    #[error("no bound states for a non-attractive potential")]
    NoBoundStates,

    #[error("matrix is singular at pivot {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("recurrence became unstable: residual {residual:e} at row {row}")]
    Unstable { residual: f64, row: usize },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("quadrature rules disagree by {difference:e}")]
    QuadratureDisagreement { difference: f64 },

    #[error("root not found: {0}")]
    RootNotFound(String),
}
