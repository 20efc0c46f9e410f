use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad classification used by the command line to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input or violated precondition.
    Validation,
    /// Numerical breakdown: non-convergence, stem violation, singular solves.
    Numeric,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("blade mask {mask:#b} out of range for rank {n}")]
    MaskOutOfRange { mask: u32, n: usize },

    #[error("length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("{re}{im:+}i lies in the spectrum")]
    SpectralPoint { re: f64, im: f64 },

    #[error("real paravector has no imaginary direction")]
    DegenerateDirection,

    #[error("point {re}{im:+}i lies outside the function domain")]
    OutsideDomain { re: f64, im: f64 },

    #[error("cannot place a contour: {0}")]
    NoContour(String),

    #[error("contour passes through or does not enclose the spectrum near {re}{im:+}i")]
    ContourThroughSpectrum { re: f64, im: f64 },

    #[error("{what} did not converge (last change {residual:e})")]
    NonConvergence { what: &'static str, residual: f64 },

    #[error("stem property violated: residual {residual:e} exceeds {tol:e}")]
    StemViolation { residual: f64, tol: f64 },

    #[error("operator is not right Clifford-linear: residual {residual:e}")]
    NotRightLinear { residual: f64 },

    #[error("singular linear system (pivot {pivot:e})")]
    SingularMatrix { pivot: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix of size {size} exceeds the configured cap {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("generator e{index} not available in rank {n}")]
    RankViolation { index: usize, n: usize },

    #[error("division by (near-)zero at {re}{im:+}i")]
    DivisionByZero { re: f64, im: f64 },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("finite-difference stencil leaves the domain")]
    StencilOutsideDomain,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NonConvergence { .. }
            | Error::StemViolation { .. }
            | Error::NotRightLinear { .. }
            | Error::SingularMatrix { .. }
            | Error::ContourThroughSpectrum { .. }
            | Error::DivisionByZero { .. } => ErrorClass::Numeric,
            _ => ErrorClass::Validation,
        }
    }

    /// Stable machine-readable tag for JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::RankMismatch { .. } => "rank-mismatch",
            Error::MaskOutOfRange { .. } => "mask-out-of-range",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::SingularInput(_) => "singular-input",
            Error::SpectralPoint { .. } => "spectral-point",
            Error::DegenerateDirection => "degenerate-direction",
            Error::OutsideDomain { .. } => "outside-domain",
            Error::NoContour(_) => "no-contour",
            Error::ContourThroughSpectrum { .. } => "contour-through-spectrum",
            Error::NonConvergence { .. } => "non-convergence",
            Error::StemViolation { .. } => "stem-violation",
            Error::NotRightLinear { .. } => "not-right-linear",
            Error::SingularMatrix { .. } => "singular-matrix",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::TooLarge { .. } => "too-large",
            Error::Syntax { .. } => "syntax",
            Error::RankViolation { .. } => "rank-violation",
            Error::DivisionByZero { .. } => "division-by-zero",
            Error::Invalid(_) => "invalid",
            Error::StencilOutsideDomain => "stencil-outside-domain",
        }
    }
}
