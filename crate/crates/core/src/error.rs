use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QrfError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("subsystem dims {dims:?} do not multiply to matrix side {side}")]
    BadDims { dims: Vec<usize>, side: usize },

    #[error("invalid subsystem index {index} for {count} subsystems")]
    BadSubsystem { index: usize, count: usize },

    #[error("not Hermitian: max deviation {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("trace is {trace}, expected 1 within {tolerance:e}")]
    BadTrace { trace: f64, tolerance: f64 },

    #[error("negative eigenvalue {value:e} below -{tolerance:e}")]
    NotPositive { value: f64, tolerance: f64 },

    #[error("invalid probability distribution: {0}")]
    BadDistribution(String),

    #[error("support of the first argument is not contained in the second (residual {residual:e}); relative entropy is +infinity")]
    SupportViolation { residual: f64 },

    #[error("modulus mismatch: {left:?} vs {right:?}")]
    ModulusMismatch { left: Option<u32>, right: Option<u32> },

    #[error("{points} quadrature points do not exceed charge span {span}")]
    TooFewPoints { points: usize, span: i64 },

    #[error("spectrum is not commensurate with unit {unit}: eigenvalue {value}")]
    Incommensurate { value: f64, unit: f64 },

    #[error("state has no component in the zero-charge sector")]
    ZeroProjection,

    #[error("clock never reads tick {tick}: conditional probability undefined")]
    UndefinedConditional { tick: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, QrfError>;
