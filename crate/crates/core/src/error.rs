use thiserror::Error;

/// Errors raised by the geometry, optimization and embedding routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point is not on the manifold: <x,x> - beta = {deviation:e}")]
    NotOnManifold { deviation: f64 },

    #[error("vector is not tangent at the base point: <x,v> = {residual:e}")]
    NotTangent { residual: f64 },

    #[error("vector is not timelike (<z,z> = {norm}); it cannot be scaled onto the manifold")]
    NonTimelike { norm: f64 },

    #[error("point is outside the normal neighborhood: <x,y> = {scalar_product} >= |beta| = {bound}")]
    OutsideNormalNeighborhood { scalar_product: f64, bound: f64 },

    #[error("singular input: all time coordinates are zero")]
    SingularInput,

    #[error("unsupported signature: {0}")]
    UnsupportedSignature(String),

    #[error("optimization diverged at iteration {iteration}: {reason}")]
    Divergence { iteration: usize, reason: String },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("index {index} out of range for {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("correlation is undefined for constant input")]
    UndefinedCorrelation,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
