use thiserror::Error;

use crate::algebra::AlgebraId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid density M must be at least 1")]
    InvalidDensity,

    #[error("coordinates {coords:?} violate the {what} constraint for {algebra} at M = {m}")]
    InvalidCoordinates {
        what: &'static str,
        algebra: AlgebraId,
        m: u32,
        coords: [u32; 3],
    },

    #[error("only interior points can be placed in the reflected sector")]
    ReflectedBoundary,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("folding did not reach the fundamental domain after {0} reflections")]
    FoldDiverged(usize),

    #[error("folded point {0:?} is not a grid point")]
    OffGrid([i64; 2]),

    #[error("kernel has zero weighted sum and cannot be made sum-preserving")]
    ZeroKernelSum,

    #[error("unknown kernel '{0}'")]
    UnknownKernel(String),

    #[error("kernel support point {0:?} is not on the grid (M too small)")]
    KernelSupport([i64; 2]),

    #[error("image must be square, got {width}x{height}")]
    NonSquare { width: usize, height: usize },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
