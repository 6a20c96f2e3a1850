use thiserror::Error;

pub type Result<T> = std::result::Result<T, GfdError>;

#[derive(Debug, Error)]
pub enum GfdError {
    #[error("image dimensions must be positive, got {height}x{width}")]
    EmptyImage { height: usize, width: usize },

    #[error("data length {actual} does not match {height}x{width} = {expected}")]
    DataLength {
        height: usize,
        width: usize,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("window size {0} must be odd and positive")]
    InvalidWindow(usize),

    #[error("window size {w} exceeds image dimensions {height}x{width}")]
    WindowTooLarge { w: usize, height: usize, width: usize },

    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("kernel {kernel:?} does not fit canvas {canvas:?}")]
    KernelTooLarge {
        kernel: (usize, usize),
        canvas: (usize, usize),
    },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("spectral denominator {magnitude:e} at frequency index {index} is singular")]
    SingularDenominator { index: usize, magnitude: f64 },

    #[error("image {height}x{width} too small, need at least {min}x{min}")]
    ImageTooSmall {
        height: usize,
        width: usize,
        min: usize,
    },

    #[error("could not bracket lambda: discrepancy stayed below bound {bound:e} up to lambda = {lambda:e}")]
    BracketFailure { bound: f64, lambda: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl GfdError {
    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            GfdError::SingularDenominator { .. } | GfdError::BracketFailure { .. }
        )
    }
}
