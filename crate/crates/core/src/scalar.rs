//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rustfft::FftNum;

/// Floating point scalar usable throughout the deconvolution pipeline: `f32` or `f64`.
///
/// Everything that touches the FFT needs [`FftNum`], so the bound lives here
/// rather than being repeated on each function.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + FftNum + Default + Debug + Display + Send + Sync
{
    /// Converts a literal. Every `f64` is representable (possibly rounded) in `f32`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal converts to every Real")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Real converts to f64")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::lit(n as f64)
    }
}

impl Real for f32 {}
impl Real for f64 {}
