use crate::error::{GfdError, Result};
use crate::scalar::Real;

/// Convolution kernel with odd dimensions, normalized to unit sum.
///
/// The centre tap is `(kheight / 2, kwidth / 2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Psf<T = f64> {
    kheight: usize,
    kwidth: usize,
    taps: Vec<T>,
}

impl<T: Real> Psf<T> {
    /// Builds a kernel from row-major taps and rescales them to sum to one.
    pub fn new(kheight: usize, kwidth: usize, taps: Vec<T>) -> Result<Self> {
        if kheight == 0 || kwidth == 0 || kheight % 2 == 0 || kwidth % 2 == 0 {
            return Err(GfdError::InvalidKernel(format!(
                "kernel dimensions must be odd and positive, got {kheight}x{kwidth}"
            )));
        }
        if taps.len() != kheight * kwidth {
            return Err(GfdError::InvalidKernel(format!(
                "expected {} taps, got {}",
                kheight * kwidth,
                taps.len()
            )));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(GfdError::InvalidKernel("non-finite tap".into()));
        }
        let sum = taps.iter().fold(0.0f64, |acc, t| acc + t.as_f64());
        if sum.abs() < 1e-300 || !sum.is_finite() {
            return Err(GfdError::InvalidKernel(format!("taps sum to {sum}, cannot normalize")));
        }
        let taps = taps.into_iter().map(|t| T::lit(t.as_f64() / sum)).collect();
        Ok(Self {
            kheight,
            kwidth,
            taps,
        })
    }

    /// The 1×1 identity kernel.
    pub fn delta() -> Self {
        Self {
            kheight: 1,
            kwidth: 1,
            taps: vec![T::one()],
        }
    }

    pub fn kheight(&self) -> usize {
        self.kheight
    }

    pub fn kwidth(&self) -> usize {
        self.kwidth
    }

    pub fn taps(&self) -> &[T] {
        &self.taps
    }

    pub fn tap(&self, row: usize, col: usize) -> T {
        self.taps[row * self.kwidth + col]
    }

    pub fn center(&self) -> (usize, usize) {
        (self.kheight / 2, self.kwidth / 2)
    }

    pub fn tap_sum(&self) -> T {
        T::lit(self.taps.iter().fold(0.0f64, |acc, t| acc + t.as_f64()))
    }
}
