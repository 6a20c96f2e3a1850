use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{GfdError, Result};
use crate::image::Image;
use crate::scalar::Real;

/// Complex frequency-domain plane laid out like the 2-D DFT of an image:
/// row-major, DC at index 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPlane<T = f64> {
    height: usize,
    width: usize,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpectralPlane<T> {
    pub fn new(height: usize, width: usize, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(GfdError::EmptyImage { height, width });
        }
        if coeffs.len() != height * width {
            return Err(GfdError::DataLength {
                height,
                width,
                expected: height * width,
                actual: coeffs.len(),
            });
        }
        if let Some(index) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(GfdError::NonFinite { index });
        }
        Ok(Self {
            height,
            width,
            coeffs,
        })
    }

    pub(crate) fn from_raw(height: usize, width: usize, coeffs: Vec<Complex<T>>) -> Self {
        Self {
            height,
            width,
            coeffs,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.coeffs[row * self.width + col]
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }
}

/// Planned 2-D FFT for one canvas size.
///
/// The forward transform is unnormalized and the inverse carries the `1/(H·W)`
/// factor, so Parseval reads `Σ|x|² = Σ|X|² / (H·W)`.
#[derive(Clone)]
pub struct Fft2<T: Real> {
    height: usize,
    width: usize,
    row_fwd: Arc<dyn Fft<T>>,
    row_inv: Arc<dyn Fft<T>>,
    col_fwd: Arc<dyn Fft<T>>,
    col_inv: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for Fft2<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2")
            .field("height", &self.height)
            .field("width", &self.width)
            .finish()
    }
}

impl<T: Real> Fft2<T> {
    pub fn new(height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(GfdError::EmptyImage { height, width });
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            height,
            width,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn forward(&self, img: &Image<T>) -> Result<SpectralPlane<T>> {
        self.check(img.dims())?;
        let buf = img.data().iter().map(|&v| Complex::new(v, T::zero())).collect();
        Ok(self.forward_complex(buf))
    }

    pub(crate) fn forward_complex(&self, mut buf: Vec<Complex<T>>) -> SpectralPlane<T> {
        self.transform(&mut buf, &self.row_fwd, &self.col_fwd);
        SpectralPlane::from_raw(self.height, self.width, buf)
    }

    /// Inverse transform keeping the real part.
    pub fn inverse(&self, plane: &SpectralPlane<T>) -> Result<Image<T>> {
        self.check(plane.dims())?;
        Ok(self.inverse_owned(plane.coeffs.clone()))
    }

    pub(crate) fn inverse_owned(&self, mut buf: Vec<Complex<T>>) -> Image<T> {
        self.transform(&mut buf, &self.row_inv, &self.col_inv);
        let scale = T::one() / T::from_usize_lossy(buf.len());
        Image::from_raw(self.height, self.width, buf.iter().map(|c| c.re * scale).collect())
    }

    fn transform(&self, buf: &mut [Complex<T>], rows: &Arc<dyn Fft<T>>, cols: &Arc<dyn Fft<T>>) {
        let (h, w) = (self.height, self.width);
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); rows.get_inplace_scratch_len().max(cols.get_inplace_scratch_len())];
        rows.process_with_scratch(buf, &mut scratch);
        if h > 1 {
            let mut t = transpose(buf, h, w);
            cols.process_with_scratch(&mut t, &mut scratch);
            let back = transpose(&t, w, h);
            buf.copy_from_slice(&back);
        }
    }

    fn check(&self, dims: (usize, usize)) -> Result<()> {
        if dims != (self.height, self.width) {
            return Err(GfdError::DimensionMismatch {
                expected: (self.height, self.width),
                actual: dims,
            });
        }
        Ok(())
    }
}

fn transpose<C: Copy>(src: &[C], rows: usize, cols: usize) -> Vec<C> {
    let mut out = Vec::with_capacity(src.len());
    for c in 0..cols {
        for r in 0..rows {
            out.push(src[r * cols + c]);
        }
    }
    out
}
