//! Frequency-domain deblurring under a periodic boundary model.
//!
//! Blur and forward differences are circular convolutions, so the 2-D DFT
//! diagonalizes both and the two quadratic deblurring problems have
//! closed-form per-frequency solutions:
//!
//! ```text
//! guidance:  U_I = (H̄·G + λ(D̄x·Vx + D̄y·Vy)) / (|H|² + λ(|Dx|² + |Dy|²))
//! input:     U_p = (H̄·G + λ·V) / (|H|² + λ)
//! ```

mod fft;
mod psf;

use std::fmt;

use num_complex::Complex;

pub use fft::{Fft2, SpectralPlane};
pub use psf::Psf;

use crate::error::{GfdError, Result};
use crate::image::Image;
use crate::scalar::Real;

/// Denominator magnitudes below this are treated as singular.
pub const SINGULAR_DENOMINATOR: f64 = 1e-15;

/// Regularization weight; `Infinite` selects the pre-estimate unchanged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lambda<T = f64> {
    Finite(T),
    Infinite,
}

impl<T: Real> Lambda<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Lambda::Finite(v) => Some(v),
            Lambda::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Lambda::Infinite)
    }

    fn checked(self) -> Result<Self> {
        match self {
            Lambda::Finite(v) if !(v > T::zero()) || !v.is_finite() => Err(GfdError::InvalidParameter(
                format!("lambda must be positive and finite, got {v}"),
            )),
            other => Ok(other),
        }
    }
}

impl<T: Real> fmt::Display for Lambda<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Finite(v) => write!(f, "{v}"),
            Lambda::Infinite => f.write_str("inf"),
        }
    }
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Spectrum of `psf` zero-embedded in a `height×width` canvas with its centre
/// tap wrapped to the origin.
pub fn psf_spectrum<T: Real>(psf: &Psf<T>, height: usize, width: usize) -> Result<SpectralPlane<T>> {
    let fft = Fft2::new(height, width)?;
    psf_spectrum_with(&fft, psf)
}

fn psf_spectrum_with<T: Real>(fft: &Fft2<T>, psf: &Psf<T>) -> Result<SpectralPlane<T>> {
    let (h, w) = fft.dims();
    if psf.kheight() > h || psf.kwidth() > w {
        return Err(GfdError::KernelTooLarge {
            kernel: (psf.kheight(), psf.kwidth()),
            canvas: (h, w),
        });
    }
    let (ch, cw) = psf.center();
    let mut canvas = vec![zero::<T>(); h * w];
    for r in 0..psf.kheight() {
        let row = (r as isize - ch as isize).rem_euclid(h as isize) as usize;
        for c in 0..psf.kwidth() {
            let col = (c as isize - cw as isize).rem_euclid(w as isize) as usize;
            canvas[row * w + col].re += psf.tap(r, c);
        }
    }
    Ok(fft.forward_complex(canvas))
}

/// Centred circular convolution `psf ∗ img`.
pub fn circ_convolve<T: Real>(img: &Image<T>, psf: &Psf<T>) -> Result<Image<T>> {
    if psf.taps().len() == 1 {
        // A normalized 1×1 kernel is the identity.
        return Ok(img.clone());
    }
    let fft = Fft2::new(img.height(), img.width())?;
    let h = psf_spectrum_with(&fft, psf)?;
    let mut buf = fft.forward(img)?.coeffs().to_vec();
    for (x, k) in buf.iter_mut().zip(h.coeffs()) {
        *x = *x * *k;
    }
    Ok(fft.inverse_owned(buf))
}

/// Spectra of the circular forward differences along x (columns) and y (rows).
pub fn derivative_spectra<T: Real>(height: usize, width: usize) -> Result<(SpectralPlane<T>, SpectralPlane<T>)> {
    let fft = Fft2::new(height, width)?;
    Ok(derivative_spectra_with(&fft))
}

fn derivative_spectra_with<T: Real>(fft: &Fft2<T>) -> (SpectralPlane<T>, SpectralPlane<T>) {
    let (h, w) = fft.dims();
    // (∂x u)(i, j) = u(i, j+1) - u(i, j): kernel -1 at the origin, +1 at column offset -1.
    let mut dx = vec![zero::<T>(); h * w];
    dx[0].re -= T::one();
    dx[w - 1].re += T::one();
    let mut dy = vec![zero::<T>(); h * w];
    dy[0].re -= T::one();
    dy[(h - 1) * w].re += T::one();
    (fft.forward_complex(dx), fft.forward_complex(dy))
}

/// Precomputed spectra of an observation `g` blurred by `psf`.
///
/// Built once per deconvolution; each solve then costs one or three forward
/// transforms plus one inverse.
#[derive(Clone, Debug)]
pub struct Deconvolver<T: Real> {
    fft: Fft2<T>,
    psf_hat: SpectralPlane<T>,
    psf_abs2: Vec<T>,
    g_hat: SpectralPlane<T>,
    dx_hat: SpectralPlane<T>,
    dy_hat: SpectralPlane<T>,
    grad_abs2: Vec<T>,
}

impl<T: Real> Deconvolver<T> {
    pub fn new(g: &Image<T>, psf: &Psf<T>) -> Result<Self> {
        let fft = Fft2::new(g.height(), g.width())?;
        let psf_hat = psf_spectrum_with(&fft, psf)?;
        let g_hat = fft.forward(g)?;
        let (dx_hat, dy_hat) = derivative_spectra_with(&fft);
        let psf_abs2 = psf_hat.coeffs().iter().map(|c| c.norm_sqr()).collect();
        let grad_abs2 = dx_hat
            .coeffs()
            .iter()
            .zip(dy_hat.coeffs())
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect();
        Ok(Self {
            fft,
            psf_hat,
            psf_abs2,
            g_hat,
            dx_hat,
            dy_hat,
            grad_abs2,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.fft.dims()
    }

    fn check_dims(&self, img: &Image<T>) -> Result<()> {
        if img.dims() != self.dims() {
            return Err(GfdError::DimensionMismatch {
                expected: self.dims(),
                actual: img.dims(),
            });
        }
        Ok(())
    }

    pub fn fft(&self) -> &Fft2<T> {
        &self.fft
    }

    pub fn psf_hat(&self) -> &SpectralPlane<T> {
        &self.psf_hat
    }

    pub fn g_hat(&self) -> &SpectralPlane<T> {
        &self.g_hat
    }

    pub fn gradient_hats(&self) -> (&SpectralPlane<T>, &SpectralPlane<T>) {
        (&self.dx_hat, &self.dy_hat)
    }

    /// Gradient-regularized solve producing the guidance image.
    pub fn solve_guidance(&self, vx: &Image<T>, vy: &Image<T>, v: &Image<T>, lambda: Lambda<T>) -> Result<Image<T>> {
        let lambda = match lambda.checked()? {
            Lambda::Infinite => {
                self.check_dims(v)?;
                return Ok(v.clone());
            }
            Lambda::Finite(l) => l,
        };
        let vx_hat = self.fft.forward(vx)?;
        let vy_hat = self.fft.forward(vy)?;
        let n = self.psf_abs2.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let den = self.psf_abs2[k] + lambda * self.grad_abs2[k];
            if den.abs().as_f64() < SINGULAR_DENOMINATOR {
                return Err(GfdError::SingularDenominator {
                    index: k,
                    magnitude: den.abs().as_f64(),
                });
            }
            let num = self.psf_hat.coeffs()[k].conj() * self.g_hat.coeffs()[k]
                + (self.dx_hat.coeffs()[k].conj() * vx_hat.coeffs()[k]
                    + self.dy_hat.coeffs()[k].conj() * vy_hat.coeffs()[k])
                    * lambda;
            out.push(num / den);
        }
        Ok(self.fft.inverse_owned(out))
    }

    /// Tikhonov solve pulling toward the pre-estimate `v`, producing the filter input.
    pub fn solve_input(&self, v: &Image<T>, lambda: Lambda<T>) -> Result<Image<T>> {
        let lambda = match lambda.checked()? {
            Lambda::Infinite => {
                self.check_dims(v)?;
                return Ok(v.clone());
            }
            Lambda::Finite(l) => l,
        };
        let v_hat = self.fft.forward(v)?;
        let out = (0..self.psf_abs2.len())
            .map(|k| {
                let num = self.psf_hat.coeffs()[k].conj() * self.g_hat.coeffs()[k] + v_hat.coeffs()[k] * lambda;
                num / (self.psf_abs2[k] + lambda)
            })
            .collect();
        Ok(self.fft.inverse_owned(out))
    }

    /// Residual curve `λ ↦ ‖h ∗ u_p(λ) − g‖²` for a fixed pre-estimate `v`.
    pub fn discrepancy_curve(&self, v: &Image<T>) -> Result<DiscrepancyCurve<T>> {
        let v_hat = self.fft.forward(v)?;
        let residual_abs2 = v_hat
            .coeffs()
            .iter()
            .zip(self.psf_hat.coeffs())
            .zip(self.g_hat.coeffs())
            .map(|((&vh, &hh), &gh)| (hh * vh - gh).norm_sqr().as_f64())
            .collect();
        Ok(DiscrepancyCurve {
            residual_abs2,
            psf_abs2: self.psf_abs2.iter().map(|v| v.as_f64()).collect(),
            inv_count: 1.0 / self.psf_abs2.len() as f64,
            _scalar: std::marker::PhantomData,
        })
    }
}

/// `D(λ) = (1/N) Σ λ²·|H·V − G|² / (|H|² + λ)²`, the data misfit of the
/// Tikhonov solution, evaluated without leaving the frequency domain.
///
/// The `1/N` factor is Parseval's for the unnormalized forward DFT, so `D(λ)`
/// equals the spatial squared norm. Accumulates in `f64`.
#[derive(Clone, Debug)]
pub struct DiscrepancyCurve<T> {
    residual_abs2: Vec<f64>,
    psf_abs2: Vec<f64>,
    inv_count: f64,
    _scalar: std::marker::PhantomData<T>,
}

impl<T: Real> DiscrepancyCurve<T> {
    pub fn eval(&self, lambda: T) -> T {
        let l = lambda.as_f64();
        if l == 0.0 {
            return T::zero();
        }
        let sum: f64 = self
            .residual_abs2
            .iter()
            .zip(&self.psf_abs2)
            .map(|(&e, &h2)| {
                let f = l / (h2 + l);
                f * f * e
            })
            .sum();
        T::lit(sum * self.inv_count)
    }

    /// Limit as `λ → ∞`: `‖h ∗ v − g‖²`.
    pub fn asymptote(&self) -> T {
        T::lit(self.residual_abs2.iter().sum::<f64>() * self.inv_count)
    }
}

/// One-shot guidance solve; see [`Deconvolver::solve_guidance`].
pub fn solve_guidance<T: Real>(
    g: &Image<T>,
    psf: &Psf<T>,
    vx: &Image<T>,
    vy: &Image<T>,
    lambda: Lambda<T>,
    v: &Image<T>,
) -> Result<Image<T>> {
    g.ensure_same_dims(vx)?;
    g.ensure_same_dims(vy)?;
    g.ensure_same_dims(v)?;
    Deconvolver::new(g, psf)?.solve_guidance(vx, vy, v, lambda)
}

/// One-shot input solve; see [`Deconvolver::solve_input`].
pub fn solve_input<T: Real>(g: &Image<T>, psf: &Psf<T>, v: &Image<T>, lambda: Lambda<T>) -> Result<Image<T>> {
    g.ensure_same_dims(v)?;
    Deconvolver::new(g, psf)?.solve_input(v, lambda)
}

/// `‖h ∗ u_p(λ) − g‖²` for `λ ≥ 0`.
pub fn discrepancy<T: Real>(g: &Image<T>, psf: &Psf<T>, v: &Image<T>, lambda: T) -> Result<T> {
    if !(lambda >= T::zero()) || !lambda.is_finite() {
        return Err(GfdError::InvalidParameter(format!(
            "lambda must be non-negative and finite, got {lambda}"
        )));
    }
    g.ensure_same_dims(v)?;
    Ok(Deconvolver::new(g, psf)?.discrepancy_curve(v)?.eval(lambda))
}
