//! Automatic choice of the regularization weight λ.
//!
//! λ is picked by Morozov's discrepancy principle: the Tikhonov solution must
//! fit the data to within `c = ρ·N·σ²`, where `N` is the pixel count and `σ²`
//! the noise variance. The residual is monotone in λ, so bisection finds the
//! unique λ with residual `c`. The fraction `ρ` itself adapts to the data.

use crate::error::{GfdError, Result};
use crate::image::Image;
use crate::scalar::Real;
use crate::spectral::{Deconvolver, DiscrepancyCurve, Lambda, Psf};

/// Gaussian MAD constant: median of `|N(0, 1)|`.
pub const MAD_TO_SIGMA: f64 = 0.6745;

/// Default threshold separating the two branches of the ρ schedule.
pub const DEFAULT_TAU: f64 = 0.6;

/// Bounds applied to `s` before it becomes ρ.
pub const S_FLOOR: f64 = 0.05;
pub const S_CEIL: f64 = 1.0;

/// Upper limit for the doubling phase of the λ bracket.
pub const LAMBDA_BRACKET_LIMIT: f64 = 1e12;

/// Noise standard deviation and its square.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseEstimate<T = f64> {
    sigma: T,
    variance: T,
}

impl<T: Real> NoiseEstimate<T> {
    pub fn from_sigma(sigma: T) -> Result<Self> {
        if !(sigma >= T::zero()) || !sigma.is_finite() {
            return Err(GfdError::InvalidParameter(format!(
                "noise sigma must be non-negative and finite, got {sigma}"
            )));
        }
        Ok(Self {
            sigma,
            variance: sigma * sigma,
        })
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn variance(&self) -> T {
        self.variance
    }
}

/// Parameters of the admissible set `{u : ‖h ∗ u − g‖² ≤ bound_c}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscrepancySpec<T = f64> {
    rho: T,
    bound_c: T,
    tau: T,
}

impl<T: Real> DiscrepancySpec<T> {
    pub fn new(rho: T, pixel_count: usize, noise: &NoiseEstimate<T>, tau: T) -> Result<Self> {
        if !(rho > T::zero() && rho <= T::one()) {
            return Err(GfdError::InvalidParameter(format!("rho must lie in (0, 1], got {rho}")));
        }
        Ok(Self {
            rho,
            bound_c: rho * T::from_usize_lossy(pixel_count) * noise.variance(),
            tau,
        })
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn bound(&self) -> T {
        self.bound_c
    }

    pub fn tau(&self) -> T {
        self.tau
    }
}

/// Result of the λ search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaChoice<T = f64> {
    pub value: Lambda<T>,
    /// Discrepancy achieved at `value` (the asymptote `‖h∗v−g‖²` when infinite).
    pub residual: T,
    /// Bisection steps taken, excluding bracket doubling.
    pub iterations: usize,
    /// False when `max_iter` ran out before the tolerance was met.
    pub converged: bool,
}

/// Robust noise level from the diagonal detail band of a one-level Haar transform.
///
/// `σ = median(|HH|) / 0.6745`. Odd dimensions are mirror-extended by one
/// row or column.
pub fn estimate_sigma<T: Real>(g: &Image<T>) -> Result<NoiseEstimate<T>> {
    let (h, w) = g.dims();
    if h < 2 || w < 2 {
        return Err(GfdError::ImageTooSmall {
            height: h,
            width: w,
            min: 2,
        });
    }
    let at = |r: usize, c: usize| g.get(r.min(h - 1), c.min(w - 1)).as_f64();
    let (bh, bw) = (h.div_ceil(2), w.div_ceil(2));
    let mut detail = Vec::with_capacity(bh * bw);
    for br in 0..bh {
        let r = 2 * br;
        for bc in 0..bw {
            let c = 2 * bc;
            let hh = 0.5 * (at(r, c) - at(r, c + 1) - at(r + 1, c) + at(r + 1, c + 1));
            detail.push(hh.abs());
        }
    }
    let sigma = median(&mut detail) / MAD_TO_SIGMA;
    NoiseEstimate::from_sigma(T::lit(sigma))
}

fn median(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (_, &mut upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    if n % 2 == 1 {
        upper
    } else {
        let lower = values[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

/// Intermediate quantities of the ρ schedule, exposed for tracing and tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoTerms {
    /// Unclamped `1 − (‖g−μ(g)‖² − Nσ²)/‖g‖²`.
    pub s_raw: f64,
    pub s: f64,
    /// `+∞` when `v` is constant or the noise term vanishes.
    pub thresh: f64,
    pub rho: f64,
}

/// Data-driven discrepancy fraction.
///
/// ```text
/// s      = 1 − (‖g−μ(g)‖² − Nσ²) / ‖g‖²            (clamped to [0.05, 1])
/// thresh = sqrt((‖g−μ(g)‖² − Nσ²) / (Nσ² ‖v−μ(v)‖²))
/// ρ      = s² if thresh > τ, else s
/// ```
pub fn compute_rho<T: Real>(g: &Image<T>, v: &Image<T>, noise: &NoiseEstimate<T>, tau: T) -> Result<T> {
    Ok(T::lit(rho_terms(g, v, noise, tau)?.rho))
}

pub fn rho_terms<T: Real>(g: &Image<T>, v: &Image<T>, noise: &NoiseEstimate<T>, tau: T) -> Result<RhoTerms> {
    g.ensure_same_dims(v)?;
    let n = g.pixel_count() as f64;
    let noise_energy = n * noise.variance().as_f64();
    let excess = g.centered_sq_norm().as_f64() - noise_energy;
    let g_norm = g.sq_norm().as_f64();
    if g_norm == 0.0 {
        return Err(GfdError::DegenerateInput("observation is identically zero".into()));
    }
    let s_raw = 1.0 - excess / g_norm;
    let s = s_raw.clamp(S_FLOOR, S_CEIL);

    let v_energy = v.centered_sq_norm().as_f64();
    let denom = noise_energy * v_energy;
    let thresh = if v_energy == 0.0 || denom == 0.0 {
        f64::INFINITY
    } else {
        // A negative excess (noise above signal variance) means v carries nothing to trust.
        (excess.max(0.0) / denom).sqrt()
    };
    let rho = if thresh > tau.as_f64() { s * s } else { s };
    Ok(RhoTerms {
        s_raw,
        s,
        thresh,
        rho,
    })
}

/// Finds λ such that the Tikhonov solution around `v` has discrepancy `spec.bound()`.
pub fn choose_lambda<T: Real>(
    g: &Image<T>,
    psf: &Psf<T>,
    v: &Image<T>,
    spec: &DiscrepancySpec<T>,
    rel_tol: T,
    max_iter: usize,
) -> Result<LambdaChoice<T>> {
    g.ensure_same_dims(v)?;
    let curve = Deconvolver::new(g, psf)?.discrepancy_curve(v)?;
    choose_lambda_on(&curve, spec.bound(), rel_tol, max_iter)
}

/// Bisection on a precomputed discrepancy curve.
///
/// Returns `Lambda::Infinite` when the pre-estimate already satisfies the
/// bound. Otherwise brackets with `λ_lo = 0` and `λ_hi` doubling from 1, then
/// bisects until `|D(λ) − c| ≤ rel_tol·c`.
pub fn choose_lambda_on<T: Real>(
    curve: &DiscrepancyCurve<T>,
    bound: T,
    rel_tol: T,
    max_iter: usize,
) -> Result<LambdaChoice<T>> {
    if !(bound > T::zero()) || !bound.is_finite() {
        return Err(GfdError::InvalidParameter(format!(
            "discrepancy bound must be positive and finite, got {bound}"
        )));
    }
    if !(rel_tol > T::zero() && rel_tol <= T::lit(0.1)) {
        return Err(GfdError::InvalidParameter(format!("rel_tol must lie in (0, 0.1], got {rel_tol}")));
    }
    if max_iter == 0 {
        return Err(GfdError::InvalidParameter("max_iter must be at least 1".into()));
    }

    let asymptote = curve.asymptote();
    if asymptote <= bound {
        return Ok(LambdaChoice {
            value: Lambda::Infinite,
            residual: asymptote,
            iterations: 0,
            converged: true,
        });
    }

    let tol = rel_tol * bound;
    let mut lo = T::zero();
    let mut hi = T::one();
    let mut d_hi = curve.eval(hi);
    while d_hi < bound {
        if (d_hi - bound).abs() <= tol {
            return Ok(LambdaChoice {
                value: Lambda::Finite(hi),
                residual: d_hi,
                iterations: 0,
                converged: true,
            });
        }
        lo = hi;
        hi = hi + hi;
        if hi.as_f64() > LAMBDA_BRACKET_LIMIT {
            return Err(GfdError::BracketFailure {
                bound: bound.as_f64(),
                lambda: hi.as_f64(),
            });
        }
        d_hi = curve.eval(hi);
    }
    if (d_hi - bound).abs() <= tol {
        return Ok(LambdaChoice {
            value: Lambda::Finite(hi),
            residual: d_hi,
            iterations: 0,
            converged: true,
        });
    }

    let mut mid = hi;
    let mut d_mid = d_hi;
    for step in 1..=max_iter {
        mid = (lo + hi) * T::lit(0.5);
        d_mid = curve.eval(mid);
        if (d_mid - bound).abs() <= tol {
            return Ok(LambdaChoice {
                value: Lambda::Finite(mid),
                residual: d_mid,
                iterations: step,
                converged: true,
            });
        }
        if d_mid < bound {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // λ must stay strictly positive for the solves.
    if !(mid > T::zero()) {
        mid = hi;
        d_mid = curve.eval(hi);
    }
    Ok(LambdaChoice {
        value: Lambda::Finite(mid),
        residual: d_mid,
        iterations: max_iter,
        converged: false,
    })
}
