//! The iterative guided-filter deconvolution loop.
//!
//! Starting from a black pre-estimate, each iteration
//!
//! 1. picks ρ and the discrepancy bound `ρ·N·σ²`,
//! 2. bisects for λ,
//! 3. solves the guidance image `u_I` and the filter input `u_p` in the
//!    frequency domain,
//! 4. sets `v ← guidfilter(u_I, u_p)`,
//! 5. refreshes the gradient pre-estimates from the self-guided filtered
//!    derivatives of the new `v`.

use crate::bench::isnr;
use crate::error::{GfdError, Result};
use crate::guided::{guided_filter, smooth_gradients, GfParams};
use crate::image::{Image, WindowSpec};
use crate::regparam::{choose_lambda_on, estimate_sigma, rho_terms, NoiseEstimate};
use crate::scalar::Real;
use crate::spectral::{Deconvolver, Lambda, Psf};

pub const DEFAULT_ITERATIONS: usize = 30;
pub const DEFAULT_REL_TOL: f64 = 1e-3;
pub const DEFAULT_MAX_BISECT: usize = 60;
pub const DEFAULT_GF_WINDOW: usize = 5;
/// Default `eps` is `(EPS_NOISE_FACTOR·σ)²`.
pub const EPS_NOISE_FACTOR: f64 = 2.0;
/// Lower bound on the noise-derived `eps`, so noiseless inputs still give a valid filter.
pub const EPS_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SigmaMode<T = f64> {
    /// Wavelet median estimate from the observation.
    Estimate,
    /// Ground-truth noise standard deviation.
    Known(T),
}

/// How ρ is obtained each iteration. Only the benchmark harness forces it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RhoPolicy<T = f64> {
    Adaptive,
    Fixed(T),
}

/// Guided-filter settings before the noise level is known.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterSettings<T = f64> {
    pub window: WindowSpec,
    /// `None` selects `max((2σ)², EPS_FLOOR)`.
    pub eps: Option<T>,
}

impl<T: Real> Default for FilterSettings<T> {
    fn default() -> Self {
        Self {
            window: WindowSpec::new(DEFAULT_GF_WINDOW).expect("odd default window"),
            eps: None,
        }
    }
}

impl<T: Real> FilterSettings<T> {
    pub fn resolve(&self, sigma: T) -> Result<GfParams<T>> {
        let eps = match self.eps {
            Some(e) => e,
            None => {
                let s = T::lit(EPS_NOISE_FACTOR) * sigma;
                (s * s).max(T::lit(EPS_FLOOR))
            }
        };
        GfParams::new(self.window, eps)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GfdConfig<T: Real = f64> {
    pub iterations: usize,
    pub gf_main: FilterSettings<T>,
    /// `None` reuses `gf_main` for the gradient smoothing.
    pub gf_grad: Option<FilterSettings<T>>,
    pub tau: T,
    pub rel_tol: T,
    pub max_bisect: usize,
    pub sigma_mode: SigmaMode<T>,
    pub rho_policy: RhoPolicy<T>,
    /// Clean image; when set every iteration records its ISNR.
    pub reference: Option<Image<T>>,
}

impl<T: Real> Default for GfdConfig<T> {
    fn default() -> Self {
        Self {
            iterations: DEFAULT_ITERATIONS,
            gf_main: FilterSettings::default(),
            gf_grad: None,
            tau: T::lit(crate::regparam::DEFAULT_TAU),
            rel_tol: T::lit(DEFAULT_REL_TOL),
            max_bisect: DEFAULT_MAX_BISECT,
            sigma_mode: SigmaMode::Estimate,
            rho_policy: RhoPolicy::Adaptive,
            reference: None,
        }
    }
}

impl<T: Real> GfdConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(GfdError::InvalidParameter("iterations must be at least 1".into()));
        }
        if !(self.rel_tol > T::zero() && self.rel_tol <= T::lit(0.1)) {
            return Err(GfdError::InvalidParameter(format!(
                "rel_tol must lie in (0, 0.1], got {}",
                self.rel_tol
            )));
        }
        if self.max_bisect == 0 {
            return Err(GfdError::InvalidParameter("max_bisect must be at least 1".into()));
        }
        if !self.tau.is_finite() {
            return Err(GfdError::InvalidParameter("tau must be finite".into()));
        }
        if let SigmaMode::Known(s) = self.sigma_mode {
            NoiseEstimate::from_sigma(s)?;
        }
        if let RhoPolicy::Fixed(r) = self.rho_policy {
            if !(r > T::zero() && r <= T::one()) {
                return Err(GfdError::InvalidParameter(format!("forced rho must lie in (0, 1], got {r}")));
            }
        }
        for settings in std::iter::once(&self.gf_main).chain(self.gf_grad.as_ref()) {
            if let Some(e) = settings.eps {
                GfParams::new(settings.window, e)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord<T = f64> {
    /// 1-based iteration index.
    pub k: usize,
    pub lambda: Lambda<T>,
    pub rho: T,
    /// Discrepancy bound `ρ·N·σ²` used for this iteration.
    pub bound: T,
    /// Discrepancy reached at `lambda`.
    pub residual: T,
    pub bisect_steps: usize,
    /// Set when bracketing failed and λ fell back to infinity.
    pub fallback: bool,
    pub isnr: Option<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace<T = f64> {
    pub sigma: T,
    pub gf_main: GfParams<T>,
    pub gf_grad: GfParams<T>,
    pub records: Vec<IterationRecord<T>>,
}

impl<T: Real> IterationTrace<T> {
    pub fn final_isnr(&self) -> Option<T> {
        self.records.last().and_then(|r| r.isnr)
    }
}

/// Restores `g` blurred by `psf`. Returns the final estimate and a per-iteration trace.
pub fn run_gfd<T: Real>(g: &Image<T>, psf: &Psf<T>, cfg: &GfdConfig<T>) -> Result<(Image<T>, IterationTrace<T>)> {
    cfg.validate()?;
    if let Some(r) = &cfg.reference {
        g.ensure_same_dims(r)?;
    }
    let noise = match cfg.sigma_mode {
        SigmaMode::Estimate => estimate_sigma(g)?,
        SigmaMode::Known(s) => NoiseEstimate::from_sigma(s)?,
    };
    let gf_main = cfg.gf_main.resolve(noise.sigma())?;
    let gf_grad = cfg.gf_grad.unwrap_or(cfg.gf_main).resolve(noise.sigma())?;

    let deconv = Deconvolver::new(g, psf)?;
    let (h, w) = g.dims();
    let pixels = T::from_usize_lossy(g.pixel_count());
    // Keeps the bound positive for a noiseless observation.
    let bound_floor = T::epsilon() * g.sq_norm();

    let mut v = Image::zeros(h, w)?;
    let mut vx = Image::zeros(h, w)?;
    let mut vy = Image::zeros(h, w)?;
    let mut records = Vec::with_capacity(cfg.iterations);

    for k in 1..=cfg.iterations {
        let rho = match cfg.rho_policy {
            RhoPolicy::Adaptive => T::lit(rho_terms(g, &v, &noise, cfg.tau)?.rho),
            RhoPolicy::Fixed(r) => r,
        };
        let bound = (rho * pixels * noise.variance()).max(bound_floor);

        let curve = deconv.discrepancy_curve(&v)?;
        let (lambda, residual, bisect_steps, fallback) =
            match choose_lambda_on(&curve, bound, cfg.rel_tol, cfg.max_bisect) {
                Ok(choice) => (choice.value, choice.residual, choice.iterations, false),
                Err(GfdError::BracketFailure { .. }) => (Lambda::Infinite, curve.asymptote(), 0, true),
                Err(e) => return Err(e),
            };

        let (u_guide, u_input) = match lambda {
            Lambda::Infinite => (v.clone(), v.clone()),
            Lambda::Finite(_) => (
                deconv.solve_guidance(&vx, &vy, &v, lambda)?,
                deconv.solve_input(&v, lambda)?,
            ),
        };
        v = guided_filter(&u_guide, &u_input, &gf_main)?;
        (vx, vy) = smooth_gradients(&v, &gf_grad)?;

        let isnr = match &cfg.reference {
            Some(clean) => Some(isnr(clean, g, &v)?),
            None => None,
        };
        records.push(IterationRecord {
            k,
            lambda,
            rho,
            bound,
            residual,
            bisect_steps,
            fallback,
            isnr,
        });
    }

    Ok((
        v,
        IterationTrace {
            sigma: noise.sigma(),
            gf_main,
            gf_grad,
            records,
        },
    ))
}
