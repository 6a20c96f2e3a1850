use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{GfdError, Result};
use crate::image::Image;
use crate::scalar::Real;
use crate::spectral::{circ_convolve, Psf};

use super::scenario::{make_psf, Scenario};

/// Identifies the noise generator in output metadata.
pub const PRNG_ID: &str = "chacha20/seed_from_u64 (rand_chacha 0.3) + box-muller";

/// Seeded standard normal stream: ChaCha20 feeding a Box–Muller transform.
///
/// Uses only the 64-bit output of the generator and `f64` arithmetic, so a
/// given seed yields the same samples on every platform.
pub struct GaussianNoise {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianNoise {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform in `(0, 1]`.
    fn uniform_open0(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform_open0();
        let u2 = self.uniform_open0();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// A clean image together with its simulated observation.
#[derive(Clone, Debug, PartialEq)]
pub struct DegradedPair<T: Real = f64> {
    pub clean: Image<T>,
    pub observed: Image<T>,
    pub psf: Psf<T>,
    pub sigma: f64,
    pub seed: u64,
}

/// `g = h ∗ u + σ·z` under the scenario's kernel and noise variance.
pub fn degrade<T: Real>(clean: &Image<T>, scn: &Scenario, seed: u64) -> Result<DegradedPair<T>> {
    degrade_with(clean, &make_psf(scn)?, scn.sigma(), seed)
}

pub fn degrade_with<T: Real>(clean: &Image<T>, psf: &Psf<T>, sigma: f64, seed: u64) -> Result<DegradedPair<T>> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(GfdError::InvalidParameter(format!("noise sigma must be non-negative, got {sigma}")));
    }
    let blurred = circ_convolve(clean, psf)?;
    let mut noise = GaussianNoise::new(seed);
    let observed = blurred.map(|v| T::lit(v.as_f64() + sigma * noise.next_standard()));
    Ok(DegradedPair {
        clean: clean.clone(),
        observed,
        psf: psf.clone(),
        sigma,
        seed,
    })
}
