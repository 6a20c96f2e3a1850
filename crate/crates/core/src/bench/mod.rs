//! Benchmark harness: degradation scenarios, quality metrics, ρ sweeps and
//! comparison against published numbers.

mod csv;
mod experiment;
mod noise;
mod reference;
mod scenario;

pub use csv::{fmt_g6, write_rho_sweep_csv, write_scenarios_csv, write_trace_csv};
pub use experiment::{parse_grid, rho_sweep, run_scenarios, sigma_for_bsnr, ScenarioRow, SweepRow};
pub use noise::{degrade, degrade_with, DegradedPair, GaussianNoise, PRNG_ID};
pub use reference::{Method, ReferenceBsnr, ReferenceIsnr, ReferenceTable, CANONICAL_IMAGES};
pub use scenario::{make_psf, PsfSpec, Scenario, SCENARIO3_SIGMA_SQ};

use crate::error::{GfdError, Result};
use crate::image::Image;
use crate::scalar::Real;

/// Blurred signal-to-noise ratio in dB: `10·log10(‖g−μ(g)‖² / (N·σ²))`.
pub fn bsnr<T: Real>(g: &Image<T>, sigma_sq: f64) -> Result<f64> {
    if !(sigma_sq > 0.0) || !sigma_sq.is_finite() {
        return Err(GfdError::InvalidParameter(format!(
            "noise variance must be positive, got {sigma_sq}"
        )));
    }
    let energy = g.centered_sq_norm().as_f64();
    if energy == 0.0 {
        return Err(GfdError::DegenerateInput("observation is constant".into()));
    }
    Ok(10.0 * (energy / (g.pixel_count() as f64 * sigma_sq)).log10())
}

/// Improvement in SNR in dB: `10·log10(‖u−g‖² / ‖u−û‖²)`.
///
/// `+∞` when the restoration is exact.
pub fn isnr<T: Real>(clean: &Image<T>, observed: &Image<T>, restored: &Image<T>) -> Result<T> {
    let before = clean.sq_distance(observed)?.as_f64();
    let after = clean.sq_distance(restored)?.as_f64();
    if after == 0.0 {
        return Ok(T::infinity());
    }
    Ok(T::lit(10.0 * (before / after).log10()))
}
