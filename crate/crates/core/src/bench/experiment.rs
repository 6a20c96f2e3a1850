use std::time::Instant;

use rayon::prelude::*;

use crate::error::{GfdError, Result};
use crate::image::Image;
use crate::pipeline::{run_gfd, GfdConfig, RhoPolicy, SigmaMode};
use crate::spectral::{circ_convolve, Psf};

use super::noise::{degrade, degrade_with};
use super::reference::{Method, ReferenceTable};
use super::scenario::Scenario;
use super::{bsnr, isnr};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub image: String,
    pub bsnr_db: f64,
    /// Forced ρ, or the last iteration's ρ for the adaptive run.
    pub rho: f64,
    pub adaptive: bool,
    pub isnr_db: f64,
}

/// Noise standard deviation that puts an observation of `blurred` at `bsnr_db`.
pub fn sigma_for_bsnr(blurred: &Image<f64>, bsnr_db: f64) -> Result<f64> {
    let energy = blurred.centered_sq_norm();
    if energy == 0.0 {
        return Err(GfdError::DegenerateInput("blurred image is constant".into()));
    }
    let var = energy / (blurred.pixel_count() as f64 * 10f64.powf(bsnr_db / 10.0));
    Ok(var.sqrt())
}

/// Parses `start:step:end` into an inclusive grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || GfdError::InvalidParameter(format!("grid {text:?} must be start:step:end"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [start, step, end] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || !(end >= start) || !start.is_finite() || !end.is_finite() {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    // Rounding keeps 0.1 + 3·0.05 printing as 0.25.
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// ISNR against ρ at one noise level: one run per forced ρ plus one adaptive run.
///
/// The noise level is set from `bsnr_db` and the pipeline is given the true σ
/// so that only ρ varies between runs.
pub fn rho_sweep(
    image: &str,
    clean: &Image<f64>,
    psf: &Psf<f64>,
    bsnr_db: f64,
    grid: &[f64],
    cfg: &GfdConfig<f64>,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if let Some(bad) = grid.iter().find(|&&r| !(r > 0.0 && r <= 1.0)) {
        return Err(GfdError::InvalidParameter(format!("grid value {bad} outside (0, 1]")));
    }
    let sigma = sigma_for_bsnr(&circ_convolve(clean, psf)?, bsnr_db)?;
    let pair = degrade_with(clean, psf, sigma, seed)?;

    let runs: Vec<Option<f64>> = grid.iter().copied().map(Some).chain(std::iter::once(None)).collect();
    runs.par_iter()
        .map(|forced| {
            let cfg = GfdConfig {
                sigma_mode: SigmaMode::Known(sigma),
                rho_policy: forced.map_or(RhoPolicy::Adaptive, RhoPolicy::Fixed),
                reference: None,
                ..cfg.clone()
            };
            let (restored, trace) = run_gfd(&pair.observed, psf, &cfg)?;
            let rho = match forced {
                Some(r) => *r,
                None => trace.records.last().map(|r| r.rho).unwrap_or(f64::NAN),
            };
            Ok(SweepRow {
                image: image.to_string(),
                bsnr_db,
                rho,
                adaptive: forced.is_none(),
                isnr_db: isnr(clean, &pair.observed, &restored)?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioRow {
    pub image: String,
    pub scenario: u8,
    pub sigma_sq: f64,
    pub bsnr_db: f64,
    pub isnr_db: f64,
    pub ref_gfd_db: Option<f64>,
    /// Wall time of the pipeline divided by its iteration count.
    pub secs_per_iter: f64,
}

impl ScenarioRow {
    pub fn delta_db(&self) -> Option<f64> {
        self.ref_gfd_db.map(|r| self.isnr_db - r)
    }
}

/// Degrades and restores every (image, scenario) cell.
///
/// Cells run in parallel; rows come back sorted by image name, then scenario.
/// With `known_sigma` the pipeline receives the scenario's true σ instead of
/// estimating it.
pub fn run_scenarios(
    images: &[(String, Image<f64>)],
    scenarios: &[Scenario],
    cfg: &GfdConfig<f64>,
    known_sigma: bool,
    seed: u64,
) -> Result<Vec<ScenarioRow>> {
    let reference = ReferenceTable::published();
    let mut cells: Vec<(&String, &Image<f64>, &Scenario)> = images
        .iter()
        .flat_map(|(name, img)| scenarios.iter().map(move |s| (name, img, s)))
        .collect();
    cells.sort_by(|a, b| a.0.cmp(b.0).then(a.2.id.cmp(&b.2.id)));

    cells
        .par_iter()
        .map(|&(name, clean, scn)| {
            let pair = degrade(clean, scn, seed)?;
            let cfg = GfdConfig {
                sigma_mode: if known_sigma {
                    SigmaMode::Known(scn.sigma())
                } else {
                    cfg.sigma_mode
                },
                reference: None,
                ..cfg.clone()
            };
            let start = Instant::now();
            let (restored, _) = run_gfd(&pair.observed, &pair.psf, &cfg)?;
            let secs = start.elapsed().as_secs_f64();
            Ok(ScenarioRow {
                image: name.clone(),
                scenario: scn.id,
                sigma_sq: scn.sigma_sq,
                bsnr_db: bsnr(&pair.observed, scn.sigma_sq)?,
                isnr_db: isnr(clean, &pair.observed, &restored)?,
                ref_gfd_db: reference.isnr(name, scn.id, Method::Gfd),
                secs_per_iter: secs / cfg.iterations as f64,
            })
        })
        .collect()
}
