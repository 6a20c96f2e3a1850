//! Plain-text run configuration.
//!
//! One `key = value` pair per line. `#` starts a comment, blank lines are
//! ignored. Unknown or repeated keys and malformed values are errors that
//! carry the 1-based line number.

use std::collections::HashSet;
use std::path::PathBuf;
use std::str::FromStr;

use crate::bench::PsfSpec;
use crate::error::{GfdError, Result};
use crate::image::WindowSpec;
use crate::pipeline::{FilterSettings, GfdConfig, RhoPolicy, SigmaMode};

pub const CONFIG_KEYS: &[&str] = &[
    "iterations",
    "tau",
    "rel_tol",
    "max_bisect",
    "gf_w",
    "gf_eps",
    "gf_grad_w",
    "gf_grad_eps",
    "sigma",
    "rho",
    "seed",
    "scenario",
    "input",
    "output",
    "psf",
    "trace",
    "reference",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    /// Pipeline settings. `reference` is never filled from text; see the `reference` path.
    pub gfd: GfdConfig<f64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub psf: Option<PsfSpec>,
    pub trace: Option<PathBuf>,
    pub reference: Option<PathBuf>,
    pub seed: u64,
    pub scenario: Option<u8>,
}

fn value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T> {
    raw.parse().map_err(|_| GfdError::Config {
        line,
        message: format!("invalid value `{raw}` for `{key}`"),
    })
}

fn window(line: usize, key: &str, raw: &str) -> Result<WindowSpec> {
    WindowSpec::new(value(line, key, raw)?).map_err(|e| GfdError::Config {
        line,
        message: format!("`{key}`: {e}"),
    })
}

/// `auto` or a number.
fn optional_f64(line: usize, key: &str, raw: &str) -> Result<Option<f64>> {
    if raw.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        value(line, key, raw).map(Some)
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = HashSet::new();
        let mut grad_w = None;
        let mut grad_eps = None;
        let mut last_line = 0;

        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, raw) = content.split_once('=').ok_or_else(|| GfdError::Config {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            })?;
            let key = key.trim();
            let raw = raw.trim();
            if !CONFIG_KEYS.contains(&key) {
                return Err(GfdError::Config {
                    line,
                    message: format!("unknown key `{key}`"),
                });
            }
            if !seen.insert(key.to_string()) {
                return Err(GfdError::Config {
                    line,
                    message: format!("duplicate key `{key}`"),
                });
            }
            if raw.is_empty() {
                return Err(GfdError::Config {
                    line,
                    message: format!("missing value for `{key}`"),
                });
            }
            let g = &mut cfg.gfd;
            match key {
                "iterations" => g.iterations = value(line, key, raw)?,
                "tau" => g.tau = value(line, key, raw)?,
                "rel_tol" => g.rel_tol = value(line, key, raw)?,
                "max_bisect" => g.max_bisect = value(line, key, raw)?,
                "gf_w" => g.gf_main.window = window(line, key, raw)?,
                "gf_eps" => g.gf_main.eps = optional_f64(line, key, raw)?,
                "gf_grad_w" => grad_w = Some(window(line, key, raw)?),
                "gf_grad_eps" => grad_eps = Some(optional_f64(line, key, raw)?),
                "sigma" => {
                    g.sigma_mode = match raw {
                        "estimate" => SigmaMode::Estimate,
                        _ => SigmaMode::Known(value(line, key, raw)?),
                    }
                }
                "rho" => {
                    g.rho_policy = match raw {
                        "adaptive" => RhoPolicy::Adaptive,
                        _ => RhoPolicy::Fixed(value(line, key, raw)?),
                    }
                }
                "seed" => cfg.seed = value(line, key, raw)?,
                "scenario" => {
                    let id: u8 = value(line, key, raw)?;
                    if !(1..=5).contains(&id) {
                        return Err(GfdError::Config {
                            line,
                            message: format!("scenario must be 1..=5, got {id}"),
                        });
                    }
                    cfg.scenario = Some(id);
                }
                "psf" => {
                    cfg.psf = Some(raw.parse().map_err(|e| GfdError::Config {
                        line,
                        message: format!("`psf`: {e}"),
                    })?)
                }
                "input" => cfg.input = Some(raw.into()),
                "output" => cfg.output = Some(raw.into()),
                "trace" => cfg.trace = Some(raw.into()),
                "reference" => cfg.reference = Some(raw.into()),
                _ => unreachable!("key list and match arms agree"),
            }
        }

        if grad_w.is_some() || grad_eps.is_some() {
            cfg.gfd.gf_grad = Some(FilterSettings {
                window: grad_w.unwrap_or(cfg.gfd.gf_main.window),
                eps: grad_eps.unwrap_or(cfg.gfd.gf_main.eps),
            });
        }
        cfg.gfd.validate().map_err(|e| GfdError::Config {
            line: last_line,
            message: e.to_string(),
        })?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}
