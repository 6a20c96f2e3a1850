use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{GfdError, Result};
use crate::scalar::Real;
use crate::spectral::Psf;

/// Blur kernel recipe, also the PSF mini-language of the command line:
/// `rational:7`, `boxcar:9`, `binomial5`, `gaussian:25:1.6`, `file:<path>`.
#[derive(Clone, Debug, PartialEq)]
pub enum PsfSpec {
    /// `1/(1+i²+j²)` for `i, j = -radius..=radius`.
    Rational { radius: usize },
    /// `size×size` uniform kernel.
    Boxcar { size: usize },
    /// `[1 4 6 4 1]ᵀ[1 4 6 4 1]/256`.
    Binomial5,
    /// `size×size` sampled Gaussian `exp(-(i²+j²)/(2·std²))`.
    Gaussian { size: usize, std: f64 },
    /// Kernel stored as a PGM image.
    File(PathBuf),
}

impl PsfSpec {
    pub fn build<T: Real>(&self) -> Result<Psf<T>> {
        match self {
            PsfSpec::Rational { radius } => {
                let r = *radius as isize;
                let side = 2 * radius + 1;
                let taps = (-r..=r)
                    .flat_map(|i| (-r..=r).map(move |j| T::lit(1.0 / (1 + i * i + j * j) as f64)))
                    .collect();
                Psf::new(side, side, taps)
            }
            PsfSpec::Boxcar { size } => Psf::new(*size, *size, vec![T::one(); size * size]),
            PsfSpec::Binomial5 => {
                let row = [1.0, 4.0, 6.0, 4.0, 1.0];
                let taps = row
                    .iter()
                    .flat_map(|a| row.iter().map(move |b| T::lit(a * b / 256.0)))
                    .collect();
                Psf::new(5, 5, taps)
            }
            PsfSpec::Gaussian { size, std } => {
                if !(*std > 0.0) || !std.is_finite() {
                    return Err(GfdError::InvalidKernel(format!("gaussian std must be positive, got {std}")));
                }
                let r = (*size / 2) as isize;
                let two_var = 2.0 * std * std;
                let taps = (-r..=r)
                    .flat_map(|i| (-r..=r).map(move |j| T::lit((-((i * i + j * j) as f64) / two_var).exp())))
                    .collect();
                Psf::new(*size, *size, taps)
            }
            PsfSpec::File(path) => {
                let img = crate::io::read_image::<T>(path)?;
                Psf::new(img.height(), img.width(), img.into_data())
            }
        }
    }

    /// Human-readable formula of the kernel.
    pub fn describe(&self) -> String {
        match self {
            PsfSpec::Rational { radius } => format!("1/(1+i^2+j^2), i,j=-{radius}..{radius}"),
            PsfSpec::Boxcar { size } => format!("{size}x{size} uniform (boxcar)"),
            PsfSpec::Binomial5 => "[1 4 6 4 1]ᵀ[1 4 6 4 1]/256".to_string(),
            PsfSpec::Gaussian { size, std } => format!("{size}x{size} Gaussian, std={std}"),
            PsfSpec::File(p) => format!("file {}", p.display()),
        }
    }
}

impl fmt::Display for PsfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsfSpec::Rational { radius } => write!(f, "rational:{radius}"),
            PsfSpec::Boxcar { size } => write!(f, "boxcar:{size}"),
            PsfSpec::Binomial5 => f.write_str("binomial5"),
            PsfSpec::Gaussian { size, std } => write!(f, "gaussian:{size}:{std}"),
            PsfSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for PsfSpec {
    type Err = GfdError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| GfdError::InvalidParameter(format!("psf spec {s:?}: {msg}"));
        let odd = |v: &str| -> Result<usize> {
            let n: usize = v.parse().map_err(|_| bad("expected an integer size"))?;
            if n == 0 || n % 2 == 0 {
                return Err(bad("size must be odd and positive"));
            }
            Ok(n)
        };
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(PsfSpec::File(PathBuf::from(path)));
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["binomial5"] => Ok(PsfSpec::Binomial5),
            ["boxcar", n] => Ok(PsfSpec::Boxcar { size: odd(n)? }),
            ["rational", r] => Ok(PsfSpec::Rational {
                radius: r.parse().map_err(|_| bad("expected an integer radius"))?,
            }),
            ["gaussian", n, std] => {
                let std: f64 = std.parse().map_err(|_| bad("expected a numeric std"))?;
                if !(std > 0.0) || !std.is_finite() {
                    return Err(bad("std must be positive"));
                }
                Ok(PsfSpec::Gaussian { size: odd(n)?, std })
            }
            _ => Err(bad("unknown kernel")),
        }
    }
}

/// One of the five benchmark degradations.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub id: u8,
    pub psf: PsfSpec,
    /// Noise variance for intensities in `[0, 255]`.
    pub sigma_sq: f64,
}

/// Stored value for the "≈ 0.3" noise variance of scenario 3.
pub const SCENARIO3_SIGMA_SQ: f64 = 0.308;

impl Scenario {
    pub fn builtin(id: u8) -> Result<Self> {
        let (psf, sigma_sq) = match id {
            1 => (PsfSpec::Rational { radius: 7 }, 2.0),
            2 => (PsfSpec::Rational { radius: 7 }, 8.0),
            3 => (PsfSpec::Boxcar { size: 9 }, SCENARIO3_SIGMA_SQ),
            4 => (PsfSpec::Binomial5, 49.0),
            5 => (PsfSpec::Gaussian { size: 25, std: 1.6 }, 4.0),
            _ => {
                return Err(GfdError::InvalidParameter(format!("scenario must be 1..5, got {id}")));
            }
        };
        Ok(Self { id, psf, sigma_sq })
    }

    pub fn all() -> Vec<Self> {
        (1..=5).map(|i| Self::builtin(i).expect("builtin scenario")).collect()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma_sq.sqrt()
    }
}

/// Kernel of a scenario, normalized to unit sum.
pub fn make_psf<T: Real>(scn: &Scenario) -> Result<Psf<T>> {
    scn.psf.build()
}
