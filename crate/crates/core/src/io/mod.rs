//! File formats: PGM rasters and the plain-text run configuration.

mod config;
mod pgm;

use std::path::Path;

pub use config::{RunConfig, CONFIG_KEYS};
pub use pgm::{decode_pgm, encode_pgm, quantize, quantize_sample, PgmEncoding};

use crate::error::Result;
use crate::image::Image;
use crate::scalar::Real;

pub fn read_image<T: Real>(path: impl AsRef<Path>) -> Result<Image<T>> {
    decode_pgm(&std::fs::read(path)?)
}

/// Writes an 8-bit binary PGM.
pub fn write_image<T: Real>(path: impl AsRef<Path>, img: &Image<T>) -> Result<()> {
    std::fs::write(path, encode_pgm(img, PgmEncoding::Binary, 255)?)?;
    Ok(())
}
