//! Netpbm graymap codec: P2 (ASCII) and P5 (binary, 8- or 16-bit).
//!
//! Samples map to `[0, 255]` reals as `v·255/maxval`. Writing clamps to
//! `[0, maxval]` after scaling and rounds half away from zero.

use crate::error::{GfdError, Result};
use crate::image::Image;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgmEncoding {
    /// P2
    Ascii,
    /// P5
    Binary,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    /// Next decimal token and its byte offset.
    fn number(&mut self, what: &str) -> Result<(u32, usize)> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            let message = if start >= self.bytes.len() {
                format!("unexpected end of file while reading {what}")
            } else {
                format!("expected {what}, found byte 0x{:02x}", self.bytes[start])
            };
            return Err(GfdError::Parse { offset: start, message });
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        let v = text.parse().map_err(|_| GfdError::Parse {
            offset: start,
            message: format!("{what} {text} out of range"),
        })?;
        Ok((v, start))
    }
}

/// Decodes a P2 or P5 graymap.
pub fn decode_pgm<T: Real>(bytes: &[u8]) -> Result<Image<T>> {
    if bytes.len() < 2 {
        return Err(GfdError::Parse {
            offset: 0,
            message: "file too short for a magic number".into(),
        });
    }
    let encoding = match &bytes[..2] {
        b"P2" => PgmEncoding::Ascii,
        b"P5" => PgmEncoding::Binary,
        [b'P', d] if d.is_ascii_digit() => {
            return Err(GfdError::UnsupportedFormat(format!(
                "netpbm P{} (only P2 and P5 graymaps are supported)",
                *d as char
            )));
        }
        _ => return Err(GfdError::UnsupportedFormat("not a netpbm file".into())),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let (width, _) = cur.number("width")?;
    let (height, dims_at) = cur.number("height")?;
    let (width, height) = (width as usize, height as usize);
    let (maxval, maxval_at) = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(GfdError::Parse {
            offset: dims_at,
            message: format!("zero-sized image {width}x{height}"),
        });
    }
    if maxval == 0 || maxval > 65535 {
        return Err(GfdError::Parse {
            offset: maxval_at,
            message: format!("maxval {maxval} outside 1..=65535"),
        });
    }
    let count = width * height;
    let scale = 255.0 / maxval as f64;
    let check = |v: u32, offset: usize| -> Result<T> {
        if v > maxval {
            return Err(GfdError::Parse {
                offset,
                message: format!("sample {v} exceeds maxval {maxval}"),
            });
        }
        Ok(T::lit(if maxval == 255 { v as f64 } else { v as f64 * scale }))
    };

    let mut data = Vec::with_capacity(count);
    match encoding {
        PgmEncoding::Ascii => {
            for _ in 0..count {
                let (v, at) = cur.number("sample")?;
                data.push(check(v, at)?);
            }
        }
        PgmEncoding::Binary => {
            // Exactly one whitespace byte separates the header from the raster.
            if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
                return Err(GfdError::Parse {
                    offset: cur.pos,
                    message: "missing whitespace after maxval".into(),
                });
            }
            let start = cur.pos + 1;
            let bps = if maxval > 255 { 2 } else { 1 };
            let expected = count * bps;
            let available = bytes.len() - start;
            if available < expected {
                return Err(GfdError::Parse {
                    offset: start,
                    message: format!("truncated raster: expected {expected} bytes, found {available}"),
                });
            }
            let raster = &bytes[start..start + expected];
            for i in 0..count {
                let v = if bps == 1 {
                    raster[i] as u32
                } else {
                    u16::from_be_bytes([raster[2 * i], raster[2 * i + 1]]) as u32
                };
                data.push(check(v, start + i * bps)?);
            }
        }
    }
    Image::new(height, width, data)
}

/// Integer sample written for intensity `v`.
pub fn quantize_sample(v: f64, maxval: u16) -> u16 {
    let m = maxval as f64;
    let scaled = if maxval == 255 { v } else { v * m / 255.0 };
    scaled.clamp(0.0, m).round() as u16
}

/// The image that reading back an encoding with `maxval` would produce.
pub fn quantize<T: Real>(img: &Image<T>, maxval: u16) -> Image<T> {
    let scale = 255.0 / maxval as f64;
    img.map(|v| {
        let q = quantize_sample(v.as_f64(), maxval) as f64;
        T::lit(if maxval == 255 { q } else { q * scale })
    })
}

pub fn encode_pgm<T: Real>(img: &Image<T>, encoding: PgmEncoding, maxval: u16) -> Result<Vec<u8>> {
    if maxval == 0 {
        return Err(GfdError::InvalidParameter("maxval must be positive".into()));
    }
    let (h, w) = img.dims();
    let magic = match encoding {
        PgmEncoding::Ascii => "P2",
        PgmEncoding::Binary => "P5",
    };
    let mut out = format!("{magic}\n{w} {h}\n{maxval}\n").into_bytes();
    let samples = img.data().iter().map(|v| quantize_sample(v.as_f64(), maxval));
    match encoding {
        PgmEncoding::Binary if maxval > 255 => {
            for s in samples {
                out.extend_from_slice(&s.to_be_bytes());
            }
        }
        PgmEncoding::Binary => out.extend(samples.map(|s| s as u8)),
        PgmEncoding::Ascii => {
            for (i, s) in samples.enumerate() {
                out.extend_from_slice(s.to_string().as_bytes());
                out.push(if (i + 1) % w == 0 { b'\n' } else { b' ' });
            }
        }
    }
    Ok(out)
}
