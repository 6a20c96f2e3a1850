//! Independent reference implementations used by the integration tests.
//!
//! Everything here works directly in the spatial domain with plain loops,
//! sharing no code with the library beyond the `Image` container.

#![allow(dead_code)]

use gfd_core::{Image, Psf};

/// SplitMix64.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn image(&mut self, h: usize, w: usize, lo: f64, hi: f64) -> Image<f64> {
        Image::from_fn(h, w, |_, _| self.range(lo, hi)).unwrap()
    }

    /// Positive taps, odd dimensions up to `max`.
    pub fn psf(&mut self, max: usize) -> Psf<f64> {
        let kh = 2 * (self.next_u64() as usize % (max / 2 + 1)) + 1;
        let kw = 2 * (self.next_u64() as usize % (max / 2 + 1)) + 1;
        let taps = (0..kh * kw).map(|_| self.range(0.05, 1.0)).collect();
        Psf::new(kh, kw, taps).unwrap()
    }
}

/// Half-sample symmetric index reflection: -1 → 0, n → n-1.
pub fn reflect(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - i - 1;
        } else {
            return i as usize;
        }
    }
}

fn window(img: &Image<f64>, r: usize, c: usize, rad: usize) -> Vec<f64> {
    let (h, w) = img.dims();
    let mut out = Vec::new();
    for dr in -(rad as isize)..=rad as isize {
        for dc in -(rad as isize)..=rad as isize {
            out.push(img.get(reflect(r as isize + dr, h), reflect(c as isize + dc, w)));
        }
    }
    out
}

/// Guided filter by explicit per-window ridge regression.
///
/// For each window the 2×2 normal equations of
/// `min Σ (a·I + b − p)² + ε·a²·n` are solved by Cramer's rule,
/// then each pixel averages the coefficients of the windows that cover it.
pub fn brute_guided_filter(guide: &Image<f64>, input: &Image<f64>, w: usize, eps: f64) -> Image<f64> {
    let (h, wd) = guide.dims();
    let rad = w / 2;
    let mut a = vec![0.0; h * wd];
    let mut b = vec![0.0; h * wd];
    for r in 0..h {
        for c in 0..wd {
            let gi = window(guide, r, c, rad);
            let pi = window(input, r, c, rad);
            let n = gi.len() as f64;
            let sii: f64 = gi.iter().map(|x| x * x).sum();
            let si: f64 = gi.iter().sum();
            let sp: f64 = pi.iter().sum();
            let sip: f64 = gi.iter().zip(&pi).map(|(x, y)| x * y).sum();
            // [sii + nε, si; si, n] [a; b] = [sip; sp]
            let m00 = sii + n * eps;
            let det = m00 * n - si * si;
            a[r * wd + c] = (sip * n - si * sp) / det;
            b[r * wd + c] = (m00 * sp - si * sip) / det;
        }
    }
    let a = Image::new(h, wd, a).unwrap();
    let b = Image::new(h, wd, b).unwrap();
    Image::from_fn(h, wd, |r, c| {
        let n = (w * w) as f64;
        let ab = window(&a, r, c, rad).iter().sum::<f64>() / n;
        let bb = window(&b, r, c, rad).iter().sum::<f64>() / n;
        ab * guide.get(r, c) + bb
    })
    .unwrap()
}

/// `(psf ∗ u)(x) = Σ_k psf(k) u(x − k)` with offsets relative to the kernel centre, wrapping.
pub fn conv(u: &Image<f64>, psf: &Psf<f64>) -> Image<f64> {
    let (h, w) = u.dims();
    let (ch, cw) = (psf.kheight() / 2, psf.kwidth() / 2);
    Image::from_fn(h, w, |r, c| {
        let mut acc = 0.0;
        for i in 0..psf.kheight() {
            for j in 0..psf.kwidth() {
                let rr = (r as isize - (i as isize - ch as isize)).rem_euclid(h as isize) as usize;
                let cc = (c as isize - (j as isize - cw as isize)).rem_euclid(w as isize) as usize;
                acc += psf.tap(i, j) * u.get(rr, cc);
            }
        }
        acc
    })
    .unwrap()
}

/// Adjoint of `conv`: `Σ_k psf(k) u(x + k)`.
pub fn conv_adj(u: &Image<f64>, psf: &Psf<f64>) -> Image<f64> {
    let (h, w) = u.dims();
    let (ch, cw) = (psf.kheight() / 2, psf.kwidth() / 2);
    Image::from_fn(h, w, |r, c| {
        let mut acc = 0.0;
        for i in 0..psf.kheight() {
            for j in 0..psf.kwidth() {
                let rr = (r as isize + (i as isize - ch as isize)).rem_euclid(h as isize) as usize;
                let cc = (c as isize + (j as isize - cw as isize)).rem_euclid(w as isize) as usize;
                acc += psf.tap(i, j) * u.get(rr, cc);
            }
        }
        acc
    })
    .unwrap()
}

pub fn dx(u: &Image<f64>) -> Image<f64> {
    let (h, w) = u.dims();
    Image::from_fn(h, w, |r, c| u.get(r, (c + 1) % w) - u.get(r, c)).unwrap()
}

pub fn dy(u: &Image<f64>) -> Image<f64> {
    let (h, w) = u.dims();
    Image::from_fn(h, w, |r, c| u.get((r + 1) % h, c) - u.get(r, c)).unwrap()
}

/// Adjoint of `dx`: `u(i, j−1) − u(i, j)`.
pub fn dx_adj(u: &Image<f64>) -> Image<f64> {
    let (h, w) = u.dims();
    Image::from_fn(h, w, |r, c| u.get(r, (c + w - 1) % w) - u.get(r, c)).unwrap()
}

pub fn dy_adj(u: &Image<f64>) -> Image<f64> {
    let (h, w) = u.dims();
    Image::from_fn(h, w, |r, c| u.get((r + h - 1) % h, c) - u.get(r, c)).unwrap()
}

pub fn add(a: &Image<f64>, b: &Image<f64>) -> Image<f64> {
    a.zip_map(b, |x, y| x + y).unwrap()
}

pub fn scale(a: &Image<f64>, s: f64) -> Image<f64> {
    a.map(|x| x * s)
}

pub fn sq_norm(a: &Image<f64>) -> f64 {
    a.data().iter().map(|x| x * x).sum()
}

pub fn max_abs(a: &Image<f64>) -> f64 {
    a.data().iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Largest DFT magnitude by direct summation.
pub fn dft_max_abs(a: &Image<f64>) -> f64 {
    let (h, w) = a.dims();
    let mut best = 0.0f64;
    for ku in 0..h {
        for kv in 0..w {
            let (mut re, mut im) = (0.0, 0.0);
            for r in 0..h {
                for c in 0..w {
                    let ph = -2.0 * std::f64::consts::PI * ((ku * r) as f64 / h as f64 + (kv * c) as f64 / w as f64);
                    re += a.get(r, c) * ph.cos();
                    im += a.get(r, c) * ph.sin();
                }
            }
            best = best.max(re.hypot(im));
        }
    }
    best
}

/// ρ schedule evaluated with two-pass sums, written from the formulas alone.
pub fn rho_oracle(g: &Image<f64>, v: &Image<f64>, sigma: f64, tau: f64) -> (f64, f64) {
    let n = g.data().len() as f64;
    let mg = g.data().iter().sum::<f64>() / n;
    let mv = v.data().iter().sum::<f64>() / n;
    let gc: f64 = g.data().iter().map(|x| (x - mg).powi(2)).sum();
    let vc: f64 = v.data().iter().map(|x| (x - mv).powi(2)).sum();
    let g2: f64 = g.data().iter().map(|x| x * x).sum();
    let noise = n * sigma * sigma;
    let s = (1.0 - (gc - noise) / g2).clamp(0.05, 1.0);
    let thresh = if vc == 0.0 || noise == 0.0 {
        f64::INFINITY
    } else {
        ((gc - noise).max(0.0) / (noise * vc)).sqrt()
    };
    let rho = if thresh > tau { s * s } else { s };
    (s, rho)
}

/// Smooth background, flat patches, a disc, a grating and a checkerboard.
pub fn synthetic_scene(n: usize) -> Image<f64> {
    let nf = n as f64;
    Image::from_fn(n, n, |r, c| {
        let (y, x) = (r as f64 / nf, c as f64 / nf);
        let mut v = 70.0 + 60.0 * x + 30.0 * (3.0 * y).sin();
        if (0.15..0.45).contains(&x) && (0.1..0.35).contains(&y) {
            v = 200.0;
        }
        let (ox, oy) = (x - 0.68, y - 0.3);
        if ox * ox + oy * oy < 0.02 {
            v = 30.0 + 40.0 * (ox * 60.0).cos();
        }
        if (0.55..0.9).contains(&y) && (0.1..0.5).contains(&x) {
            v += 45.0 * (2.0 * std::f64::consts::PI * 12.0 * (x + 0.5 * y)).sin();
        }
        if (0.6..0.85).contains(&x) && (0.6..0.9).contains(&y) {
            v = if ((x * 40.0) as i64 + (y * 40.0) as i64) % 2 == 0 { 230.0 } else { 20.0 };
        }
        v.clamp(0.0, 255.0)
    })
    .unwrap()
}
