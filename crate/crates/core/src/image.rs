//! Dense grayscale raster, summary statistics and windowed box sums.

use crate::error::{GfdError, Result};
use crate::scalar::Real;

/// Row-major grayscale image. Every sample is finite.
///
/// Intensities are nominally in `[0, 255]` but intermediate images of the
/// pipeline are free to leave that range; clamping happens only when a file
/// is written.
#[derive(Clone, Debug, PartialEq)]
pub struct Image<T = f64> {
    height: usize,
    width: usize,
    data: Vec<T>,
}

impl<T: Real> Image<T> {
    pub fn new(height: usize, width: usize, data: Vec<T>) -> Result<Self> {
        check_dims(height, width)?;
        if data.len() != height * width {
            return Err(GfdError::DataLength {
                height,
                width,
                expected: height * width,
                actual: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(GfdError::NonFinite { index });
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn filled(height: usize, width: usize, value: T) -> Result<Self> {
        check_dims(height, width)?;
        if !value.is_finite() {
            return Err(GfdError::NonFinite { index: 0 });
        }
        Ok(Self::from_raw(height, width, vec![value; height * width]))
    }

    pub fn zeros(height: usize, width: usize) -> Result<Self> {
        Self::filled(height, width, T::zero())
    }

    /// Builds an image from `f(row, col)`.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        check_dims(height, width)?;
        let mut data = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Self::new(height, width, data)
    }

    /// Caller guarantees matching length, positive dimensions and finite data.
    pub(crate) fn from_raw(height: usize, width: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), height * width);
        Self {
            height,
            width,
            data,
        }
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    #[inline]
    pub fn pixel_count(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.width + col]
    }

    pub fn ensure_same_dims(&self, other: &Image<T>) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(GfdError::DimensionMismatch {
                expected: self.dims(),
                actual: other.dims(),
            });
        }
        Ok(())
    }

    /// Arithmetic mean of all pixels.
    pub fn mean(&self) -> T {
        let sum = self.data.iter().fold(0.0f64, |acc, v| acc + v.as_f64());
        T::lit(sum / self.data.len() as f64)
    }

    /// `Σ (x - mean)²`.
    pub fn centered_sq_norm(&self) -> T {
        let mean = self.mean().as_f64();
        let sum = self.data.iter().fold(0.0f64, |acc, v| {
            let d = v.as_f64() - mean;
            acc + d * d
        });
        T::lit(sum)
    }

    /// `Σ x²`.
    pub fn sq_norm(&self) -> T {
        T::lit(self.data.iter().fold(0.0f64, |acc, v| {
            let x = v.as_f64();
            acc + x * x
        }))
    }

    pub fn is_constant(&self) -> bool {
        let first = self.data[0];
        self.data.iter().all(|&v| v == first)
    }

    /// Applies `f` in row-major order.
    pub fn map(&self, mut f: impl FnMut(T) -> T) -> Image<T> {
        Image::from_raw(self.height, self.width, self.data.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Image<T>, f: impl Fn(T, T) -> T) -> Result<Image<T>> {
        self.ensure_same_dims(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Image::from_raw(self.height, self.width, data))
    }

    pub fn sub(&self, other: &Image<T>) -> Result<Image<T>> {
        self.zip_map(other, |a, b| a - b)
    }

    /// `‖self - other‖²`.
    pub fn sq_distance(&self, other: &Image<T>) -> Result<T> {
        self.ensure_same_dims(other)?;
        let sum = self.data.iter().zip(&other.data).fold(0.0f64, |acc, (a, b)| {
            let d = a.as_f64() - b.as_f64();
            acc + d * d
        });
        Ok(T::lit(sum))
    }

    pub fn max_abs_diff(&self, other: &Image<T>) -> Result<T> {
        self.ensure_same_dims(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs())))
    }

    /// Circular forward difference along columns: `u(i, j+1) - u(i, j)`.
    pub fn forward_diff_x(&self) -> Image<T> {
        let (h, w) = self.dims();
        let mut out = Vec::with_capacity(h * w);
        for r in 0..h {
            let row = &self.data[r * w..(r + 1) * w];
            for c in 0..w {
                out.push(row[(c + 1) % w] - row[c]);
            }
        }
        Image::from_raw(h, w, out)
    }

    /// Circular forward difference along rows: `u(i+1, j) - u(i, j)`.
    pub fn forward_diff_y(&self) -> Image<T> {
        let (h, w) = self.dims();
        let mut out = Vec::with_capacity(h * w);
        for r in 0..h {
            let next = (r + 1) % h;
            for c in 0..w {
                out.push(self.data[next * w + c] - self.data[r * w + c]);
            }
        }
        Image::from_raw(h, w, out)
    }

    /// Sum over the `w×w` window centred on every pixel.
    ///
    /// Windows reaching past the border read the image under half-sample
    /// symmetric extension (`x[-1] = x[0]`, `x[n] = x[n-1]`), so every window
    /// holds exactly `w²` samples. Runs in O(1) per pixel via two separable
    /// prefix-sum passes accumulated in `f64`.
    pub fn box_sum(&self, win: WindowSpec) -> Result<Image<T>> {
        win.check_fits(self.height, self.width)?;
        let (h, w) = self.dims();
        let r = win.radius();
        let side = win.size();
        if side == 1 {
            return Ok(self.clone());
        }

        let mut prefix = vec![0.0f64; h.max(w) + 2 * r + 1];

        // Horizontal pass.
        let mut horiz = vec![0.0f64; h * w];
        for row in 0..h {
            let src = &self.data[row * w..(row + 1) * w];
            fill_prefix(&mut prefix, w + 2 * r, |i| src[mirror(i as isize - r as isize, w)].as_f64());
            let dst = &mut horiz[row * w..(row + 1) * w];
            for (c, out) in dst.iter_mut().enumerate() {
                *out = prefix[c + side] - prefix[c];
            }
        }

        // Vertical pass.
        let mut out = vec![T::zero(); h * w];
        for col in 0..w {
            fill_prefix(&mut prefix, h + 2 * r, |i| horiz[mirror(i as isize - r as isize, h) * w + col]);
            for row in 0..h {
                out[row * w + col] = T::lit(prefix[row + side] - prefix[row]);
            }
        }
        Ok(Image::from_raw(h, w, out))
    }

    /// Window mean: `box_sum / w²`.
    pub fn box_mean(&self, win: WindowSpec) -> Result<Image<T>> {
        let area = T::from_usize_lossy(win.area());
        Ok(self.box_sum(win)?.map(|v| v / area))
    }
}

fn check_dims(height: usize, width: usize) -> Result<()> {
    if height == 0 || width == 0 {
        return Err(GfdError::EmptyImage { height, width });
    }
    Ok(())
}

fn fill_prefix(prefix: &mut [f64], len: usize, sample: impl Fn(usize) -> f64) {
    prefix[0] = 0.0;
    for i in 0..len {
        prefix[i + 1] = prefix[i] + sample(i);
    }
}

/// Half-sample symmetric index reflection, valid for `-n <= idx < 2n`.
#[inline]
pub(crate) fn mirror(idx: isize, n: usize) -> usize {
    let n = n as isize;
    let m = if idx < 0 {
        -idx - 1
    } else if idx >= n {
        2 * n - idx - 1
    } else {
        idx
    };
    debug_assert!((0..n).contains(&m));
    m as usize
}

/// Side length of a square window centred on a pixel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowSpec(usize);

impl WindowSpec {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size % 2 == 0 {
            return Err(GfdError::InvalidWindow(size));
        }
        Ok(Self(size))
    }

    pub fn from_radius(radius: usize) -> Self {
        Self(2 * radius + 1)
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0
    }

    #[inline]
    pub fn radius(self) -> usize {
        self.0 / 2
    }

    #[inline]
    pub fn area(self) -> usize {
        self.0 * self.0
    }

    pub fn check_fits(self, height: usize, width: usize) -> Result<()> {
        if self.0 > height.min(width) {
            return Err(GfdError::WindowTooLarge {
                w: self.0,
                height,
                width,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lcg_image(h: usize, w: usize, seed: u64) -> Image<f64> {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        Image::from_fn(h, w, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 * 255.0
        })
        .unwrap()
    }

    fn brute_box_sum(img: &Image<f64>, w: usize) -> Vec<f64> {
        let r = (w / 2) as isize;
        let (h, wd) = img.dims();
        let mut out = vec![0.0; h * wd];
        for i in 0..h {
            for j in 0..wd {
                let mut s = 0.0;
                for di in -r..=r {
                    for dj in -r..=r {
                        s += img.get(mirror(i as isize + di, h), mirror(j as isize + dj, wd));
                    }
                }
                out[i * wd + j] = s;
            }
        }
        out
    }

    #[test]
    fn mean_examples() {
        assert_eq!(Image::filled(3, 4, 5.0).unwrap().mean(), 5.0);
        let img = Image::new(2, 2, vec![0.0, 0.0, 0.0, 4.0]).unwrap();
        assert_eq!(img.mean(), 1.0);
    }

    #[test]
    fn mean_matches_naive_sum() {
        let img = lcg_image(16, 16, 3);
        let naive: f64 = img.data().iter().sum::<f64>() / 256.0;
        assert!((img.mean() - naive).abs() <= 1e-12 * naive.abs());
    }

    #[test]
    fn centered_sq_norm_examples() {
        assert_eq!(Image::filled(5, 5, 7.25).unwrap().centered_sq_norm(), 0.0);
        let img = Image::new(2, 2, vec![0.0, 0.0, 0.0, 4.0]).unwrap();
        assert_eq!(img.centered_sq_norm(), 12.0);
    }

    #[test]
    fn centered_sq_norm_matches_two_pass() {
        let img = lcg_image(32, 32, 9);
        let d = img.data();
        let m = d.iter().sum::<f64>() / d.len() as f64;
        let oracle: f64 = d.iter().map(|x| (x - m) * (x - m)).sum();
        assert!((img.centered_sq_norm() - oracle).abs() <= 1e-10 * oracle);
    }

    #[test]
    fn box_sum_constant_and_identity() {
        let c = Image::filled(9, 7, 3.0).unwrap();
        for w in [1, 3, 5, 7] {
            let s = c.box_sum(WindowSpec::new(w).unwrap()).unwrap();
            assert!(s.data().iter().all(|&v| v == 3.0 * (w * w) as f64));
        }
        let img = lcg_image(6, 5, 1);
        assert_eq!(img.box_sum(WindowSpec::new(1).unwrap()).unwrap(), img);
    }

    #[test]
    fn box_sum_matches_brute_force_exactly_on_integers() {
        let img = lcg_image(16, 16, 42).map(|v| v.floor());
        let fast = img.box_sum(WindowSpec::new(5).unwrap()).unwrap();
        assert_eq!(fast.data(), brute_box_sum(&img, 5).as_slice());
    }

    #[test]
    fn box_sum_matches_brute_force_on_reals() {
        let img = lcg_image(13, 17, 7);
        for w in [3, 5, 7, 13] {
            let fast = img.box_sum(WindowSpec::new(w).unwrap()).unwrap();
            for (a, b) in fast.data().iter().zip(brute_box_sum(&img, w)) {
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn box_sum_rejects_large_window() {
        let img = Image::<f64>::zeros(4, 8).unwrap();
        let err = img.box_sum(WindowSpec::new(5).unwrap()).unwrap_err();
        assert!(matches!(err, GfdError::WindowTooLarge { w: 5, .. }));
    }

    #[test]
    fn window_spec_validation() {
        assert!(WindowSpec::new(0).is_err());
        assert!(WindowSpec::new(4).is_err());
        assert_eq!(WindowSpec::new(7).unwrap().radius(), 3);
    }

    #[test]
    fn construction_rejects_bad_data() {
        assert!(matches!(
            Image::new(2, 2, vec![0.0; 3]),
            Err(GfdError::DataLength { .. })
        ));
        assert!(matches!(
            Image::new(1, 2, vec![0.0, f64::NAN]),
            Err(GfdError::NonFinite { index: 1 })
        ));
        assert!(Image::<f64>::zeros(0, 3).is_err());
    }

    #[test]
    fn forward_differences_wrap() {
        let img = Image::new(2, 3, vec![1.0, 2.0, 4.0, 0.0, 5.0, 5.0]).unwrap();
        assert_eq!(img.forward_diff_x().data(), &[1.0, 2.0, -3.0, 5.0, 0.0, -5.0]);
        assert_eq!(img.forward_diff_y().data(), &[-1.0, 3.0, 1.0, 1.0, -3.0, -1.0]);
    }

    proptest! {
        #[test]
        fn box_sum_is_linear(seed_a in any::<u64>(), seed_b in any::<u64>(),
                             alpha in -3.0f64..3.0, beta in -3.0f64..3.0, w in prop::sample::select(vec![1usize, 3, 5, 7])) {
            let a = lcg_image(11, 9, seed_a);
            let b = lcg_image(11, 9, seed_b);
            let win = WindowSpec::new(w).unwrap();
            let combo = a.zip_map(&b, |x, y| alpha * x + beta * y).unwrap();
            let lhs = combo.box_sum(win).unwrap();
            let sa = a.box_sum(win).unwrap();
            let sb = b.box_sum(win).unwrap();
            for i in 0..lhs.pixel_count() {
                let rhs = alpha * sa.data()[i] + beta * sb.data()[i];
                let scale = alpha.abs() * sa.data()[i].abs() + beta.abs() * sb.data()[i].abs();
                prop_assert!((lhs.data()[i] - rhs).abs() <= 1e-10 * scale.max(1.0));
            }
        }

        #[test]
        fn box_mean_of_constant_is_exact(c in -1000.0f64..1000.0, w in prop::sample::select(vec![1usize, 3, 5])) {
            let img = Image::filled(8, 8, c.round()).unwrap();
            let m = img.box_mean(WindowSpec::new(w).unwrap()).unwrap();
            prop_assert!(m.data().iter().all(|&v| v == c.round()));
        }
    }
}
