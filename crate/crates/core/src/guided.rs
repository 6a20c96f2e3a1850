//! Edge-preserving guided filter.
//!
//! Inside every `w×w` window the output is modelled as an affine function of
//! the guide, `q = a·I + b`. The per-window coefficients are the ridge
//! regression of the input on the guide; each pixel then averages the
//! coefficients of all windows that cover it. All window statistics are box
//! means with mirrored borders, so the cost is linear in the pixel count.

use crate::error::{GfdError, Result};
use crate::image::{Image, WindowSpec};
use crate::scalar::Real;

/// Window size and ridge regularizer of the guided filter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GfParams<T = f64> {
    win: WindowSpec,
    eps: T,
}

impl<T: Real> GfParams<T> {
    /// `eps` must be strictly positive: a flat window would otherwise give `a = 0/0`.
    pub fn new(win: WindowSpec, eps: T) -> Result<Self> {
        if !(eps > T::zero()) || !eps.is_finite() {
            return Err(GfdError::InvalidParameter(format!(
                "guided filter eps must be positive and finite, got {eps}"
            )));
        }
        Ok(Self { win, eps })
    }

    pub fn window(&self) -> WindowSpec {
        self.win
    }

    pub fn eps(&self) -> T {
        self.eps
    }
}

/// Window-averaged linear coefficients: output is `a_bar·guide + b_bar`.
#[derive(Clone, Debug, PartialEq)]
pub struct GfCoefficients<T = f64> {
    pub a_bar: Image<T>,
    pub b_bar: Image<T>,
}

/// Computes the averaged coefficients for `input` steered by `guide`.
///
/// Both images are centred on their global means first. Variances and
/// covariances are translation invariant and the output is recovered by
/// adding back the input mean, so this only removes cancellation error
/// from `E[I²] - E[I]²`. The returned `b_bar` refers to the uncentred guide.
pub fn coefficients<T: Real>(
    guide: &Image<T>,
    input: &Image<T>,
    params: &GfParams<T>,
) -> Result<GfCoefficients<T>> {
    guide.ensure_same_dims(input)?;
    let win = params.win;
    win.check_fits(guide.height(), guide.width())?;

    let guide_mean = guide.mean();
    let input_mean = input.mean();
    let gi = guide.map(|v| v - guide_mean);
    let pi = input.map(|v| v - input_mean);

    let mean_i = gi.box_mean(win)?;
    let mean_p = pi.box_mean(win)?;
    let corr_ip = gi.zip_map(&pi, |a, b| a * b)?.box_mean(win)?;
    let corr_ii = gi.map(|a| a * a).box_mean(win)?;

    let eps = params.eps;
    let n = guide.pixel_count();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let mu = mean_i.data()[k];
        let p_bar = mean_p.data()[k];
        let var = corr_ii.data()[k] - mu * mu;
        let cov = corr_ip.data()[k] - mu * p_bar;
        let ak = cov / (var + eps);
        a.push(ak);
        b.push(p_bar - ak * mu);
    }
    let (h, w) = guide.dims();
    let a_bar = Image::from_raw(h, w, a).box_mean(win)?;
    let b_bar = Image::from_raw(h, w, b).box_mean(win)?;

    // Undo the centring: a·(I - m_I) + b + m_p = a·I + (b + m_p - a·m_I).
    let b_bar = a_bar.zip_map(&b_bar, |ab, bb| bb + input_mean - ab * guide_mean)?;
    Ok(GfCoefficients { a_bar, b_bar })
}

/// Filters `input` using `guide`: `q(i) = ā_i·guide(i) + b̄_i`.
pub fn guided_filter<T: Real>(guide: &Image<T>, input: &Image<T>, params: &GfParams<T>) -> Result<Image<T>> {
    let coef = coefficients(guide, input, params)?;
    let (h, w) = guide.dims();
    let out = guide
        .data()
        .iter()
        .zip(coef.a_bar.data())
        .zip(coef.b_bar.data())
        .map(|((&g, &a), &b)| a * g + b)
        .collect();
    Ok(Image::from_raw(h, w, out))
}

/// Self-guided smoothing of the circular forward-difference gradients of `v`.
///
/// Returns `(guidfilter(∂x v, ∂x v), guidfilter(∂y v, ∂y v))`.
pub fn smooth_gradients<T: Real>(v: &Image<T>, params: &GfParams<T>) -> Result<(Image<T>, Image<T>)> {
    let dx = v.forward_diff_x();
    let dy = v.forward_diff_y();
    Ok((guided_filter(&dx, &dx, params)?, guided_filter(&dy, &dy, params)?))
}
