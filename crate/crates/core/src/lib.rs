//! Image deconvolution with guided-filter regularization.
//!
//! The observation model is `g = h ∗ u + n` with circular convolution and
//! white Gaussian noise. [`run_gfd`] alternates a frequency-domain
//! Tikhonov-style solve with a guided-filter denoising step, choosing the
//! regularization weight λ every iteration from a discrepancy bound whose
//! scale ρ adapts to the current estimate.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! `*F64`/`*F32` aliases below name the common instantiations.

pub mod bench;
pub mod error;
pub mod guided;
pub mod image;
pub mod io;
pub mod pipeline;
pub mod regparam;
pub mod scalar;
pub mod spectral;

pub use error::{GfdError, Result};
pub use guided::{coefficients, guided_filter, smooth_gradients, GfCoefficients, GfParams};
pub use image::{Image, WindowSpec};
pub use pipeline::{
    run_gfd, FilterSettings, GfdConfig, IterationRecord, IterationTrace, RhoPolicy, SigmaMode,
};
pub use regparam::{
    choose_lambda, compute_rho, estimate_sigma, DiscrepancySpec, LambdaChoice, NoiseEstimate,
};
pub use scalar::Real;
pub use spectral::{circ_convolve, discrepancy, solve_guidance, solve_input, Deconvolver, Lambda, Psf};

pub type ImageF64 = Image<f64>;
pub type ImageF32 = Image<f32>;
pub type PsfF64 = Psf<f64>;
pub type PsfF32 = Psf<f32>;
pub type GfParamsF64 = GfParams<f64>;
pub type GfParamsF32 = GfParams<f32>;
pub type GfdConfigF64 = GfdConfig<f64>;
pub type GfdConfigF32 = GfdConfig<f32>;
pub type LambdaF64 = Lambda<f64>;
pub type LambdaF32 = Lambda<f32>;
pub type IterationTraceF64 = IterationTrace<f64>;
pub type IterationTraceF32 = IterationTrace<f32>;
