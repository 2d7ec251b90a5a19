//! Optical time-frequency filters as linear integral operators.
//!
//! Filters are described declaratively ([`FilterSpec`]), discretized into
//! weight-symmetrized matrices ([`OperatorMatrix`]) and decomposed into
//! Schmidt modes ([`SchmidtResult`]). Closed-form backends cover the Gaussian
//! and rectangular sequential filters; [`metrics`], [`noisesim`] and [`qkd`]
//! turn singular values into efficiency, SNR and key-rate figures.
//!
//! Conventions: `f̃(ω) = ∫dt e^{iωt} f(t)`, `f(t) = ∫dω/2π e^{-iωt} f̃(ω)`.
//! Bandwidths are in Hz, angular frequencies in rad/s.

#![no_std]

extern crate alloc;

pub mod axis;
pub mod error;
pub mod filter;
pub mod fourier;
pub mod gaussian;
pub mod metrics;
pub mod noisesim;
pub mod operator;
pub mod profile;
pub mod qkd;
pub mod quadrature;
pub mod schmidt;
pub mod slepian;

pub type C64 = num_complex::Complex<f64>;

pub use axis::{Domain, SampledAxis, SampledSignal};
pub use error::{Error, Result};
pub use filter::{apply_filter, compose_order_swap, FilterKind, FilterSpec, StageOrder};
pub use fourier::{fourier_forward, fourier_inverse};
pub use operator::{build_operator, gram_kernel, OperatorMatrix};
pub use profile::{SpectralProfile, TemporalProfile};
pub use schmidt::{
    decompose_filter, project_onto_input_mode, reconstruct_kernel, schmidt_decompose,
    GridReport, Reconstruction, RefineOptions, SchmidtResult, Truncation,
};
