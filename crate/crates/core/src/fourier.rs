//! Discrete Fourier transforms under the `e^{+iωt}` forward / `dω/2π` inverse
//! convention.
//!
//! On a grid `t_j = t₀ + jΔt` the forward transform is
//! `f̃(ω_k) = Δt Σ_j e^{iω_k t_j} f(t_j)` with `ω_k = ω₀ + kΔω`,
//! `Δω = 2π/(NΔt)`, and the inverse is
//! `f(t_j) = (Δω/2π) Σ_k e^{-iω_k t_j} f̃(ω_k)`. The pair is exactly inverse
//! and `Σ|f|²Δt = Σ|f̃|²Δω/2π` holds to rounding.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::axis::{Domain, SampledAxis, SampledSignal};
use crate::error::Result;
use crate::C64;

// float methods come from std instead whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Time signal to angular-frequency spectrum.
pub fn fourier_forward(f: &SampledSignal) -> Result<SampledSignal> {
    f.axis().expect(Domain::Time)?;
    Ok(transform(f))
}

/// Angular-frequency spectrum to time signal.
pub fn fourier_inverse(spectrum: &SampledSignal) -> Result<SampledSignal> {
    spectrum.axis().expect(Domain::AngularFrequency)?;
    Ok(transform(spectrum))
}

/// Transform to the conjugate domain on [`SampledAxis::reciprocal`].
pub(crate) fn transform(f: &SampledSignal) -> SampledSignal {
    let target = f.axis().reciprocal();
    let values = transform_onto(f.values(), f.axis(), &target);
    SampledSignal::from_parts(target, values)
}

/// Evaluate the transform of samples on `src` at the nodes of `dst`, where
/// `dst` has the reciprocal spacing of `src` but an arbitrary start.
pub(crate) fn transform_onto(values: &[C64], src: &SampledAxis, dst: &SampledAxis) -> Vec<C64> {
    let n = values.len();
    debug_assert_eq!(dst.count(), n);
    let sign = match src.domain() {
        Domain::Time => 1.0,
        Domain::AngularFrequency => -1.0,
    };
    // e^{i s (y0 + kΔy)(x0 + jΔx)} = e^{i s y0 x0} e^{i s y0 jΔx} e^{i s kΔy x0} e^{i s 2π jk/N}
    let (x0, dx) = (src.start(), src.step());
    let (y0, dy) = (dst.start(), dst.step());
    let mut buf: Vec<C64> = values
        .iter()
        .enumerate()
        .map(|(j, v)| v * C64::cis(sign * y0 * j as f64 * dx))
        .collect();
    dft(&mut buf, sign);
    let w = src.weight();
    buf.iter_mut().enumerate().for_each(|(k, v)| {
        *v *= C64::cis(sign * (y0 * x0 + k as f64 * dy * x0)) * w;
    });
    buf
}

/// Unnormalized DFT `X_k = Σ_j x_j e^{i·sign·2πjk/N}` in place.
///
/// Radix-2 for power-of-two lengths, direct summation otherwise.
pub(crate) fn dft(buf: &mut [C64], sign: f64) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        fft_radix2(buf, sign);
        return;
    }
    let input: Vec<C64> = buf.to_vec();
    for (k, out) in buf.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (j, x) in input.iter().enumerate() {
            let phase = ((j * k) % n) as f64 * 2.0 * PI / n as f64;
            acc += x * C64::cis(sign * phase);
        }
        *out = acc;
    }
}

fn fft_radix2(buf: &mut [C64], sign: f64) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let twiddles: Vec<C64> = (0..half)
            .map(|k| C64::cis(sign * 2.0 * PI * k as f64 / len as f64))
            .collect();
        for chunk in buf.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((a, b), w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let t = *b * w;
                *b = *a - t;
                *a += t;
            }
        }
        len *= 2;
    }
}
