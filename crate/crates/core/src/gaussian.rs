//! Closed-form Schmidt decomposition of the Gaussian sequential filter.
//!
//! With `R̃(ω) = exp(-ω²/(8πB²))` and `Q(t) = exp(-πt²/(2T²))` the kernel
//! factorizes through the Mehler identity into Hermite-Gaussian modes with
//! geometric singular values `λₙ = u^{n+1/2}`.

use alloc::vec::Vec;
use core::f64::consts::PI;


use crate::axis::{Domain, SampledAxis, SampledSignal};
use crate::error::{Error, Result};
use crate::filter::{FilterSpec, StageOrder};
use crate::profile::{SpectralProfile, TemporalProfile};
use crate::C64;

// float methods come from std instead whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Highest Hermite-Gaussian order evaluated.
pub const MAX_HERMITE_ORDER: usize = 60;

/// Gaussian sequential filter with its Mehler parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSif {
    bandwidth: f64,
    duration: f64,
    u: f64,
    alpha: f64,
    beta: f64,
}

impl GaussianSif {
    pub fn new(bandwidth: f64, duration: f64) -> Result<Self> {
        let (r, q) = gaussian_profiles(bandwidth, duration)?;
        let bt = r.bandwidth() * q.duration();
        let s = (1.0 + 4.0 * bt * bt).powf(0.25);
        Ok(Self {
            bandwidth,
            duration,
            u: mehler_u(bt),
            alpha: 2.0 * PI.sqrt() * bandwidth / s,
            beta: PI.sqrt() / duration * s,
        })
    }

    /// Square filter `B = T = √BT`.
    pub fn from_bt(bt: f64) -> Result<Self> {
        if !(bt > 0.0) || !bt.is_finite() {
            return Err(Error::InvalidParameter("time-bandwidth product must be positive"));
        }
        Self::new(bt.sqrt(), bt.sqrt())
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn bt(&self) -> f64 {
        self.bandwidth * self.duration
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// Spectral scale of the input modes (frequency-first order),
    /// `2√π B / (1 + (2BT)²)^{1/4}`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Spectral scale of the output modes (frequency-first order),
    /// `√π (1 + (2BT)²)^{1/4} / T`. Note `T²αβ = 2πBT`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn profiles(&self) -> (SpectralProfile, TemporalProfile) {
        (
            SpectralProfile::Gaussian { bandwidth: self.bandwidth },
            TemporalProfile::Gaussian { duration: self.duration },
        )
    }

    pub fn filter(&self, order: StageOrder) -> FilterSpec {
        let (r, q) = self.profiles();
        FilterSpec::sif(r, q, order)
    }
}

/// Peak-normalized Gaussian window and gate with `∫|R̃|²dω/2π = B`, `∫|Q|²dt = T`.
pub fn gaussian_profiles(bandwidth: f64, duration: f64) -> Result<(SpectralProfile, TemporalProfile)> {
    Ok((SpectralProfile::gaussian(bandwidth)?, TemporalProfile::gaussian(duration)?))
}

/// `u = √(1 + (2BT)⁻²) − (2BT)⁻¹`, the ratio of successive singular values.
///
/// Evaluated as `1/(√(1+x²) + x)` to avoid cancellation at large `BT`.
/// Returns NaN for non-positive input.
pub fn mehler_u(bt: f64) -> f64 {
    if !(bt > 0.0) {
        return f64::NAN;
    }
    let x = 1.0 / (2.0 * bt);
    1.0 / ((1.0 + x * x).sqrt() + x)
}

/// `λₙ = u^{n+1/2}` for `n < count`.
pub fn gaussian_singular_values(sif: &GaussianSif, count: usize) -> Vec<f64> {
    let u = sif.u;
    let mut out = Vec::with_capacity(count);
    let mut l = u.sqrt();
    for _ in 0..count {
        out.push(l);
        l *= u;
    }
    out
}

/// `(η, ξ) = (u, 1 − u²)`.
pub fn gaussian_tradeoff(bt: f64) -> (f64, f64) {
    let u = mehler_u(bt);
    (u, 1.0 - u * u)
}

/// Square-normalized Hermite-Gaussians `HG₀(x)..HG_{n_max}(x)`,
/// `∫ HGₘ HGₙ dx = δₘₙ`, by the normalized three-term recurrence.
pub fn hermite_gaussians(n_max: usize, x: f64) -> Result<Vec<f64>> {
    if n_max > MAX_HERMITE_ORDER {
        return Err(Error::IndexOutOfRange { index: n_max, len: MAX_HERMITE_ORDER + 1 });
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let h0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(h0);
    if n_max >= 1 {
        out.push(2.0f64.sqrt() * x * h0);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    Ok(out)
}

pub fn hermite_gaussian(n: usize, x: f64) -> Result<f64> {
    Ok(hermite_gaussians(n, x)?[n])
}

/// Spectral input and output modes `(φ̃ₙ, ψ̃ₙ)` of the frequency-first
/// filter on a frequency axis, `φ̃ₙ(ω) = √(2π/α) HGₙ(ω/α)` and
/// `ψ̃ₙ(ω) = √(2π/β) HGₙ(ω/β)`. For the time-first order the roles of the
/// two scales swap.
pub fn hermite_gaussian_modes(
    sif: &GaussianSif,
    n: usize,
    axis: &SampledAxis,
) -> Result<(SampledSignal, SampledSignal)> {
    axis.expect(Domain::AngularFrequency)?;
    if n > MAX_HERMITE_ORDER {
        return Err(Error::IndexOutOfRange { index: n, len: MAX_HERMITE_ORDER + 1 });
    }
    let mode = |scale: f64| -> Result<SampledSignal> {
        let a = (2.0 * PI / scale).sqrt();
        let mut values = Vec::with_capacity(axis.count());
        for w in axis.points() {
            values.push(C64::new(a * hermite_gaussian(n, w / scale)?, 0.0));
        }
        SampledSignal::new(*axis, values)
    };
    Ok((mode(sif.alpha)?, mode(sif.beta)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_values() {
        assert!((mehler_u(0.5) - (2.0f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!(mehler_u(1e6) > 1.0 - 1e-6);
        assert!((mehler_u(2.3 / (2.0 * PI)) - 0.32693).abs() < 1e-5);
        assert!((mehler_u(1.0) - 0.618034).abs() < 1e-6);
        assert!(mehler_u(0.0).is_nan());
    }

    #[test]
    fn u_identity_and_scalings() {
        for k in 0..60 {
            let bt = 10f64.powf(-3.0 + k as f64 * 0.1);
            let u = mehler_u(bt);
            assert!((u / (1.0 - u * u) - bt).abs() <= 1e-12 * bt.max(1.0), "{bt}");
            let s = GaussianSif::new(bt.sqrt() * 1.7, bt.sqrt() / 1.7).unwrap();
            let t = s.duration();
            assert!((t * t * s.alpha() * s.beta() - 2.0 * PI * bt).abs() < 1e-12 * bt.max(1.0));
        }
    }

    #[test]
    fn singular_values_are_geometric() {
        let s = GaussianSif::from_bt(0.5).unwrap();
        let l = gaussian_singular_values(&s, 50);
        assert!((l[0] - 0.643594).abs() < 1e-6);
        for w in l.windows(2) {
            assert!((w[1] / w[0] - s.u()).abs() < 1e-14);
        }
        let sum: f64 = l.iter().map(|x| x * x).sum();
        assert!((sum - 0.5).abs() < 1e-10);
    }

    #[test]
    fn tradeoff_values() {
        let (eta, xi) = gaussian_tradeoff(0.5);
        assert!((eta - 0.414214).abs() < 1e-6);
        assert!((xi - 0.828427).abs() < 1e-6);
        assert!((xi - eta / 0.5).abs() < 1e-12);
    }

    #[test]
    fn hermite_gaussians_are_orthonormal() {
        let h = 0.01;
        let xs: Vec<f64> = (0..2401).map(|i| -12.0 + i as f64 * h).collect();
        let table: Vec<Vec<f64>> = xs.iter().map(|&x| hermite_gaussians(10, x).unwrap()).collect();
        for m in 0..=10 {
            for n in 0..=10 {
                let s: f64 = table.iter().map(|r| r[m] * r[n]).sum::<f64>() * h;
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-9, "{m} {n} {s}");
            }
        }
        assert!(hermite_gaussians(61, 0.0).is_err());
        assert!(hermite_gaussians(60, 30.0).unwrap().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn spectral_modes_have_unit_norm() {
        let s = GaussianSif::from_bt(0.5).unwrap();
        let w = 6.0 * s.alpha().max(s.beta()) * 1.5;
        let ax = SampledAxis::symmetric(Domain::AngularFrequency, w, 1201).unwrap();
        for n in [0, 3, 10] {
            let (phi, psi) = hermite_gaussian_modes(&s, n, &ax).unwrap();
            assert!((phi.energy() - 1.0).abs() < 1e-9);
            assert!((psi.energy() - 1.0).abs() < 1e-9);
        }
        let (phi0, _) = hermite_gaussian_modes(&s, 0, &ax).unwrap();
        assert!(phi0.values().iter().all(|v| v.re > 0.0));
        let t = SampledAxis::symmetric(Domain::Time, 1.0, 11).unwrap();
        assert!(hermite_gaussian_modes(&s, 0, &t).is_err());
    }
}
