//! Entanglement-based (BBM92) key rate under background noise for a filter
//! with efficiency `η` and discriminativity `ξ`.
//!
//! Only the normalized rate `R_K/(R_S τ_ch²)` is computed here; absolute
//! rates multiply back by the source rate and squared transmission.

use alloc::vec::Vec;
use core::f64::consts::PI;


use crate::error::{Error, Result};
use crate::gaussian::mehler_u;
use crate::slepian::pswf_solve_legendre;

// float methods come from std instead whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Mean background per detection slot above which the weak-noise model is
/// flagged as invalid.
pub const MAX_BACKGROUND_PER_SLOT: f64 = 0.1;

/// Step of the coarse efficiency scan.
pub const SCAN_STEP: f64 = 1e-3;

/// Final bracket width of the golden-section refinement.
pub const REFINE_TOLERANCE: f64 = 1e-6;

// efficiency is kept strictly below one, where ξ of either SIF vanishes
const ETA_CEILING: f64 = 1.0 - 1e-9;

/// `H(x) = −x log₂x − (1−x) log₂(1−x)` with `H(0) = H(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter("binary entropy needs an argument in [0, 1]"));
    }
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// Root of `1 − 2H(q) = 0` on `(0, ½)` by bisection.
pub fn qber_threshold() -> f64 {
    let (mut lo, mut hi) = (1e-3, 0.5 - 1e-3);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        // H increases on (0, ½)
        if 1.0 - 2.0 * binary_entropy(mid).unwrap_or(1.0) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_unit(x: f64, what: &'static str) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what))
    }
}

fn check_noise(n_y: f64) -> Result<()> {
    if n_y >= 0.0 && n_y.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("scaled noise must be non-negative"))
    }
}

/// `½(1 − (1 + n_y/ξ)⁻²)`.
pub fn qber(n_y: f64, xi: f64) -> Result<f64> {
    check_noise(n_y)?;
    check_unit(xi, "discriminativity must lie in (0, 1]")?;
    let g = 1.0 + n_y / xi;
    Ok(0.5 * (1.0 - 1.0 / (g * g)))
}

/// `η² (1 + n_y/ξ)² max(0, 1 − 2H(QBER))`.
pub fn normalized_key_rate(eta: f64, xi: f64, n_y: f64) -> Result<f64> {
    check_unit(eta, "efficiency must lie in (0, 1]")?;
    let q = qber(n_y, xi)?;
    let g = 1.0 + n_y / xi;
    let bracket = 1.0 - 2.0 * binary_entropy(q)?;
    Ok(eta * eta * g * g * bracket.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QkdScenario {
    channel_transmission: f64,
    noise_psd: f64,
    source_rate: f64,
}

impl QkdScenario {
    pub fn new(channel_transmission: f64, noise_psd: f64, source_rate: f64) -> Result<Self> {
        check_unit(channel_transmission, "channel transmission must lie in (0, 1]")?;
        check_noise(noise_psd)?;
        if !(source_rate > 0.0) || !source_rate.is_finite() {
            return Err(Error::InvalidParameter("source rate must be positive"));
        }
        Ok(Self { channel_transmission, noise_psd, source_rate })
    }

    pub fn channel_transmission(&self) -> f64 {
        self.channel_transmission
    }

    pub fn noise_psd(&self) -> f64 {
        self.noise_psd
    }

    pub fn source_rate(&self) -> f64 {
        self.source_rate
    }

    /// `n_y = N_y/τ_ch`.
    pub fn scaled_noise(&self) -> f64 {
        self.noise_psd / self.channel_transmission
    }

    /// Mean background per slot `N_y η/ξ`.
    pub fn background_per_slot(&self, eta: f64, xi: f64) -> f64 {
        self.noise_psd * eta / xi
    }

    /// Whether the background is low enough for the weak-noise model.
    pub fn is_valid(&self, eta: f64, xi: f64) -> bool {
        self.background_per_slot(eta, xi) <= MAX_BACKGROUND_PER_SLOT
    }

    /// Secret key rate in the units of the source rate.
    pub fn key_rate(&self, eta: f64, xi: f64) -> Result<f64> {
        let t = self.channel_transmission;
        Ok(self.source_rate * t * t * normalized_key_rate(eta, xi, self.scaled_noise())?)
    }
}

/// Efficiency-discriminativity relation of a filter family.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterCharacteristic {
    /// `ξ = 1 − η²`.
    GaussianSif,
    /// Rectangular SIF, through the leading prolate eigenvalue.
    SlepianSif(SlepianCurve),
    FixedPoint { eta: f64, xi: f64 },
}

impl FilterCharacteristic {
    pub fn slepian() -> Result<Self> {
        Ok(Self::SlepianSif(SlepianCurve::new()?))
    }

    pub fn fixed_point(eta: f64, xi: f64) -> Result<Self> {
        check_unit(eta, "efficiency must lie in (0, 1]")?;
        check_unit(xi, "discriminativity must lie in (0, 1]")?;
        Ok(Self::FixedPoint { eta, xi })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::GaussianSif => "gaussian",
            Self::SlepianSif(_) => "slepian",
            Self::FixedPoint { .. } => "point",
        }
    }

    /// `ξ(η)`. A fixed point ignores its argument.
    pub fn xi(&self, eta: f64) -> Result<f64> {
        match self {
            Self::FixedPoint { xi, .. } => Ok(*xi),
            Self::GaussianSif => {
                if !(eta > 0.0 && eta < 1.0) {
                    return Err(Error::InvalidParameter("efficiency must lie in (0, 1)"));
                }
                Ok(1.0 - eta * eta)
            }
            Self::SlepianSif(curve) => curve.xi(eta),
        }
    }
}

/// `(η, ξ) = (β₀(c), β₀(c)/BT)` with `c = πBT/2`, tabulated on log-spaced
/// `c` and interpolated monotonically.
#[derive(Debug, Clone, PartialEq)]
pub struct SlepianCurve {
    // logit(η), ascending
    logit: Vec<f64>,
    log_c: Vec<f64>,
    slope: Vec<f64>,
}

impl SlepianCurve {
    pub const C_MIN: f64 = 1e-4;
    pub const C_MAX: f64 = 12.0;
    pub const POINTS: usize = 400;

    pub fn new() -> Result<Self> {
        let (a, b) = (Self::C_MIN.ln(), Self::C_MAX.ln());
        let mut logit = Vec::with_capacity(Self::POINTS);
        let mut log_c = Vec::with_capacity(Self::POINTS);
        for k in 0..Self::POINTS {
            let lc = a + (b - a) * k as f64 / (Self::POINTS - 1) as f64;
            let beta = pswf_solve_legendre(lc.exp(), 0)?.functions()[0].beta();
            let g = logit_of(beta);
            if !g.is_finite() || logit.last().is_some_and(|&p| g <= p) {
                return Err(Error::Numeric("leading prolate eigenvalue is not increasing in c"));
            }
            logit.push(g);
            log_c.push(lc);
        }
        let slope = pchip_slopes(&logit, &log_c);
        Ok(Self { logit, log_c, slope })
    }

    /// Bandwidth parameter `c` at which the leading eigenvalue equals `eta`.
    pub fn c_of(&self, eta: f64) -> Result<f64> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidParameter("efficiency must lie in (0, 1)"));
        }
        let g = logit_of(eta);
        let n = self.logit.len();
        if g < self.logit[0] {
            // β₀ ≈ 2c/π for small c
            return Ok(self.log_c[0].exp() * eta / logistic(self.logit[0]));
        }
        if g > self.logit[n - 1] {
            return Ok(large_c(1.0 - eta));
        }
        let k = self.logit.partition_point(|&x| x <= g).clamp(1, n - 1) - 1;
        Ok(hermite_cubic(&self.logit, &self.log_c, &self.slope, k, g).exp())
    }

    pub fn xi(&self, eta: f64) -> Result<f64> {
        let c = self.c_of(eta)?;
        Ok(eta * PI / (2.0 * c))
    }
}

fn logit_of(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

fn logistic(g: f64) -> f64 {
    1.0 / (1.0 + (-g).exp())
}

// 1 − β₀(c) ≈ 4√(πc) e^{−2c} for large c, inverted by bisection
fn large_c(deficit: f64) -> f64 {
    let f = |c: f64| 4.0 * (PI * c).sqrt() * (-2.0 * c).exp();
    let (mut lo, mut hi) = (SlepianCurve::C_MAX * 0.5, 1e3);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > deficit {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

// Fritsch-Carlson derivatives for a monotone cubic Hermite interpolant
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    let mut m = alloc::vec![0.0; n];
    for k in 1..n - 1 {
        if d[k - 1] * d[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            0.0
        } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

fn hermite_cubic(x: &[f64], y: &[f64], m: &[f64], k: usize, at: f64) -> f64 {
    let h = x[k + 1] - x[k];
    let s = (at - x[k]) / h;
    let (s2, s3) = (s * s, s * s * s);
    y[k] * (2.0 * s3 - 3.0 * s2 + 1.0)
        + h * m[k] * (s3 - 2.0 * s2 + s)
        + y[k + 1] * (-2.0 * s3 + 3.0 * s2)
        + h * m[k + 1] * (s3 - s2)
}

/// Best efficiency and the normalized rate it achieves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateOptimum {
    pub eta: f64,
    pub xi: f64,
    pub rate: f64,
    pub no_key: bool,
}

/// Maximize the normalized rate over `η ∈ (0, 1)` along a SIF
/// characteristic: a scan at [`SCAN_STEP`] then golden-section refinement
/// to [`REFINE_TOLERANCE`]. An all-zero curve gives `η = rate = 0` with
/// `no_key` set.
pub fn optimize_over_efficiency(fc: &FilterCharacteristic, n_y: f64) -> Result<RateOptimum> {
    if let FilterCharacteristic::FixedPoint { .. } = fc {
        return Err(Error::InvalidParameter("a fixed point has no efficiency to optimize"));
    }
    check_noise(n_y)?;
    let rate = |eta: f64| -> Result<f64> { normalized_key_rate(eta, fc.xi(eta)?, n_y) };
    let steps = (1.0 / SCAN_STEP).round() as usize;
    let (mut best_k, mut best) = (0, 0.0);
    for k in 1..steps {
        let r = rate(k as f64 * SCAN_STEP)?;
        if r > best {
            best = r;
            best_k = k;
        }
    }
    if best_k == 0 {
        return Ok(RateOptimum { eta: 0.0, xi: 0.0, rate: 0.0, no_key: true });
    }
    let centre = best_k as f64 * SCAN_STEP;
    let mut a = (centre - SCAN_STEP).max(SCAN_STEP * 1e-3);
    let mut b = (centre + SCAN_STEP).min(ETA_CEILING);
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (rate(x1)?, rate(x2)?);
    while b - a > REFINE_TOLERANCE {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = rate(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = rate(x1)?;
        }
    }
    // keep the scan point if refinement wandered onto a flat or kinked stretch
    let (eta, r) = [(x1, f1), (x2, f2), (centre, best)]
        .into_iter()
        .fold((centre, best), |acc, p| if p.1 > acc.1 { p } else { acc });
    Ok(RateOptimum { eta, xi: fc.xi(eta)?, rate: r, no_key: false })
}

/// `(η, ξ)` of the Gaussian SIF as a function of its time-bandwidth product.
pub fn gaussian_point(bt: f64) -> (f64, f64) {
    let u = mehler_u(bt);
    (u, 1.0 - u * u)
}
