//! Peak-normalized filter profiles: stationary spectral windows `R̃(ω)` and
//! temporal gates `Q(t)`, each with its conjugate-domain form.
//!
//! Widths follow the energy definitions `B = ∫|R̃|² dω/2π` (Hz) and
//! `T = ∫|Q|² dt` (s).

use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};


use crate::error::{Error, Result};
use crate::C64;

// float methods come from std instead whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Amplitude below which a Gaussian profile is treated as vanished when
/// sizing grids (about nine amplitude standard deviations).
pub(crate) const GAUSSIAN_SUPPORT_SIGMAS: f64 = 9.0;

/// `sin(x)/x` with the removable singularity filled by its series.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Indicator of `|x| < edge`, with `1/√2` on the edge itself.
fn top_hat(x: f64, edge: f64) -> f64 {
    let d = x.abs() - edge;
    if d.abs() <= 1e-12 * edge {
        FRAC_1_SQRT_2
    } else if d < 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Fraction of a Gaussian's mass (variance `var`, zero mean) outside `[lo, hi]`.
fn gaussian_outside(var: f64, lo: f64, hi: f64) -> f64 {
    let s = (2.0 * var).sqrt();
    0.5 * libm::erfc(hi / s) + 0.5 * libm::erfc(-lo / s)
}

/// Fraction of `[-edge, edge]` outside `[lo, hi]`.
fn box_outside(edge: f64, lo: f64, hi: f64) -> f64 {
    let inside = (hi.min(edge) - lo.max(-edge)).max(0.0);
    1.0 - inside / (2.0 * edge)
}

/// Approximate fraction of `sinc²(a x)` mass outside `[lo, hi]`, from the
/// asymptotic tail `∫_L^∞ sin²(ax)/(ax)² dx ≈ 1/(2a²L)` normalized by `π/a`.
fn sinc_sq_outside(a: f64, lo: f64, hi: f64) -> f64 {
    let side = |l: f64| if l <= 0.0 { 0.5 } else { (1.0 / (2.0 * PI * a * l)).min(0.5) };
    side(hi) + side(-lo)
}

/// Stationary spectral window `R̃(ω)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralProfile {
    /// `R̃(ω) = exp(-ω²/(8πB²))`.
    Gaussian { bandwidth: f64 },
    /// `R̃(ω) = 1` for `|ω| < Ω = πB`.
    Rectangular { bandwidth: f64 },
}

impl SpectralProfile {
    pub fn gaussian(bandwidth: f64) -> Result<Self> {
        check_width(bandwidth, "bandwidth must be positive")?;
        Ok(Self::Gaussian { bandwidth })
    }

    pub fn rectangular(bandwidth: f64) -> Result<Self> {
        check_width(bandwidth, "bandwidth must be positive")?;
        Ok(Self::Rectangular { bandwidth })
    }

    /// `B = ∫|R̃|² dω/2π` in Hz.
    pub fn bandwidth(&self) -> f64 {
        match *self {
            Self::Gaussian { bandwidth } | Self::Rectangular { bandwidth } => bandwidth,
        }
    }

    /// Cutoff `Ω = πB` of the rectangular window, in rad/s.
    pub fn cutoff(&self) -> Option<f64> {
        match *self {
            Self::Rectangular { bandwidth } => Some(PI * bandwidth),
            Self::Gaussian { .. } => None,
        }
    }

    pub fn transmission(&self, omega: f64) -> f64 {
        match *self {
            Self::Gaussian { bandwidth: b } => (-omega * omega / (8.0 * PI * b * b)).exp(),
            Self::Rectangular { bandwidth: b } => top_hat(omega, PI * b),
        }
    }

    /// Impulse response `R(t) = ∫ e^{-iωt} R̃(ω) dω/2π`.
    pub fn impulse_response(&self, t: f64) -> f64 {
        match *self {
            Self::Gaussian { bandwidth: b } => SQRT_2 * b * (-2.0 * PI * b * b * t * t).exp(),
            Self::Rectangular { bandwidth: b } => b * sinc(PI * b * t),
        }
    }

    /// `∫ R*(s+τ) R(s) ds = ∫ |R̃(ω)|² e^{iωτ} dω/2π`.
    pub fn autocorrelation(&self, lag: f64) -> C64 {
        let b = self.bandwidth();
        let v = match self {
            Self::Gaussian { .. } => b * (-PI * b * b * lag * lag).exp(),
            Self::Rectangular { .. } => b * sinc(PI * b * lag),
        };
        C64::new(v, 0.0)
    }

    /// Half-width in ω outside which the window is negligible.
    pub fn support(&self) -> f64 {
        match *self {
            Self::Gaussian { bandwidth: b } => GAUSSIAN_SUPPORT_SIGMAS * 2.0 * PI.sqrt() * b,
            Self::Rectangular { bandwidth: b } => PI * b,
        }
    }

    /// Half-width in t outside which `R(t)` is negligible, if it decays fast.
    pub fn impulse_support(&self) -> Option<f64> {
        match *self {
            Self::Gaussian { bandwidth: b } => {
                Some(GAUSSIAN_SUPPORT_SIGMAS / (2.0 * PI.sqrt() * b))
            }
            Self::Rectangular { .. } => None,
        }
    }

    /// Fraction of `∫|R̃|²` lying outside `[lo, hi]` (rad/s).
    pub fn mass_outside(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            Self::Gaussian { bandwidth: b } => gaussian_outside(2.0 * PI * b * b, lo, hi),
            Self::Rectangular { bandwidth: b } => box_outside(PI * b, lo, hi),
        }
    }

    /// Fraction of `∫|R|²` lying outside `[lo, hi]` (s).
    pub fn impulse_mass_outside(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            Self::Gaussian { bandwidth: b } => gaussian_outside(1.0 / (8.0 * PI * b * b), lo, hi),
            Self::Rectangular { bandwidth: b } => sinc_sq_outside(PI * b, lo, hi),
        }
    }
}

/// Temporal gate `Q(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TemporalProfile {
    /// `Q(t) = exp(-πt²/(2T²))`, `Q̃(ω) = T√2 exp(-ω²T²/(2π))`.
    Gaussian { duration: f64 },
    /// `Q(t) = 1` for `|t| < T/2`.
    Rectangular { duration: f64 },
}

impl TemporalProfile {
    pub fn gaussian(duration: f64) -> Result<Self> {
        check_width(duration, "duration must be positive")?;
        Ok(Self::Gaussian { duration })
    }

    pub fn rectangular(duration: f64) -> Result<Self> {
        check_width(duration, "duration must be positive")?;
        Ok(Self::Rectangular { duration })
    }

    /// `T = ∫|Q|² dt` in seconds.
    pub fn duration(&self) -> f64 {
        match *self {
            Self::Gaussian { duration } | Self::Rectangular { duration } => duration,
        }
    }

    /// Half-width `τ = T/2` of the rectangular gate.
    pub fn half_width(&self) -> Option<f64> {
        match *self {
            Self::Rectangular { duration } => Some(duration / 2.0),
            Self::Gaussian { .. } => None,
        }
    }

    pub fn gate(&self, t: f64) -> f64 {
        match *self {
            Self::Gaussian { duration: d } => (-PI * t * t / (2.0 * d * d)).exp(),
            Self::Rectangular { duration: d } => top_hat(t, d / 2.0),
        }
    }

    /// `Q̃(ω) = ∫ e^{iωt} Q(t) dt`.
    pub fn spectrum(&self, omega: f64) -> f64 {
        match *self {
            Self::Gaussian { duration: d } => {
                d * SQRT_2 * (-omega * omega * d * d / (2.0 * PI)).exp()
            }
            Self::Rectangular { duration: d } => d * sinc(omega * d / 2.0),
        }
    }

    pub fn support(&self) -> f64 {
        match *self {
            Self::Gaussian { duration: d } => GAUSSIAN_SUPPORT_SIGMAS * d / PI.sqrt(),
            Self::Rectangular { duration: d } => d / 2.0,
        }
    }

    pub fn spectrum_support(&self) -> Option<f64> {
        match *self {
            Self::Gaussian { duration: d } => Some(GAUSSIAN_SUPPORT_SIGMAS * PI.sqrt() / d),
            Self::Rectangular { .. } => None,
        }
    }

    /// Fraction of `∫|Q|²` lying outside `[lo, hi]` (s).
    pub fn mass_outside(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            Self::Gaussian { duration: d } => gaussian_outside(d * d / (2.0 * PI), lo, hi),
            Self::Rectangular { duration: d } => box_outside(d / 2.0, lo, hi),
        }
    }

    /// Fraction of `∫|Q̃|²` lying outside `[lo, hi]` (rad/s).
    pub fn spectrum_mass_outside(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            Self::Gaussian { duration: d } => gaussian_outside(PI / (2.0 * d * d), lo, hi),
            Self::Rectangular { duration: d } => sinc_sq_outside(d / 2.0, lo, hi),
        }
    }
}

fn check_width(x: f64, msg: &'static str) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg))
    }
}
