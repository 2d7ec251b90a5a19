//! Figures of merit from singular values: efficiency `η = λ₀²`,
//! discriminativity `ξ = λ₀²/Σλₙ²`, selectivity `ηξ` and SNR.

use crate::axis::{Domain, SampledAxis};
use crate::error::{Error, Result};
use crate::filter::{FilterKind, FilterSpec};
use crate::schmidt::SchmidtResult;

// float methods come from std instead whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Relative agreement required between a supplied BT and `Σλₙ²`.
pub const BT_HINT_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterFigures {
    pub eta: f64,
    pub xi: f64,
    pub bt_product: f64,
    pub selectivity: f64,
    /// `Σλₙ²`.
    pub mode_count_effective: f64,
}

/// Figures from a descending list of singular values in `[0, 1]`.
///
/// With `bt_hint` the time-bandwidth product is taken from the hint after
/// checking it against `Σλₙ²`.
pub fn figures_from_singulars(lambda: &[f64], bt_hint: Option<f64>) -> Result<FilterFigures> {
    if lambda.is_empty() {
        return Err(Error::InvalidParameter("no singular values"));
    }
    if lambda.iter().any(|l| !(0.0..=1.0 + 1e-12).contains(l)) {
        return Err(Error::InvalidParameter("singular values must lie in [0, 1]"));
    }
    if lambda.windows(2).any(|w| w[1] > w[0] * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter("singular values must be descending"));
    }
    let total: f64 = lambda.iter().map(|l| l * l).sum();
    figures_with_total(lambda[0], total, bt_hint)
}

/// Figures from a decomposition, using the untruncated `Σλₙ²` (squared
/// Frobenius norm) so that a truncated mode list does not inflate `ξ`.
pub fn figures_from_schmidt(result: &SchmidtResult, bt_hint: Option<f64>) -> Result<FilterFigures> {
    let lead = *result
        .singular_values()
        .first()
        .ok_or(Error::InvalidParameter("no singular values"))?;
    figures_with_total(lead, result.total_sq(), bt_hint)
}

/// Figures from the leading singular value and the total `Σλₙ²`.
pub fn figures_with_total(lead: f64, total_sq: f64, bt_hint: Option<f64>) -> Result<FilterFigures> {
    if !(total_sq > 0.0) || !(lead > 0.0) {
        return Err(Error::InvalidParameter("all singular values are zero"));
    }
    let bt = match bt_hint {
        Some(bt) => {
            if !(bt > 0.0) || ((bt - total_sq) / bt).abs() > BT_HINT_TOLERANCE {
                return Err(Error::InvalidParameter("time-bandwidth hint disagrees with the sum of squared singular values"));
            }
            bt
        }
        None => total_sq,
    };
    let eta = lead * lead;
    let xi = eta / bt;
    Ok(FilterFigures { eta, xi, bt_product: bt, selectivity: eta * xi, mode_count_effective: total_sq })
}

/// `∫|R̃|² dω/2π · ∫|Q|² dt` of a sequential filter by quadrature.
pub fn bt_from_profiles(spec: &FilterSpec) -> Result<f64> {
    let FilterKind::Sif { spectral, temporal, .. } = spec.kind() else {
        return Err(Error::InvalidParameter("time-bandwidth product needs a sequential filter"));
    };
    let n = 4097;
    let w = SampledAxis::symmetric(Domain::AngularFrequency, spectral.support(), n)?;
    let t = SampledAxis::symmetric(Domain::Time, temporal.support(), n)?;
    let b: f64 = w.points().map(|x| spectral.transmission(x).powi(2)).sum::<f64>() * w.weight();
    let d: f64 = t.points().map(|x| temporal.gate(x).powi(2)).sum::<f64>() * t.weight();
    let bt = b * d;
    if !bt.is_finite() {
        return Err(Error::NonFinite("profile integrals"));
    }
    Ok(bt)
}

/// `(|A₀|²/N_y)·ξ` for a signal occupying the target mode. Zero noise gives
/// `+∞` for a non-zero signal.
pub fn analytic_snr(signal_energy: f64, noise_psd: f64, xi: f64) -> Result<f64> {
    if !(signal_energy >= 0.0) || !(noise_psd >= 0.0) {
        return Err(Error::InvalidParameter("energies must be non-negative"));
    }
    if !(xi > 0.0 && xi <= 1.0) {
        return Err(Error::InvalidParameter("discriminativity must lie in (0, 1]"));
    }
    if noise_psd == 0.0 {
        return if signal_energy > 0.0 {
            Ok(f64::INFINITY)
        } else {
            Err(Error::InvalidParameter("signal and noise are both zero"))
        };
    }
    Ok(signal_energy / noise_psd * xi)
}
