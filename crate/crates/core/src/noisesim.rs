//! Monte-Carlo ensembles of a pulse in white noise passed through a filter.
//!
//! Each trial draws its noise from its own ChaCha20 stream keyed by
//! `(seed, trial)`, and all ensemble sums are pairwise over the trial index,
//! so results do not depend on how trials are scheduled.

use alloc::vec::Vec;
use core::ops::Range;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

use crate::axis::{Domain, SampledAxis, SampledSignal};
use crate::error::{Error, Result};
use crate::filter::{apply_filter, FilterKind, FilterSpec, StageOrder};
use crate::C64;

// float methods come from std instead whenever std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Generator recorded in run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9), seed_from_u64(seed), stream = trial index";

/// Fewest trials accepted by [`filtered_noise_correlation`].
pub const MIN_CORRELATION_TRIALS: usize = 1000;

const UNIT_NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseEnsembleConfig {
    noise_psd: f64,
    signal_energy: f64,
    signal_mode: SampledSignal,
    trials: usize,
    seed: u64,
}

impl NoiseEnsembleConfig {
    /// `signal_mode` must be a unit-norm time-domain signal; the noise is
    /// drawn on its grid.
    pub fn new(noise_psd: f64, signal_energy: f64, signal_mode: SampledSignal, trials: usize, seed: u64) -> Result<Self> {
        if !(noise_psd >= 0.0) || !noise_psd.is_finite() {
            return Err(Error::InvalidParameter("noise spectral density must be non-negative"));
        }
        if !(signal_energy >= 0.0) || !signal_energy.is_finite() {
            return Err(Error::InvalidParameter("signal energy must be non-negative"));
        }
        signal_mode.axis().expect(Domain::Time)?;
        if (signal_mode.norm() - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(Error::InvalidParameter("signal mode must have unit norm"));
        }
        if trials == 0 {
            return Err(Error::InvalidParameter("at least one trial is required"));
        }
        Ok(Self { noise_psd, signal_energy, signal_mode, trials, seed })
    }

    pub fn noise_psd(&self) -> f64 {
        self.noise_psd
    }

    pub fn signal_energy(&self) -> f64 {
        self.signal_energy
    }

    pub fn signal_mode(&self) -> &SampledSignal {
        &self.signal_mode
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn axis(&self) -> &SampledAxis {
        self.signal_mode.axis()
    }
}

/// Detected energies of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialEnergy {
    pub noise: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub w_total_mean: f64,
    pub w_total_stderr: f64,
    pub w_signal: f64,
    pub w_noise_mean: f64,
    pub w_noise_stderr: f64,
    pub snr_empirical: f64,
    /// First-order error propagated from `w_noise_stderr`.
    pub snr_stderr: f64,
    pub trials: usize,
    pub seed: u64,
}

/// The noise generator of one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Circular complex Gaussian samples with `E|yⱼ|² = N_y/Δt`.
pub fn sample_white_noise<R: RngCore + ?Sized>(axis: &SampledAxis, noise_psd: f64, rng: &mut R) -> Result<SampledSignal> {
    axis.expect(Domain::Time)?;
    if !(noise_psd >= 0.0) || !noise_psd.is_finite() {
        return Err(Error::InvalidParameter("noise spectral density must be non-negative"));
    }
    let sigma = (noise_psd / (2.0 * axis.step())).sqrt();
    let values = (0..axis.count())
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(sigma * re, sigma * im)
        })
        .collect();
    SampledSignal::new(*axis, values)
}

/// Filtered signal `A₀·F f` with `A₀ = √signal_energy`.
pub fn filtered_signal(cfg: &NoiseEnsembleConfig, spec: &FilterSpec) -> Result<SampledSignal> {
    let a0 = C64::new(cfg.signal_energy.sqrt(), 0.0);
    apply_filter(spec, &cfg.signal_mode.scaled(a0))
}

/// Energies of the trials in `trials`. Any partition of `0..cfg.trials()`
/// yields the same per-trial values, so callers may split the range across
/// workers and concatenate in order.
pub fn run_trials(
    cfg: &NoiseEnsembleConfig,
    spec: &FilterSpec,
    signal_out: &SampledSignal,
    trials: Range<usize>,
) -> Result<Vec<TrialEnergy>> {
    let axis = *cfg.axis();
    let mut out = Vec::with_capacity(trials.len());
    for k in trials {
        let mut rng = trial_rng(cfg.seed, k as u64);
        let y = sample_white_noise(&axis, cfg.noise_psd, &mut rng)?;
        let y_out = apply_filter(spec, &y)?;
        let total = y_out.add(signal_out)?;
        out.push(TrialEnergy { noise: y_out.energy(), total: total.energy() });
    }
    Ok(out)
}

/// Ensemble statistics from the energies of all trials, in trial order.
pub fn summarize(cfg: &NoiseEnsembleConfig, w_signal: f64, energies: &[TrialEnergy]) -> Result<EnergyReport> {
    if energies.len() != cfg.trials {
        return Err(Error::InsufficientTrials { got: energies.len(), required: cfg.trials });
    }
    let noise: Vec<f64> = energies.iter().map(|e| e.noise).collect();
    let total: Vec<f64> = energies.iter().map(|e| e.total).collect();
    let (w_noise_mean, w_noise_stderr) = mean_stderr(&noise);
    let (w_total_mean, w_total_stderr) = mean_stderr(&total);
    let (snr_empirical, snr_stderr) = if w_noise_mean > 0.0 {
        let snr = w_signal / w_noise_mean;
        (snr, snr * w_noise_stderr / w_noise_mean)
    } else if w_signal > 0.0 {
        (f64::INFINITY, 0.0)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(EnergyReport {
        w_total_mean,
        w_total_stderr,
        w_signal,
        w_noise_mean,
        w_noise_stderr,
        snr_empirical,
        snr_stderr,
        trials: cfg.trials,
        seed: cfg.seed,
    })
}

/// Signal energy, mean noise energy and empirical SNR over the ensemble.
pub fn run_ensemble(cfg: &NoiseEnsembleConfig, spec: &FilterSpec) -> Result<EnergyReport> {
    let signal_out = filtered_signal(cfg, spec)?;
    let energies = run_trials(cfg, spec, &signal_out, 0..cfg.trials)?;
    summarize(cfg, signal_out.energy(), &energies)
}

/// Sum in a fixed binary tree over the slice index.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 8 {
        return x.iter().sum();
    }
    let mid = x.len() / 2;
    pairwise_sum(&x[..mid]) + pairwise_sum(&x[mid..])
}

/// Mean and standard error of the mean.
fn mean_stderr(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = pairwise_sum(x) / n;
    if x.len() < 2 {
        return (mean, f64::NAN);
    }
    let dev: Vec<f64> = x.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRequest {
    pub axis: SampledAxis,
    pub noise_psd: f64,
    pub trials: usize,
    pub seed: u64,
    /// Reference times `t`, snapped to grid nodes.
    pub times: Vec<f64>,
    /// Lags `τ`, snapped to multiples of the grid step.
    pub lags: Vec<f64>,
}

/// Two-time correlation `⟨E*_out(t+τ) E_out(t)⟩`, row-major over
/// `(times, lags)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEstimate {
    pub times: Vec<f64>,
    pub lags: Vec<f64>,
    pub estimate: Vec<C64>,
    /// Standard errors of the real and imaginary parts.
    pub stderr: Vec<(f64, f64)>,
    pub analytic: Vec<C64>,
}

impl CorrelationEstimate {
    pub fn get(&self, ti: usize, li: usize) -> (C64, C64) {
        let k = ti * self.lags.len() + li;
        (self.estimate[k], self.analytic[k])
    }

    /// Largest deviation from the analytic form in standard errors, taken
    /// over real and imaginary parts. Components with zero spread count only
    /// if they disagree.
    pub fn max_z(&self) -> f64 {
        let mut worst = 0.0f64;
        for ((e, a), (sr, si)) in self.estimate.iter().zip(&self.analytic).zip(&self.stderr) {
            for (d, s) in [((e.re - a.re).abs(), *sr), ((e.im - a.im).abs(), *si)] {
                let z = if s > 0.0 {
                    d / s
                } else if d > 1e-12 * a.norm().max(1e-300) {
                    f64::INFINITY
                } else {
                    0.0
                };
                worst = worst.max(z);
            }
        }
        worst
    }
}

/// Ensemble estimate of the filtered-noise correlation of a frequency-first
/// sequential filter, with `N_y Q(t+τ) Q(t) ∫R*(s+τ)R(s) ds` alongside.
pub fn filtered_noise_correlation(spec: &FilterSpec, req: &CorrelationRequest) -> Result<CorrelationEstimate> {
    let FilterKind::Sif { spectral, temporal, order: StageOrder::FrequencyFirst } = spec.kind() else {
        return Err(Error::InvalidParameter("correlation needs a frequency-first sequential filter"));
    };
    req.axis.expect(Domain::Time)?;
    if req.trials < MIN_CORRELATION_TRIALS {
        return Err(Error::InsufficientTrials { got: req.trials, required: MIN_CORRELATION_TRIALS });
    }
    let step = req.axis.step();
    let snap = |x: f64| -> Result<isize> {
        let k = (x / step).round();
        if (x - k * step).abs() > 1e-6 * step {
            return Err(Error::InvalidParameter("correlation times and lags must sit on grid nodes"));
        }
        Ok(k as isize)
    };
    let n = req.axis.count() as isize;
    let t0 = snap(req.axis.start())?;
    let mut pairs = Vec::with_capacity(req.times.len() * req.lags.len());
    let mut times = Vec::with_capacity(req.times.len());
    let mut lags = Vec::with_capacity(req.lags.len());
    for &l in &req.lags {
        lags.push(snap(l)? as f64 * step);
    }
    for &t in &req.times {
        let i = snap(t)? - t0;
        times.push(req.axis.point(i.clamp(0, n - 1) as usize));
        for &l in &req.lags {
            let j = i + snap(l)?;
            for idx in [i, j] {
                if idx < 0 || idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx.unsigned_abs(), len: n as usize });
                }
            }
            pairs.push((i as usize, j as usize));
        }
    }

    let loss = spec.insertion_loss() * spec.insertion_loss();
    let mut re = alloc::vec![Vec::with_capacity(req.trials); pairs.len()];
    let mut im = alloc::vec![Vec::with_capacity(req.trials); pairs.len()];
    for k in 0..req.trials {
        let mut rng = trial_rng(req.seed, k as u64);
        let y = sample_white_noise(&req.axis, req.noise_psd, &mut rng)?;
        let e = apply_filter(spec, &y)?;
        let v = e.values();
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let z = v[j].conj() * v[i];
            re[p].push(z.re);
            im[p].push(z.im);
        }
    }
    let mut estimate = Vec::with_capacity(pairs.len());
    let mut stderr = Vec::with_capacity(pairs.len());
    let mut analytic = Vec::with_capacity(pairs.len());
    for (p, &(i, j)) in pairs.iter().enumerate() {
        let (mr, sr) = mean_stderr(&re[p]);
        let (mi, si) = mean_stderr(&im[p]);
        estimate.push(C64::new(mr, mi));
        stderr.push((sr, si));
        let (t, s) = (req.axis.point(i), req.axis.point(j));
        let q = temporal.gate(s) * temporal.gate(t);
        analytic.push(spectral.autocorrelation(s - t) * (req.noise_psd * loss * q));
    }
    Ok(CorrelationEstimate { times, lags, estimate, stderr, analytic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{SpectralProfile, TemporalProfile};

    fn gaussian_pulse(axis: SampledAxis, width: f64) -> SampledSignal {
        SampledSignal::from_fn(axis, |t| C64::new((-t * t / (2.0 * width * width)).exp(), 0.0))
            .normalized()
            .unwrap()
    }

    #[test]
    fn noise_variance_and_zero() {
        let ax = SampledAxis::centered(Domain::Time, 0.01, 4096).unwrap();
        let mut rng = trial_rng(7, 0);
        let y = sample_white_noise(&ax, 1.0, &mut rng).unwrap();
        let per: Vec<f64> = y.values().iter().map(|v| v.norm_sqr() * 0.01).collect();
        let (m, se) = mean_stderr(&per);
        assert!((m - 1.0).abs() < 3.0 * se, "{m} {se}");
        let var = y.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / 4096.0;
        assert!((var - 100.0).abs() < 5.0, "{var}");
        let z = sample_white_noise(&ax, 0.0, &mut rng).unwrap();
        assert!(z.values().iter().all(|v| *v == C64::new(0.0, 0.0)));
        let f = SampledAxis::centered(Domain::AngularFrequency, 0.01, 16).unwrap();
        assert!(sample_white_noise(&f, 1.0, &mut rng).is_err());
    }

    #[test]
    fn streams_are_uncorrelated() {
        let ax = SampledAxis::centered(Domain::Time, 0.01, 4096).unwrap();
        let a = sample_white_noise(&ax, 1.0, &mut trial_rng(1, 0)).unwrap();
        let b = sample_white_noise(&ax, 1.0, &mut trial_rng(2, 0)).unwrap();
        let c = sample_white_noise(&ax, 1.0, &mut trial_rng(1, 1)).unwrap();
        for other in [&b, &c] {
            let r = a.inner(other).unwrap().norm() / (a.norm() * other.norm());
            assert!(r < 3.0 / 64.0, "{r}");
        }
        let again = sample_white_noise(&ax, 1.0, &mut trial_rng(1, 0)).unwrap();
        assert_eq!(a, again);
    }

    #[test]
    fn pairwise_matches_naive() {
        let x: Vec<f64> = (0..1001).map(|i| (i as f64 * 0.37).sin()).collect();
        let naive: f64 = x.iter().sum();
        assert!((pairwise_sum(&x) - naive).abs() < 1e-12);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn config_validation() {
        let ax = SampledAxis::centered(Domain::Time, 0.05, 256).unwrap();
        let f = gaussian_pulse(ax, 0.5);
        assert!(NoiseEnsembleConfig::new(1.0, 1.0, f.clone(), 0, 1).is_err());
        assert!(NoiseEnsembleConfig::new(-1.0, 1.0, f.clone(), 10, 1).is_err());
        assert!(NoiseEnsembleConfig::new(1.0, 1.0, f.scaled(C64::new(1.1, 0.0)), 10, 1).is_err());
        assert!(NoiseEnsembleConfig::new(1.0, 1.0, f, 10, 1).is_ok());
    }

    #[test]
    fn coherent_unit_mode_collects_one_mode_of_noise() {
        let ax = SampledAxis::centered(Domain::Time, 0.05, 256).unwrap();
        let f = gaussian_pulse(ax, 0.5);
        let spec = FilterSpec::separable(f.clone(), f.clone(), 1.0).unwrap();
        let cfg = NoiseEnsembleConfig::new(1.0, 4.0, f, 2000, 3).unwrap();
        let r = run_ensemble(&cfg, &spec).unwrap();
        assert!((r.w_signal - 4.0).abs() < 1e-9);
        assert!((r.w_noise_mean - 1.0).abs() < 3.0 * r.w_noise_stderr, "{r:?}");
        let cross = r.w_total_mean - r.w_signal - r.w_noise_mean;
        assert!(cross.abs() < 3.0 * r.w_total_stderr, "{r:?}");
    }

    #[test]
    fn identity_gate_conserves_energy() {
        let ax = SampledAxis::centered(Domain::Time, 0.05, 256).unwrap();
        let f = gaussian_pulse(ax, 0.5);
        let spec = FilterSpec::temporal_gate(TemporalProfile::rectangular(1e3).unwrap());
        let cfg = NoiseEnsembleConfig::new(2.0, 0.0, f, 500, 11).unwrap();
        let r = run_ensemble(&cfg, &spec).unwrap();
        // span 256Δt times grid bandwidth 1/Δt
        let expect = 2.0 * 256.0;
        assert!((r.w_noise_mean - expect).abs() < 3.0 * r.w_noise_stderr, "{r:?}");
    }

    #[test]
    fn split_runs_are_bit_identical() {
        let ax = SampledAxis::centered(Domain::Time, 0.05, 256).unwrap();
        let f = gaussian_pulse(ax, 0.5);
        let spec = FilterSpec::sif(
            SpectralProfile::gaussian(1.0).unwrap(),
            TemporalProfile::gaussian(1.0).unwrap(),
            StageOrder::FrequencyFirst,
        );
        let cfg = NoiseEnsembleConfig::new(1.0, 1.0, f, 64, 5).unwrap();
        let s = filtered_signal(&cfg, &spec).unwrap();
        let whole = run_trials(&cfg, &spec, &s, 0..64).unwrap();
        let mut parts = run_trials(&cfg, &spec, &s, 0..17).unwrap();
        parts.extend(run_trials(&cfg, &spec, &s, 17..64).unwrap());
        assert_eq!(whole, parts);
        let a = summarize(&cfg, s.energy(), &whole).unwrap();
        let b = run_ensemble(&cfg, &spec).unwrap();
        assert_eq!(a, b);
        assert!(summarize(&cfg, s.energy(), &whole[..10]).is_err());
    }

    #[test]
    fn correlation_rejects_bad_requests() {
        let ax = SampledAxis::centered(Domain::Time, 0.05, 256).unwrap();
        let spec = FilterSpec::sif(
            SpectralProfile::gaussian(1.0).unwrap(),
            TemporalProfile::gaussian(1.0).unwrap(),
            StageOrder::FrequencyFirst,
        );
        let req = CorrelationRequest { axis: ax, noise_psd: 1.0, trials: 999, seed: 0, times: alloc::vec![0.0], lags: alloc::vec![0.0] };
        assert!(matches!(filtered_noise_correlation(&spec, &req), Err(Error::InsufficientTrials { .. })));
        let swapped = crate::filter::compose_order_swap(&spec).unwrap();
        let ok = CorrelationRequest { trials: 1000, ..req.clone() };
        assert!(filtered_noise_correlation(&swapped, &ok).is_err());
        let off = CorrelationRequest { lags: alloc::vec![0.013], ..ok.clone() };
        assert!(filtered_noise_correlation(&spec, &off).is_err());
        let out = CorrelationRequest { lags: alloc::vec![100.0], ..ok };
        assert!(filtered_noise_correlation(&spec, &out).is_err());
    }

    #[test]
    fn zero_noise_correlation_is_zero() {
        let ax = SampledAxis::centered(Domain::Time, 0.05, 256).unwrap();
        let spec = FilterSpec::sif(
            SpectralProfile::gaussian(1.0).unwrap(),
            TemporalProfile::gaussian(1.0).unwrap(),
            StageOrder::FrequencyFirst,
        );
        let req = CorrelationRequest { axis: ax, noise_psd: 0.0, trials: 1000, seed: 0, times: alloc::vec![0.0, 0.5], lags: alloc::vec![0.0, 0.1] };
        let c = filtered_noise_correlation(&spec, &req).unwrap();
        assert!(c.estimate.iter().all(|z| z.norm() == 0.0));
        assert_eq!(c.max_z(), 0.0);
    }
}
