use std::num::NonZeroUsize;
use std::thread;

use serde::Serialize;
use tffilter_core::gaussian::{gaussian_tradeoff, GaussianSif};
use tffilter_core::metrics::analytic_snr;
use tffilter_core::noisesim::{filtered_signal, run_trials, summarize, EnergyReport, NoiseEnsembleConfig, RNG_ALGORITHM};
use tffilter_core::profile::{SpectralProfile, TemporalProfile};
use tffilter_core::slepian::{slepian_tradeoff, RectangularSif};
use tffilter_core::{Domain, FilterSpec, SampledAxis};

use super::modes::time_mode;
use super::{filter_spec, order_name};
use crate::args::{Family, SnrArgs, Which};
use crate::output::{emit, num, positive, usage, AxisInfo, CliError, CliResult, Manifest};

pub const THREADS_ENV: &str = "TF_FILTER_THREADS";

/// Time grid resolving the square filter, its leading mode and the noise band.
pub fn snr_grid(family: Family, bt: f64) -> CliResult<SampledAxis> {
    let (step, span) = match family {
        Family::Gaussian => {
            let sif = GaussianSif::from_bt(bt)?;
            let (b, t) = (sif.bandwidth(), sif.duration());
            let r = SpectralProfile::gaussian(b)?;
            let q = TemporalProfile::gaussian(t)?;
            let band = r.support().hypot(q.spectrum_support().unwrap_or(0.0));
            let step = 0.8 * (1.0 / (10.0 * b)).min(std::f64::consts::PI / band);
            let reach = r.impulse_support().unwrap_or(0.0).max(q.support()).max(9.0 / sif.alpha().min(sif.beta()));
            (step, 3.0 * reach)
        }
        Family::Slepian => {
            let sif = RectangularSif::from_bt(bt)?;
            let t = sif.duration();
            // gate edges on grid nodes
            let limit = (1.0 / (10.0 * sif.bandwidth())).min(t / 64.0);
            let m = (t / (2.0 * limit)).ceil();
            (t / (2.0 * m), 32.0 * t)
        }
    };
    let count = ((span / step).ceil() as usize).next_power_of_two().max(256);
    if count > 1 << 16 {
        return Err(CliError::Numeric(format!("time grid of {count} points needed; filter too extreme")));
    }
    Ok(SampledAxis::centered(Domain::Time, step, count)?)
}

pub fn thread_count() -> CliResult<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<NonZeroUsize>()
            .map(NonZeroUsize::get)
            .map_err(|_| usage(format!("{THREADS_ENV} must be a positive integer"))),
        Err(_) => Ok(thread::available_parallelism().map(NonZeroUsize::get).unwrap_or(1)),
    }
}

/// The ensemble split over `threads` workers. Per-trial generators and
/// pairwise sums make the result independent of the split.
pub fn run_parallel(cfg: &NoiseEnsembleConfig, spec: &FilterSpec, threads: usize) -> CliResult<EnergyReport> {
    let signal_out = filtered_signal(cfg, spec)?;
    let n = cfg.trials();
    let threads = threads.clamp(1, n);
    let chunk = n.div_ceil(threads);
    let parts: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|k| {
                let range = (k * chunk).min(n)..((k + 1) * chunk).min(n);
                let signal_out = &signal_out;
                s.spawn(move || run_trials(cfg, spec, signal_out, range))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut energies = Vec::with_capacity(n);
    for p in parts {
        energies.extend(p?);
    }
    Ok(summarize(cfg, signal_out.energy(), &energies)?)
}

#[derive(Serialize)]
struct SnrReport<'a> {
    manifest: &'a Manifest,
    filter: &'static str,
    bt: f64,
    eta: f64,
    xi: f64,
    signal_energy: f64,
    noise_psd: f64,
    snr_analytic: f64,
    snr_empirical: f64,
    snr_stderr: f64,
    w_signal: f64,
    w_signal_expected: f64,
    w_noise_mean: f64,
    w_noise_stderr: f64,
    w_noise_expected: f64,
    w_total_mean: f64,
    w_total_stderr: f64,
    trials: usize,
    seed: u64,
}

pub fn run(args: &SnrArgs) -> CliResult<()> {
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    positive("noise-psd", args.noise_psd)?;
    if !(args.signal_energy >= 0.0 && args.signal_energy.is_finite()) {
        return Err(usage("--signal-energy must be non-negative"));
    }
    let spec = filter_spec(args.filter, args.bt, args.order)?;
    let axis = snr_grid(args.filter, args.bt)?;
    let mode = time_mode(args.filter, args.bt, args.order, Which::Input, 0, &axis)?.normalized()?;
    let cfg = NoiseEnsembleConfig::new(args.noise_psd, args.signal_energy, mode, args.trials, args.seed)?;
    let report = run_parallel(&cfg, &spec, thread_count()?)?;

    let (eta, xi) = match args.filter {
        Family::Gaussian => gaussian_tradeoff(args.bt),
        Family::Slepian => slepian_tradeoff(args.bt)?,
    };
    let mut manifest = Manifest::new("snr");
    manifest
        .param("filter", args.filter.name())
        .param("bt", num(args.bt))
        .param("order", order_name(args.order))
        .param("signal_energy", num(args.signal_energy))
        .param("noise_psd", num(args.noise_psd))
        .param("trials", args.trials);
    manifest.seed = Some(args.seed);
    manifest.rng = Some(RNG_ALGORITHM);
    manifest.grid.push(AxisInfo::from(&axis));
    let out = SnrReport {
        manifest: &manifest,
        filter: args.filter.name(),
        bt: args.bt,
        eta,
        xi,
        signal_energy: args.signal_energy,
        noise_psd: args.noise_psd,
        snr_analytic: analytic_snr(args.signal_energy, args.noise_psd, xi)?,
        snr_empirical: report.snr_empirical,
        snr_stderr: report.snr_stderr,
        w_signal: report.w_signal,
        w_signal_expected: args.signal_energy * eta,
        w_noise_mean: report.w_noise_mean,
        w_noise_stderr: report.w_noise_stderr,
        w_noise_expected: args.noise_psd * args.bt,
        w_total_mean: report.w_total_mean,
        w_total_stderr: report.w_total_stderr,
        trials: report.trials,
        seed: report.seed,
    };
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    emit(args.output.out.as_deref(), text.as_bytes(), &manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::Order;

    #[test]
    fn thread_split_does_not_change_the_report() {
        let axis = snr_grid(Family::Gaussian, 0.5).unwrap();
        let spec = filter_spec(Family::Gaussian, 0.5, Order::Ff).unwrap();
        let mode = time_mode(Family::Gaussian, 0.5, Order::Ff, Which::Input, 0, &axis).unwrap().normalized().unwrap();
        let cfg = NoiseEnsembleConfig::new(1.0, 10.0, mode, 37, 9).unwrap();
        let a = run_parallel(&cfg, &spec, 1).unwrap();
        let b = run_parallel(&cfg, &spec, 5).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn grids_satisfy_filter_sampling() {
        for family in [Family::Gaussian, Family::Slepian] {
            for bt in [0.05, 0.5, 2.0] {
                let axis = snr_grid(family, bt).unwrap();
                let spec = filter_spec(family, bt, Order::Ff).unwrap();
                let mode = time_mode(family, bt, Order::Ff, Which::Input, 0, &axis).unwrap();
                assert!(tffilter_core::apply_filter(&spec, &mode).is_ok(), "{family:?} {bt}");
            }
        }
    }
}
