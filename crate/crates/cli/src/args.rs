use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "tffilter", version, about = "Schmidt analysis of time-frequency filters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singular values of a sequential filter.
    Decompose(DecomposeArgs),
    /// Efficiency and discriminativity over a time-bandwidth sweep.
    Tradeoff(TradeoffArgs),
    /// Time profile of one input or output mode.
    Modes(ModesArgs),
    /// Monte-Carlo SNR of the filter's leading mode in white noise.
    Snr(SnrArgs),
    /// Normalized key rate against background noise.
    Qkd(QkdArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Gaussian,
    Slepian,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Slepian => "slepian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    /// Spectral window, then time gate.
    Ff,
    /// Time gate, then spectral window.
    Tf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    /// Closed forms (Gaussian) or the prolate eigenproblem (rectangular).
    Analytic,
    /// SVD of the discretized kernel with grid refinement.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Input,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; standard output when absent. A `.manifest.json` sidecar
    /// is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long, value_enum)]
    pub filter: Family,
    /// Time-bandwidth product, as a number or as "X/2pi".
    #[arg(long, value_parser = parse_bt)]
    pub bt: f64,
    #[arg(long, default_value_t = 10)]
    pub n_modes: usize,
    #[arg(long, value_enum, default_value = "ff")]
    pub order: Order,
    #[arg(long, value_enum, default_value = "analytic")]
    pub backend: Backend,
    /// Relative change of the leading singular value that ends grid refinement.
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct TradeoffArgs {
    #[arg(long, value_enum)]
    pub filter: Family,
    #[arg(long, value_parser = parse_bt)]
    pub bt_min: f64,
    #[arg(long, value_parser = parse_bt)]
    pub bt_max: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "analytic")]
    pub backend: Backend,
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ModesArgs {
    #[arg(long, value_enum)]
    pub filter: Family,
    /// Bandwidth parameter c = (π/2)BT.
    #[arg(long, conflicts_with = "bt", required_unless_present = "bt")]
    pub c: Option<f64>,
    #[arg(long, value_parser = parse_bt)]
    pub bt: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub mode: usize,
    #[arg(long, value_enum, default_value = "input")]
    pub which: Which,
    #[arg(long, value_enum, default_value = "ff")]
    pub order: Order,
    /// Half-width of the time window, in units of the gate duration T.
    #[arg(long, default_value_t = 2.0)]
    pub span: f64,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SnrArgs {
    #[arg(long, value_enum)]
    pub filter: Family,
    #[arg(long, value_parser = parse_bt)]
    pub bt: f64,
    #[arg(long, value_enum, default_value = "ff")]
    pub order: Order,
    /// Signal energy |A₀|².
    #[arg(long, default_value_t = 10.0)]
    pub signal_energy: f64,
    /// Noise energy per unit time-bandwidth N_y.
    #[arg(long, default_value_t = 1.0)]
    pub noise_psd: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct QkdArgs {
    /// gaussian, slepian, point:ETA,XI, or all.
    #[arg(long)]
    pub filter: String,
    #[arg(long)]
    pub ny_min: f64,
    #[arg(long)]
    pub ny_max: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "log")]
    pub spacing: Spacing,
    /// Report the best efficiency per noise level instead of full curves.
    #[arg(long)]
    pub optimize: bool,
    /// Efficiency samples per curve without --optimize.
    #[arg(long, default_value_t = 999)]
    pub eta_points: usize,
    #[command(flatten)]
    pub output: Output,
}

/// A positive real, or `X/2pi`.
pub fn parse_bt(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let v = match t.strip_suffix("/2pi").or_else(|| t.strip_suffix("/2π")) {
        Some(num) => num.trim().parse::<f64>().map(|x| x / (2.0 * std::f64::consts::PI)),
        None => t.parse::<f64>(),
    }
    .map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be positive".into())
    }
}
