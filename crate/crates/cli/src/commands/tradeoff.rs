use tffilter_core::gaussian::gaussian_tradeoff;
use tffilter_core::metrics::figures_with_total;
use tffilter_core::slepian::slepian_tradeoff;

use super::decompose::numeric_singular_values;
use crate::args::{Backend, Family, Order, TradeoffArgs};
use crate::output::{emit, num, positive, usage, CliResult, Manifest, Table};

/// Efficiency and discriminativity of a pulse-gate reference point.
pub const QPG_REFERENCE: (f64, f64) = (0.99, 0.98);

/// `points` values from `lo` to `hi`, evenly spaced in the logarithm.
pub fn log_sweep(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|k| {
            if k == 0 {
                lo
            } else if k == points - 1 {
                hi
            } else {
                (a + (b - a) * k as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

pub fn run(args: &TradeoffArgs) -> CliResult<()> {
    positive("bt-min", args.bt_min)?;
    positive("bt-max", args.bt_max)?;
    positive("rel-tol", args.rel_tol)?;
    if args.bt_max < args.bt_min {
        return Err(usage("--bt-max must not be below --bt-min"));
    }
    if args.points == 0 {
        return Err(usage("--points must be at least 1"));
    }
    let mut manifest = Manifest::new("tradeoff");
    manifest
        .param("filter", args.filter.name())
        .param("bt_min", num(args.bt_min))
        .param("bt_max", num(args.bt_max))
        .param("points", args.points);
    match args.backend {
        Backend::Analytic => manifest.param("backend", "analytic"),
        Backend::Numeric => manifest.param("backend", "numeric").param("rel_tol", num(args.rel_tol)),
    };
    let mut table = Table::new(&["filter", "BT[1]", "eta[1]", "xi[1]", "selectivity[1]"])?;
    for bt in log_sweep(args.bt_min, args.bt_max, args.points) {
        let (eta, xi) = match args.backend {
            Backend::Analytic => match args.filter {
                Family::Gaussian => gaussian_tradeoff(bt),
                Family::Slepian => slepian_tradeoff(bt)?,
            },
            Backend::Numeric => {
                let (l, total, report) = numeric_singular_values(args.filter, bt, Order::Ff, 1, args.rel_tol)?;
                manifest.grid.extend(super::decompose::grid_info(&report));
                let f = figures_with_total(l[0], total, None)?;
                (f.eta, f.xi)
            }
        };
        table.row([args.filter.name().to_string(), num(bt), num(eta), num(xi), num(eta * xi)])?;
    }
    let (eta, xi) = QPG_REFERENCE;
    table.row(["qpg".to_string(), String::new(), num(eta), num(xi), num(eta * xi)])?;
    emit(args.output.out.as_deref(), &table.into_bytes()?, &manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_endpoints_are_exact() {
        let s = log_sweep(0.01, 10.0, 7);
        assert_eq!((s[0], s[6]), (0.01, 10.0));
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(log_sweep(0.3, 5.0, 1), vec![0.3]);
    }
}
