use tffilter_core::qkd::{normalized_key_rate, optimize_over_efficiency, FilterCharacteristic};

use super::tradeoff::{log_sweep, QPG_REFERENCE};
use crate::args::{QkdArgs, Spacing};
use crate::output::{emit, non_negative, num, usage, CliResult, Manifest, Table};

/// Reference point of an ideal pulse gate.
pub const PERFECT_GATE: (f64, f64) = (0.9999, 0.9999);

/// Parse `gaussian`, `slepian`, `point:ETA,XI` or `all` into labelled
/// characteristics.
pub fn parse_families(s: &str) -> CliResult<Vec<(String, FilterCharacteristic)>> {
    let point = |eta: f64, xi: f64| -> CliResult<(String, FilterCharacteristic)> {
        let fc = FilterCharacteristic::fixed_point(eta, xi)?;
        Ok((format!("point:{eta},{xi}"), fc))
    };
    match s.trim() {
        "gaussian" => Ok(vec![("gaussian".into(), FilterCharacteristic::GaussianSif)]),
        "slepian" => Ok(vec![("slepian".into(), FilterCharacteristic::slepian()?)]),
        "all" => Ok(vec![
            ("gaussian".into(), FilterCharacteristic::GaussianSif),
            ("slepian".into(), FilterCharacteristic::slepian()?),
            point(QPG_REFERENCE.0, QPG_REFERENCE.1)?,
            point(PERFECT_GATE.0, PERFECT_GATE.1)?,
        ]),
        other => {
            let body = other
                .strip_prefix("point:")
                .ok_or_else(|| usage(format!("unknown filter '{other}'")))?;
            let (a, b) = body.split_once(',').ok_or_else(|| usage("point filter needs point:ETA,XI"))?;
            let eta = a.trim().parse::<f64>().map_err(|e| usage(format!("point efficiency: {e}")))?;
            let xi = b.trim().parse::<f64>().map_err(|e| usage(format!("point discriminativity: {e}")))?;
            Ok(vec![point(eta, xi)?])
        }
    }
}

pub fn noise_sweep(lo: f64, hi: f64, points: usize, spacing: Spacing) -> CliResult<Vec<f64>> {
    non_negative("ny-min", lo)?;
    non_negative("ny-max", hi)?;
    if hi < lo {
        return Err(usage("--ny-max must not be below --ny-min"));
    }
    if points == 0 {
        return Err(usage("--points must be at least 1"));
    }
    Ok(match spacing {
        Spacing::Log if points > 1 && lo == 0.0 => return Err(usage("log spacing needs --ny-min > 0")),
        Spacing::Log => log_sweep(lo, hi, points),
        Spacing::Linear if points == 1 => vec![lo],
        Spacing::Linear => (0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect(),
    })
}

fn log_rate(rate: f64) -> String {
    if rate > 0.0 {
        num(rate.log10())
    } else {
        String::new()
    }
}

pub fn run(args: &QkdArgs) -> CliResult<()> {
    let families = parse_families(&args.filter)?;
    let sweep = noise_sweep(args.ny_min, args.ny_max, args.points, args.spacing)?;
    if !args.optimize && args.eta_points == 0 {
        return Err(usage("--eta-points must be at least 1"));
    }
    let mut manifest = Manifest::new("qkd");
    manifest
        .param("filter", &args.filter)
        .param("ny_min", num(args.ny_min))
        .param("ny_max", num(args.ny_max))
        .param("points", args.points)
        .param("spacing", match args.spacing {
            Spacing::Log => "log",
            Spacing::Linear => "linear",
        })
        .param("optimize", args.optimize);
    if !args.optimize {
        manifest.param("eta_points", args.eta_points);
    }

    let bytes = if args.optimize {
        let mut table = Table::new(&["filter", "n_y[1]", "eta[1]", "xi[1]", "rate[1]", "log10_rate[1]", "no_key"])?;
        for (label, fc) in &families {
            for &n_y in &sweep {
                let (eta, xi, rate, no_key) = match fc {
                    FilterCharacteristic::FixedPoint { eta, xi } => {
                        let r = normalized_key_rate(*eta, *xi, n_y)?;
                        (*eta, *xi, r, r == 0.0)
                    }
                    _ => {
                        let o = optimize_over_efficiency(fc, n_y)?;
                        (o.eta, o.xi, o.rate, o.no_key)
                    }
                };
                table.row([label.clone(), num(n_y), num(eta), num(xi), num(rate), log_rate(rate), no_key.to_string()])?;
            }
        }
        table.into_bytes()?
    } else {
        let mut table = Table::new(&["filter", "n_y[1]", "eta[1]", "xi[1]", "rate[1]", "log10_rate[1]"])?;
        let etas: Vec<f64> = (1..=args.eta_points).map(|k| k as f64 / (args.eta_points + 1) as f64).collect();
        for (label, fc) in &families {
            for &n_y in &sweep {
                let points: Vec<f64> = match fc {
                    FilterCharacteristic::FixedPoint { eta, .. } => vec![*eta],
                    _ => etas.clone(),
                };
                for eta in points {
                    let xi = fc.xi(eta)?;
                    let rate = normalized_key_rate(eta, xi, n_y)?;
                    table.row([label.clone(), num(n_y), num(eta), num(xi), num(rate), log_rate(rate)])?;
                }
            }
        }
        table.into_bytes()?
    };
    emit(args.output.out.as_deref(), &bytes, &manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parsing() {
        assert_eq!(parse_families("all").unwrap().len(), 4);
        let p = parse_families("point:0.99,0.98").unwrap();
        assert_eq!(p[0].0, "point:0.99,0.98");
        assert!(parse_families("point:0.99").is_err());
        assert!(parse_families("point:1.5,0.5").is_err());
        assert!(parse_families("lorentzian").is_err());
    }

    #[test]
    fn sweeps() {
        assert_eq!(noise_sweep(0.0, 1.0, 3, Spacing::Linear).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(noise_sweep(0.0, 0.0, 1, Spacing::Log).unwrap(), vec![0.0]);
        assert!(noise_sweep(0.0, 1.0, 3, Spacing::Log).is_err());
        assert!(noise_sweep(1.0, 0.1, 3, Spacing::Log).is_err());
    }
}
