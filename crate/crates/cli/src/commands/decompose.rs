use std::f64::consts::PI;

use tffilter_core::gaussian::{gaussian_singular_values, GaussianSif};
use tffilter_core::slepian::pswf_solve_legendre;
use tffilter_core::{decompose_filter, GridReport, RefineOptions, Truncation};

use super::{filter_spec, order_name};
use crate::args::{Backend, DecomposeArgs, Family, Order};
use crate::output::{emit, num, positive, usage, AxisInfo, CliError, CliResult, Manifest, Table};

/// Singular values from the closed forms: `u^{n+1/2}` (Gaussian) or
/// `√βₙ(c)` with `c = (π/2)BT` (rectangular).
pub fn analytic_singular_values(family: Family, bt: f64, count: usize) -> CliResult<Vec<f64>> {
    match family {
        Family::Gaussian => Ok(gaussian_singular_values(&GaussianSif::from_bt(bt)?, count)),
        Family::Slepian => {
            let sol = pswf_solve_legendre(PI / 2.0 * bt, count - 1)?;
            Ok(sol.eigenvalues().iter().map(|b| b.max(0.0).sqrt()).collect())
        }
    }
}

/// Singular values of the discretized kernel, refined until the leading
/// value is stable to `rel_tol`.
pub fn numeric_singular_values(
    family: Family,
    bt: f64,
    order: Order,
    count: usize,
    rel_tol: f64,
) -> CliResult<(Vec<f64>, f64, GridReport)> {
    let spec = filter_spec(family, bt, order)?;
    let opts = RefineOptions { rel_tol, keep: Truncation::Count(count), ..RefineOptions::default() };
    let res = decompose_filter(&spec, opts)?;
    let report = *res.grid_report();
    if !report.converged() {
        return Err(CliError::Numeric(format!(
            "leading singular value changed by {:e} on the finest grid ({} points), above --rel-tol {:e}",
            report.last_change.unwrap_or(f64::NAN),
            report.rows.count().max(report.cols.count()),
            rel_tol
        )));
    }
    Ok((res.singular_values().to_vec(), res.total_sq(), report))
}

pub fn grid_info(report: &GridReport) -> Vec<AxisInfo> {
    vec![AxisInfo::from(&report.rows), AxisInfo::from(&report.cols)]
}

pub fn run(args: &DecomposeArgs) -> CliResult<()> {
    if args.n_modes == 0 {
        return Err(usage("--n-modes must be at least 1"));
    }
    positive("rel-tol", args.rel_tol)?;
    let mut manifest = Manifest::new("decompose");
    manifest
        .param("filter", args.filter.name())
        .param("bt", num(args.bt))
        .param("n_modes", args.n_modes)
        .param("order", order_name(args.order));
    let lambda = match args.backend {
        Backend::Analytic => {
            manifest.param("backend", "analytic");
            analytic_singular_values(args.filter, args.bt, args.n_modes)?
        }
        Backend::Numeric => {
            manifest.param("backend", "numeric").param("rel_tol", num(args.rel_tol));
            let (l, _, report) = numeric_singular_values(args.filter, args.bt, args.order, args.n_modes, args.rel_tol)?;
            manifest.grid = grid_info(&report);
            l
        }
    };
    let mut table = Table::new(&["n[1]", "lambda_n[1]", "lambda_n_sq[1]", "cumulative_sq[1]"])?;
    let mut cumulative = 0.0;
    for (n, l) in lambda.iter().enumerate() {
        cumulative += l * l;
        table.row([n.to_string(), num(*l), num(l * l), num(cumulative)])?;
    }
    emit(args.output.out.as_deref(), &table.into_bytes()?, &manifest)
}
