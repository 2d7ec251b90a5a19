use std::f64::consts::PI;

use tffilter_core::gaussian::{hermite_gaussian, GaussianSif};
use tffilter_core::slepian::{pswf_solve_legendre, slepian_filter_modes, RectangularSif};
use tffilter_core::{Domain, SampledAxis, SampledSignal, C64};

use super::order_name;
use crate::args::{Family, ModesArgs, Order, Which};
use crate::output::{emit, num, positive, usage, AxisInfo, CliResult, Manifest, Table};

/// Mode `n` of the square filter on a time axis. Gaussian modes are
/// `√s HGₙ(st)` with `s` the Mehler scale of the requested side; the global
/// phase `(−i)ⁿ` of the Fourier pair is dropped. Rectangular modes are the
/// band-limited prolate function (window side) or its gated restriction
/// (gate side).
pub fn time_mode(family: Family, bt: f64, order: Order, which: Which, n: usize, axis: &SampledAxis) -> CliResult<SampledSignal> {
    // the spectral window acts on the input for ff and on the output for tf
    let window_side = matches!((order, which), (Order::Ff, Which::Input) | (Order::Tf, Which::Output));
    match family {
        Family::Gaussian => {
            let sif = GaussianSif::from_bt(bt)?;
            let s = if window_side { sif.alpha() } else { sif.beta() };
            let mut values = Vec::with_capacity(axis.count());
            for t in axis.points() {
                values.push(C64::new(s.sqrt() * hermite_gaussian(n, s * t)?, 0.0));
            }
            Ok(SampledSignal::new(*axis, values)?)
        }
        Family::Slepian => {
            let sif = RectangularSif::from_bt(bt)?;
            let sol = pswf_solve_legendre(sif.c(), n)?.with_half_width(sif.tau_half())?;
            let (phi, psi, _) = slepian_filter_modes(&sol, n, axis)?;
            Ok(if window_side { phi } else { psi })
        }
    }
}

pub fn run(args: &ModesArgs) -> CliResult<()> {
    let bt = match (args.c, args.bt) {
        (Some(c), _) => 2.0 * positive("c", c)? / PI,
        (None, Some(bt)) => bt,
        (None, None) => return Err(usage("one of --c or --bt is required")),
    };
    positive("span", args.span)?;
    if args.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let t_half = args.span * bt.sqrt();
    let axis = SampledAxis::symmetric(Domain::Time, t_half, args.points)?;
    let mode = time_mode(args.filter, bt, args.order, args.which, args.mode, &axis)?;

    let mut manifest = Manifest::new("modes");
    manifest
        .param("filter", args.filter.name())
        .param("bt", num(bt))
        .param("mode", args.mode)
        .param("which", match args.which {
            Which::Input => "input",
            Which::Output => "output",
        })
        .param("order", order_name(args.order))
        .param("span", num(args.span))
        .param("points", args.points);
    if let Some(c) = args.c {
        manifest.param("c", num(c));
    }
    manifest.grid.push(AxisInfo::from(&axis));

    let mut table = Table::new(&["t[s]", "re[s^-1/2]", "im[s^-1/2]"])?;
    for (t, v) in axis.points().zip(mode.values()) {
        table.row([num(t), num(v.re), num(v.im)])?;
    }
    emit(args.output.out.as_deref(), &table.into_bytes()?, &manifest)
}
