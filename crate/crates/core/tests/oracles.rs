//! Numerical decompositions checked against closed forms and independent solvers.

use std::f64::consts::PI;

use tffilter_core::gaussian::{gaussian_singular_values, gaussian_tradeoff, hermite_gaussian_modes, GaussianSif};
use tffilter_core::metrics::{bt_from_profiles, figures_from_schmidt};
use tffilter_core::slepian::{pswf_solve_legendre, pswf_solve_nystrom, slepian_tradeoff, RectangularSif};
use tffilter_core::{
    build_operator, compose_order_swap, decompose_filter, schmidt_decompose, Domain, FilterSpec, RefineOptions,
    SampledAxis, StageOrder, Truncation,
};

fn numeric(spec: &FilterSpec, count: usize) -> tffilter_core::SchmidtResult {
    let (rows, cols) = spec.default_axes(count).unwrap();
    let op = build_operator(spec, &rows, &cols).unwrap();
    schmidt_decompose(&op, Truncation::Count(40)).unwrap()
}

#[test]
fn mehler_singular_values() {
    for bt in [0.6 / (2.0 * PI), 2.3 / (2.0 * PI), 0.5, 2.0] {
        let sif = GaussianSif::from_bt(bt).unwrap();
        let res = numeric(&sif.filter(StageOrder::FrequencyFirst), 1024);
        let exact = gaussian_singular_values(&sif, 11);
        for (n, (got, want)) in res.singular_values().iter().zip(&exact).enumerate() {
            assert!((got - want).abs() <= 1e-4 * want, "BT={bt} n={n}: {got} vs {want}");
        }
    }
}

#[test]
fn numeric_modes_are_hermite_gaussians() {
    let sif = GaussianSif::from_bt(0.5).unwrap();
    let res = numeric(&sif.filter(StageOrder::FrequencyFirst), 512);
    let axis = *res.input_modes()[0].axis();
    assert_eq!(axis.domain(), Domain::AngularFrequency);
    for n in 0..4 {
        let (phi, _) = hermite_gaussian_modes(&sif, n, &axis).unwrap();
        let overlap = res.input_modes()[n].inner(&phi).unwrap().norm();
        assert!(overlap > 1.0 - 1e-8, "n={n}: {overlap}");
    }
}

#[test]
fn time_bandwidth_identities() {
    for bt in [0.1, 0.5, 1.0, 2.0] {
        let (eta, xi) = gaussian_tradeoff(bt);
        assert!((xi * bt - eta).abs() < 1e-12);
        let (eta, xi) = slepian_tradeoff(bt).unwrap();
        assert!((xi * bt - eta).abs() < 1e-12);

        let g = GaussianSif::from_bt(bt).unwrap().filter(StageOrder::FrequencyFirst);
        let res = numeric(&g, 512);
        let f = figures_from_schmidt(&res, None).unwrap();
        assert!((f.xi * bt - f.eta).abs() < 1e-4, "gaussian {bt}");
        assert!((res.total_sq() - bt_from_profiles(&g).unwrap()).abs() < 1e-4 * bt);
    }
}

#[test]
fn gaussian_tradeoff_identity_over_sweep() {
    let (lo, hi) = (0.01 / (2.0 * PI), 60.0 / (2.0 * PI));
    for k in 0..200 {
        let bt = lo * (hi / lo).powf(k as f64 / 199.0);
        let (eta, xi) = gaussian_tradeoff(bt);
        assert!((xi - (1.0 - eta * eta)).abs() < 1e-12, "{bt}");
    }
}

#[test]
fn prolate_solvers_agree() {
    for c in [0.5, 1.25, 3.0, 5.0] {
        let nodes = 256usize.max((32.0 * c) as usize);
        let a = pswf_solve_nystrom(c, 8, nodes).unwrap();
        let b = pswf_solve_legendre(c, 8).unwrap();
        let (ea, eb) = (a.eigenvalues(), b.eigenvalues());
        for n in 0..=8 {
            let x = ea.get(n).copied().unwrap_or(0.0);
            assert!((x - eb[n]).abs() < 1e-6, "c={c} n={n}: {x} vs {}", eb[n]);
        }
        let full = pswf_solve_legendre(c, 40).unwrap();
        let sum: f64 = full.eigenvalues().iter().sum();
        assert!((sum - 2.0 * c / PI).abs() < 1e-6, "c={c}: {sum}");
    }
}

#[test]
fn order_swap_preserves_spectrum_and_swaps_modes() {
    let specs = [
        GaussianSif::from_bt(0.5).unwrap().filter(StageOrder::FrequencyFirst),
        RectangularSif::from_bt(2.0).unwrap().filter(StageOrder::FrequencyFirst),
    ];
    for spec in specs {
        let swapped = compose_order_swap(&spec).unwrap();
        let a = numeric(&spec, 512);
        let b = numeric(&swapped, 512);
        for n in 0..20 {
            let (x, y) = (a.singular_values()[n], b.singular_values()[n]);
            assert!((x - y).abs() < 1e-8, "n={n}");
        }
        for n in 0..3 {
            let i = a.input_modes()[n].inner(&b.output_modes()[n]).unwrap().norm();
            let o = a.output_modes()[n].inner(&b.input_modes()[n]).unwrap().norm();
            assert!(i > 1.0 - 1e-6 && o > 1.0 - 1e-6, "n={n}: {i} {o}");
        }
    }
}

#[test]
fn refinement_driver_reports_grid() {
    let spec = GaussianSif::from_bt(1.0).unwrap().filter(StageOrder::TimeFirst);
    let res = decompose_filter(&spec, RefineOptions::default()).unwrap();
    let report = res.grid_report();
    assert!(report.converged());
    assert!((res.singular_values()[0] - gaussian_singular_values(&GaussianSif::from_bt(1.0).unwrap(), 1)[0]).abs() < 1e-8);
    assert_eq!(report.rows.domain(), Domain::AngularFrequency);
    let _: SampledAxis = report.cols;
}
