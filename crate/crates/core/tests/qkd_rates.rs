use tffilter_core::qkd::{
    normalized_key_rate, optimize_over_efficiency, qber, qber_threshold, FilterCharacteristic, REFINE_TOLERANCE,
};

fn sweep() -> Vec<f64> {
    (0..61).map(|k| 10f64.powf(-4.0 + 4.0 * k as f64 / 60.0)).collect()
}

#[test]
fn noiseless_limit() {
    for &(eta, xi) in &[(0.3, 0.9), (0.99, 0.98), (0.5, 0.1)] {
        assert_eq!(qber(0.0, xi).unwrap(), 0.0);
        assert!((normalized_key_rate(eta, xi, 0.0).unwrap() - eta * eta).abs() < 1e-15);
    }
}

#[test]
fn rate_vanishes_exactly_past_threshold() {
    let q_star = qber_threshold();
    assert!((q_star - 0.110028).abs() < 1e-5);
    for i in 0..200 {
        let xi = 0.05 + 0.9 * (i % 20) as f64 / 19.0;
        let n = 0.4 * xi * (i / 20) as f64 / 9.0 + 1e-3 * i as f64;
        let q = qber(n, xi).unwrap();
        if (q - q_star).abs() < 1e-5 {
            continue;
        }
        let zero = normalized_key_rate(0.8, xi, n).unwrap() == 0.0;
        assert_eq!(zero, q >= q_star, "n={n} xi={xi} q={q}");
    }
}

#[test]
fn optimized_curves_are_ordered() {
    let g = FilterCharacteristic::GaussianSif;
    let s = FilterCharacteristic::slepian().unwrap();
    let perfect = FilterCharacteristic::fixed_point(0.9999, 0.9999).unwrap();
    let (mut last_g, mut last_s) = (1.0f64, 1.0f64);
    for n in sweep() {
        let og = optimize_over_efficiency(&g, n).unwrap();
        let os = optimize_over_efficiency(&s, n).unwrap();
        assert!(os.rate >= og.rate * (1.0 - 1e-9), "n={n}: {os:?} {og:?}");
        let p = normalized_key_rate(0.9999, perfect.xi(0.9999).unwrap(), n).unwrap();
        if og.rate > 0.0 || os.rate > 0.0 || p > 0.0 {
            assert!(p >= os.rate.max(og.rate), "n={n}");
        }
        if !og.no_key {
            assert!(og.eta <= last_g + REFINE_TOLERANCE, "n={n}");
            last_g = og.eta;
        }
        if !os.no_key {
            assert!(os.eta <= last_s + REFINE_TOLERANCE, "n={n}");
            last_s = os.eta;
        }
    }
}
