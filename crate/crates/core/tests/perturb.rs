use std::f64::consts::PI;

use leaky_core::chords::chord_moment;
use leaky_core::geometry::{build_from_curvature, close_curve, CurvatureSpec, FourierMode};
use leaky_core::perturb::{c2_from_curvature, f_n, g_n, i_g, second_order_expansion_audit};
use leaky_core::quadrature::gauss_legendre_composite;
use proptest::prelude::*;

fn single(n: u32, a: f64) -> CurvatureSpec {
    CurvatureSpec::new(2.0 * PI, vec![FourierMode { n, a, b: 0.0 }]).unwrap()
}

#[test]
fn f_n_positive_on_fine_grid() {
    for n in 1..=200 {
        for k in 1..=1000 {
            let v = 0.5 * PI * k as f64 / 1000.0;
            assert!(f_n(n, v).unwrap() > 0.0, "n={n} v={v}");
        }
    }
}

#[test]
fn f_1_has_one_interior_maximum_past_quarter_pi() {
    let count = 2000;
    let values: Vec<f64> = (1..count).map(|k| f_n(1, 0.5 * PI * k as f64 / count as f64).unwrap()).collect();
    let slopes: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let sign_changes = slopes.windows(2).filter(|s| s[0] > 0.0 && s[1] <= 0.0 || s[0] <= 0.0 && s[1] > 0.0).count();
    assert_eq!(sign_changes, 1);
    let argmax = values.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap().0;
    let v_max = 0.5 * PI * (argmax + 1) as f64 / count as f64;
    assert!(v_max > PI / 4.0 && v_max < PI / 2.0);
}

#[test]
fn f_n_examples() {
    assert!((f_n(1, PI / 2.0).unwrap() - (10.0 - 3.0 * PI) / 18.0).abs() < 1e-15);
    assert!((f_n(2, PI / 2.0).unwrap() - PI / 16.0).abs() < 1e-15);
    let v: f64 = 0.3;
    let direct: f64 = gauss_legendre_composite(0.0, v, 8, 20)
        .iter()
        .map(|&(y, w)| w * (v - y) * (2.0 * y).cos() * (3.0 * y).sin())
        .sum();
    assert!((f_n(3, v).unwrap() - direct).abs() < 1e-12);
}

#[test]
fn i_g_single_mode() {
    let l = 2.0 * PI;
    let eps = 0.03;
    let spec = single(3, eps);
    for u in [0.4, 1.3, PI] {
        let (total, rows) = i_g(&spec, u).unwrap();
        let expected = l.powi(5) / (2.0 * PI.powi(4)) * eps * eps / 9.0 * g_n(3, PI * u / l).unwrap();
        assert!((total - expected).abs() <= 1e-14 * expected);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].weight, eps * eps / 9.0);
    }
    assert_eq!(i_g(&CurvatureSpec::circle(l).unwrap(), 1.0).unwrap().0, 0.0);
}

#[test]
fn i_g_positivity_regimes() {
    let l = 2.0 * PI;
    // the first mode alone turns negative near u = L/2, since G₁(π/2) = 1/4 - π²/32
    let first = single(1, 0.01);
    assert!(i_g(&first, l / 4.0).unwrap().0 > 0.0);
    assert!(i_g(&first, l / 2.0).unwrap().0 < 0.0);
    assert!((g_n(1, PI / 2.0).unwrap() - (0.25 - PI * PI / 32.0)).abs() < 1e-15);
}

#[test]
fn curvature_form_examples() {
    let l = 2.0 * PI;
    let bent = single(2, 0.01);
    let circle_value = l.powi(3) / (PI * PI);
    assert!(c2_from_curvature(&bent, l / 2.0).unwrap() < circle_value);
    let circle = CurvatureSpec::circle(l).unwrap();
    for u in [0.5, 2.0, PI] {
        let exact = circle_value * (PI * u / l).sin().powi(2);
        assert!((c2_from_curvature(&circle, u).unwrap() - exact).abs() <= 1e-10);
    }
}

#[test]
fn curvature_form_matches_realized_curve() {
    let n = 1024;
    for seed in 0..4 {
        let spec = CurvatureSpec::random(2.0 * PI, &[2, 3, 4], 0.2, seed).unwrap();
        let (curve, adjusted) = close_curve(&build_from_curvature(&spec, n).unwrap(), &spec).unwrap();
        for k in [128usize, 300, 512] {
            let u = k as f64 * curve.spacing();
            let from_curve = chord_moment(&curve, u, 2.0).unwrap().value;
            let from_spec = c2_from_curvature(&adjusted, u).unwrap();
            assert!((from_curve - from_spec).abs() <= 1e-6, "seed {seed} k {k}");
        }
    }
}

#[test]
fn expansion_audit_examples() {
    let l = 2.0 * PI;
    let circle = second_order_expansion_audit(&CurvatureSpec::circle(l).unwrap(), l / 2.0, 0.02).unwrap();
    assert_eq!(circle.residual, 0.0);
    assert_eq!(circle.verdict(), "consistent");

    // a lone second mode has no cubic term, so the remainder is quartic
    let lone = second_order_expansion_audit(&single(2, 1.0 / l), l / 2.0, 0.02).unwrap();
    assert!(lone.consistent);
    assert!(lone.ratio > 14.0 && lone.ratio < 18.0, "{}", lone.ratio);

    let generic = CurvatureSpec::random(l, &[1, 2, 3, 4, 5], 1.0, 9).unwrap();
    let audit = second_order_expansion_audit(&generic, l / 2.0, 0.02).unwrap();
    assert!(audit.consistent && audit.ratio < 10.0);
    // the part odd in g has no linear term: it shrinks like ε³
    let odd_ratio = (audit.odd_part / audit.odd_part_half).abs();
    assert!(odd_ratio > 7.0 && odd_ratio < 9.0, "{odd_ratio}");
    assert!(audit.odd_part.abs() < 1e-2 * 0.02);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn i_g_positive_without_first_mode(seed in 0u64..10_000, k in 1usize..=64, norm in 0.01f64..1.0) {
        let l = 2.0 * PI;
        let spec = CurvatureSpec::random(l, &[2, 3, 5, 8], norm, seed).unwrap();
        let u = 0.5 * l * k as f64 / 64.0;
        prop_assert!(i_g(&spec, u).unwrap().0 > 0.0);
    }

    #[test]
    fn i_g_positive_up_to_quarter_length(seed in 0u64..10_000, k in 1usize..=64, norm in 0.01f64..1.0) {
        let l = 2.0 * PI;
        let spec = CurvatureSpec::random(l, &[1, 2, 3, 4], norm, seed).unwrap();
        let u = 0.25 * l * k as f64 / 64.0;
        let (total, rows) = i_g(&spec, u).unwrap();
        prop_assert!(total > 0.0);
        // every kernel value is nonnegative in this regime
        prop_assert!(rows.iter().all(|r| r.kernel >= 0.0));
    }
}
