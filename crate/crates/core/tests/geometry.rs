use std::f64::consts::PI;

use leaky_core::geometry::{
    build_circle, build_ellipse, build_from_curvature, build_lens, close_curve, close_curve_with, circle_chord,
    ArcLengthCurve, CurvatureSpec, FourierMode,
};
use leaky_core::Error;
use proptest::prelude::*;

fn closure_integrals(spec: &CurvatureSpec, samples: usize) -> (f64, f64) {
    let h = spec.length() / samples as f64;
    (0..samples).fold((0.0, 0.0), |(c, s), j| {
        let beta = spec.bending_angle(j as f64 * h);
        (c + beta.cos() * h, s + beta.sin() * h)
    })
}

#[test]
fn circle_examples() {
    let c = build_circle(2.0 * PI, 64).unwrap();
    assert!((c.chord(0, 32) - 2.0).abs() < 1e-14);
    assert!((c.chord(3, 16) - 2f64.sqrt()).abs() < 1e-14);
    let c = build_circle(1.0, 256).unwrap();
    assert!((c.chord(0, 128) - 1.0 / PI).abs() < 1e-15);
}

#[test]
fn circle_chords_for_every_grid_separation() {
    let l = 3.7;
    let n = 512;
    let c = build_circle(l, n).unwrap();
    for k in 1..n {
        let exact = circle_chord(l, k as f64 * l / n as f64);
        for i in [0, 17, 255, 400] {
            assert!((c.chord(i, k) - exact).abs() <= 1e-12 * exact, "k={k}");
        }
    }
}

#[test]
fn polyline_length_of_built_curves() {
    let l = 2.0 * PI;
    let n = 2048;
    let spec = CurvatureSpec::random(l, &[2, 3, 5], 0.3, 11).unwrap();
    let curves: Vec<ArcLengthCurve> = vec![
        build_circle(l, n).unwrap(),
        build_lens(l / PI, l, n).unwrap(),
        build_lens(l / (3.0 * PI), l, n).unwrap(),
        build_ellipse(1.8, l, n).unwrap(),
        close_curve(&build_from_curvature(&spec, n).unwrap(), &spec).unwrap().0,
    ];
    for c in &curves {
        let rel = (c.polyline_length() - l).abs() / l;
        assert!(rel <= 1e-6, "{:?}: {rel}", c.source());
    }
}

#[test]
fn lens_at_circle_radius_has_circle_chords() {
    let l = 5.0;
    let lens = build_lens(l / (2.0 * PI), l, 400).unwrap();
    for k in 1..=200 {
        let exact = circle_chord(l, k as f64 * l / 400.0);
        for i in [0, 99, 200, 301] {
            assert!((lens.chord(i, k) - exact).abs() <= 1e-10 * exact);
        }
    }
}

#[test]
fn curvature_examples() {
    let l = 2.0 * PI;
    let circle = build_from_curvature(&CurvatureSpec::circle(l).unwrap(), 256).unwrap();
    assert!(circle.closure_defect() <= 1e-10);
    let reference = build_circle(l, 256).unwrap();
    for k in [1, 50, 128] {
        assert!((circle.chord(0, k) - reference.chord(0, k)).abs() < 1e-12);
    }
    let even = CurvatureSpec::new(l, vec![FourierMode { n: 2, a: 0.01, b: 0.0 }]).unwrap();
    assert!(build_from_curvature(&even, 4096).unwrap().closure_defect() <= 1e-6);
    let odd = CurvatureSpec::new(l, vec![FourierMode { n: 1, a: 0.01, b: 0.0 }]).unwrap();
    let defect = build_from_curvature(&odd, 4096).unwrap().closure_defect();
    assert!(defect > 1e-3 && defect < 1e-1, "{defect}");
}

#[test]
fn close_curve_examples() {
    let l = 2.0 * PI;
    let circle = CurvatureSpec::circle(l).unwrap();
    let curve = build_from_curvature(&circle, 128).unwrap();
    let (closed, spec) = close_curve(&curve, &circle).unwrap();
    assert_eq!(spec, circle);
    assert_eq!(closed, curve);

    let spec = CurvatureSpec::new(l, vec![FourierMode { n: 2, a: 0.05, b: 0.0 }]).unwrap();
    let (closed, adjusted) = close_curve(&build_from_curvature(&spec, 4096).unwrap(), &spec).unwrap();
    let first = adjusted.mode(1).unwrap_or(FourierMode { n: 1, a: 0.0, b: 0.0 });
    assert!(first.a.abs() <= 1e-2 && first.b.abs() <= 1e-2);
    let (c, s) = closure_integrals(&adjusted, 4096);
    assert!(c.hypot(s) <= 1e-10 * l);
    assert!(closed.closure_defect() <= 1e-10 * l);

    // a large first-mode defect is not removed within a coarse Newton budget
    let wide = CurvatureSpec::new(l, vec![FourierMode { n: 1, a: 0.5, b: 0.0 }]).unwrap();
    let curve = build_from_curvature(&wide, 256).unwrap();
    assert!(matches!(close_curve_with(&curve, &wide, 3), Err(Error::NotClosable { .. })));
}

#[test]
fn self_intersections_are_flagged_not_rejected() {
    let l = 2.0 * PI;
    let looped = CurvatureSpec::new(l, vec![FourierMode { n: 3, a: 0.0, b: 8.0 }]).unwrap();
    let curve = build_from_curvature(&looped, 512).unwrap();
    assert!(curve.closure_defect() <= 1e-10 * l);
    assert!(curve.self_intersects());
    assert!(!build_ellipse(3.0, l, 512).unwrap().self_intersects());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chords_are_euclidean_invariants(
        angle in -PI..PI,
        tx in -10.0f64..10.0,
        ty in -10.0f64..10.0,
        seed in 0u64..1000,
    ) {
        let spec = CurvatureSpec::random(2.0 * PI, &[2, 3], 0.4, seed).unwrap();
        let curve = build_from_curvature(&spec, 128).unwrap();
        let moved = curve.rigid_motion(angle, [tx, ty]);
        for k in [1usize, 7, 40, 64] {
            for i in 0..128 {
                let a = curve.chord(i, k);
                prop_assert!((moved.chord(i, k) - a).abs() <= 1e-12 * a.max(1.0));
            }
        }
    }

    #[test]
    fn closure_projection_meets_tolerance(seed in 0u64..1000, norm in 0.01f64..0.5) {
        let spec = CurvatureSpec::random(2.0 * PI, &[1, 2, 3, 4], norm, seed).unwrap();
        let curve = build_from_curvature(&spec, 256).unwrap();
        let (closed, adjusted) = close_curve(&curve, &spec).unwrap();
        let (c, s) = closure_integrals(&adjusted, 4096);
        prop_assert!(c.hypot(s) <= 1e-10 * 2.0 * PI);
        prop_assert!(closed.closure_defect() <= 1e-10 * 2.0 * PI);
        prop_assert!(closed.is_closed(1e-10));
    }

    #[test]
    fn sup_norm_bound_is_an_upper_bound(seed in 0u64..1000, norm in 0.01f64..2.0) {
        let spec = CurvatureSpec::random(3.0, &[1, 4, 9], norm, seed).unwrap();
        prop_assert!(spec.sup_norm_bound() >= spec.sup_norm(8192) * (1.0 - 1e-12));
    }
}
