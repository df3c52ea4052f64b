//! Reference computations shared by the integration tests.

#![allow(dead_code)]

use leaky_core::quadrature::gauss_legendre;

/// Adaptive Gauss–Legendre: a panel is accepted when its 10- and 20-point
/// results agree to `tol` (absolute) or to a few ulps of the panel value,
/// otherwise it is bisected.
pub fn adaptive_quadrature(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let low = gauss_legendre(10);
    let high = gauss_legendre(20);
    let rule = |(x, w): &(Vec<f64>, Vec<f64>), lo: f64, hi: f64| {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        x.iter().zip(w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>() * half
    };
    let mut total = 0.0;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let coarse = rule(&low, lo, hi);
        let fine = rule(&high, lo, hi);
        if (fine - coarse).abs() <= tol.max(4.0 * f64::EPSILON * fine.abs()) || depth >= 30 {
            total += fine;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    total
}

/// `K₀(x) = ∫₀^∞ exp(-x cosh t) dt`, truncated where the integrand has
/// dropped below `1e-30` relative to its value `exp(-x)` at the origin.
pub fn k0_oracle(x: f64) -> f64 {
    let t_max = (1.0 + 69.1 / x).acosh();
    // rough magnitude, only used to set the absolute tolerance
    let scale = (-x).exp() * (std::f64::consts::FRAC_PI_2 / x).sqrt().min(1.0 + x.ln().abs());
    adaptive_quadrature(&|t: f64| (-x * t.cosh()).exp(), 0.0, t_max, 1e-15 * scale)
}
