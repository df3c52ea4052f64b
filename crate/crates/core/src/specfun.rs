//! Macdonald function K₀ and the two-dimensional free-resolvent kernel.
//!
//! K₀ is evaluated with the ascending series for `x <= 2` and with the
//! Steed/Temme continued fraction for `x > 2`. Both branches reach full double
//! precision up to a few ulps; the test suite checks them against an
//! independent quadrature of `∫₀^∞ exp(-x cosh t) dt`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_CUTOVER: f64 = 2.0;
const MAX_TERMS: usize = 500;

/// Modified Bessel function of the second kind, order zero.
///
/// Returns 0 once `exp(-x)` underflows. The logarithmic singularity at the
/// origin is the caller's business, so `x <= 0` is a domain error.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("K0 requires x > 0, got {x}")));
    }
    Ok(k0_unchecked(x))
}

/// Free resolvent kernel at energy `-κ²`: `(1/2π) K₀(κ d)`.
pub fn free_kernel(kappa: f64, distance: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
    }
    if !(distance > 0.0) {
        return Err(Error::Domain(format!(
            "free kernel is singular at distance {distance}"
        )));
    }
    Ok(k0_unchecked(kappa * distance) / (2.0 * PI))
}

pub(crate) fn k0_unchecked(x: f64) -> f64 {
    if x <= SERIES_CUTOVER {
        k0_series(x)
    } else if x > 745.0 {
        0.0
    } else {
        k0_continued_fraction(x)
    }
}

/// K₀(x) = -(ln(x/2) + γ) I₀(x) + Σ_{k≥1} H_k (x²/4)^k / (k!)²
fn k0_series(x: f64) -> f64 {
    let t = 0.25 * x * x;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= t / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic < 1e-18 * tail.abs().max(1e-300) && term < 1e-18 * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

/// Steed's method (CF2) specialised to order zero.
fn k0_continued_fraction(x: f64) -> f64 {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() * (-x).exp() / s
}

/// Modified Bessel function of the first kind, order zero, by its power series.
///
/// Only used for the smooth log-coefficient in the Nyström splitting, where
/// the argument is kept below a few tens.
pub(crate) fn bessel_i0(x: f64) -> f64 {
    let t = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= t / (kf * kf);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Smooth remainder `S(x) = K₀(x) + ln(x/2) I₀(x)`, entire in `x²`.
///
/// Evaluated by series for small arguments, where forming the difference
/// from K₀ directly would cancel.
pub(crate) fn k0_regular_part(x: f64) -> f64 {
    let t = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut sum = -EULER_GAMMA;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= t / (kf * kf);
        harmonic += 1.0 / kf;
        let add = term * (harmonic - EULER_GAMMA);
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k0_at_one() {
        let v = bessel_k0(1.0).unwrap();
        assert!((v - 0.421_024_438_240_708_3).abs() < 1e-15);
    }

    #[test]
    fn branches_meet_at_cutover() {
        let below = k0_series(2.0);
        let above = k0_continued_fraction(2.0);
        assert!((below - above).abs() / above < 1e-14, "{below} vs {above}");
    }

    #[test]
    fn small_argument_log_behaviour() {
        for &x in &[1e-4, 1e-5, 1e-6, 1e-7, 1e-8] {
            let k0 = bessel_k0(x).unwrap();
            let resid = k0 + (0.5 * x).ln() + EULER_GAMMA;
            // next term of the expansion is O(x² ln x)
            assert!(resid.abs() < 2.0 * x * x * (1.0 - (x).ln()), "x={x} resid={resid}");
        }
    }

    #[test]
    fn rejects_nonpositive_arguments() {
        assert!(bessel_k0(0.0).is_err());
        assert!(bessel_k0(-1.0).is_err());
        assert!(bessel_k0(f64::NAN).is_err());
        assert!(free_kernel(1.0, 0.0).is_err());
    }

    #[test]
    fn kernel_depends_on_product() {
        let a = free_kernel(1.0, 1.0).unwrap();
        let b = free_kernel(2.0, 0.5).unwrap();
        assert_eq!(a, b);
        assert!((a - 0.421_024_438_240_708_3 / (2.0 * PI)).abs() < 1e-15);
        assert!(free_kernel(1.0, 700.0).unwrap() < 1e-300);
        assert_eq!(bessel_k0(800.0).unwrap(), 0.0);
    }

    #[test]
    fn regular_part_matches_definition() {
        for &x in &[0.01, 0.3, 1.0, 2.5, 6.0] {
            let direct = k0_unchecked(x) + (0.5 * x).ln() * bessel_i0(x);
            let series = k0_regular_part(x);
            assert!((direct - series).abs() < 1e-13 * (1.0 + bessel_i0(x)), "x={x}");
        }
    }

    #[test]
    fn monotone_and_convex_on_grid() {
        let h = 1e-3;
        let mut x = 0.01;
        let mut prev = bessel_k0(x).unwrap();
        while x < 20.0 {
            let next = bessel_k0(x + h).unwrap();
            assert!(next < prev);
            let second = bessel_k0(x - h).unwrap() + next - 2.0 * prev;
            assert!(second >= 0.0, "convexity fails at {x}");
            prev = next;
            x += h;
        }
    }
}
