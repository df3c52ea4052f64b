use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use super::curve::{validate_grid, validate_positive, ArcLengthCurve, CurveSource, Point};
use crate::error::{invalid, Result};
use crate::quadrature::periodic_antiderivative;

/// Two circular arcs of radius `R`, each of length `L/2`, meeting at corners
/// on the y-axis.
///
/// The right arc has its centre at `(-R cos(L/4R), 0)`, the left one at
/// `(R cos(L/4R), 0)`. Lens-shaped for `R > L/2π`, apple-shaped (reflex
/// corners) for `L/4π < R < L/2π`, the circle at `R = L/2π`. Sampling starts
/// at the lower corner, so the corners sit at indices `0` and `N/2`.
pub fn build_lens(radius: f64, length: f64, grid: usize) -> Result<ArcLengthCurve> {
    validate_positive("radius", radius)?;
    validate_positive("length", length)?;
    validate_grid(grid)?;
    if radius <= length / (4.0 * PI) {
        return Err(invalid(format!(
            "lens radius {radius} must exceed L/4π = {}",
            length / (4.0 * PI)
        )));
    }
    let half_angle = length / (4.0 * radius);
    let offset = radius * half_angle.cos();
    let half = grid / 2;
    let h = length / grid as f64;
    let points = (0..grid)
        .map(|i| {
            if i < half {
                let phi = -half_angle + i as f64 * h / radius;
                [-offset + radius * phi.cos(), radius * phi.sin()]
            } else {
                let phi = PI - half_angle + (i - half) as f64 * h / radius;
                [offset + radius * phi.cos(), radius * phi.sin()]
            }
        })
        .collect();
    let corners = if (radius - length / (2.0 * PI)).abs() <= 1e-14 * radius {
        Vec::new()
    } else {
        vec![0, half]
    };
    Ok(ArcLengthCurve::from_samples(length, points, [0.0, 0.0], CurveSource::Lens)?.with_corners(corners))
}

/// Segment of length `a`, U-turn of radius `r`, segment of length `b` back,
/// second U-turn.
///
/// The tangent turns by exactly 2π, so `β(0) = β(L)`, but the curve only
/// closes when `a = b`; its endpoint gap is `(a - b, 0)`. `L = a + b + 2πr`.
pub fn build_paperclip(a: f64, b: f64, r: f64, grid: usize) -> Result<ArcLengthCurve> {
    validate_positive("a", a)?;
    validate_positive("b", b)?;
    validate_positive("r", r)?;
    validate_grid(grid)?;
    let turn = PI * r;
    let length = a + b + 2.0 * turn;
    let h = length / grid as f64;
    let at = |s: f64| -> Point {
        if s < a {
            [s, 0.0]
        } else if s < a + turn {
            let phi = -0.5 * PI + (s - a) / r;
            [a + r * phi.cos(), r + r * phi.sin()]
        } else if s < a + turn + b {
            [a - (s - a - turn), 2.0 * r]
        } else {
            let phi = 0.5 * PI + (s - a - turn - b) / r;
            [a - b + r * phi.cos(), r + r * phi.sin()]
        }
    };
    let points = (0..grid).map(|i| at(i as f64 * h)).collect();
    ArcLengthCurve::from_samples(length, points, [a - b, 0.0], CurveSource::Paperclip)
}

/// Ellipse with semi-axes in ratio `axis_ratio : 1`, scaled to perimeter
/// `length` and resampled to uniform arc length.
///
/// Arc length as a function of the angle parameter is integrated spectrally
/// and inverted by Newton's method at each grid point.
pub fn build_ellipse(axis_ratio: f64, length: f64, grid: usize) -> Result<ArcLengthCurve> {
    validate_positive("axis ratio", axis_ratio)?;
    validate_positive("length", length)?;
    validate_grid(grid)?;
    let (ax, by) = (axis_ratio, 1.0);
    let speed = |t: f64| (ax * t.sin()).hypot(by * t.cos());
    let fine = 8192.max(grid);
    let samples: Vec<Complex64> = (0..fine)
        .map(|j| Complex64::new(speed(2.0 * PI * j as f64 / fine as f64), 0.0))
        .collect();
    let (mean, primitive) = periodic_antiderivative(&samples, 2.0 * PI);
    let perimeter = mean.re * 2.0 * PI;
    let scale = length / perimeter;
    // s(t) = mean·t + periodic part; the periodic part is evaluated by
    // trigonometric interpolation through its Fourier coefficients.
    let periodic: Vec<f64> = primitive.iter().map(|z| z.re).collect();
    let coeffs = real_fourier(&periodic);
    let arc = |t: f64| mean.re * t + eval_fourier(&coeffs, t);
    let points = (0..grid)
        .map(|i| {
            let target = perimeter * i as f64 / grid as f64;
            let mut t = target / mean.re;
            for _ in 0..50 {
                let step = (arc(t) - target) / speed(t);
                t -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            [scale * ax * t.cos(), scale * by * t.sin()]
        })
        .collect();
    ArcLengthCurve::from_samples(length, points, [0.0, 0.0], CurveSource::Ellipse)
}

/// Real trigonometric coefficients `(a_k, b_k)` of equispaced samples on `[0, 2π)`.
fn real_fourier(values: &[f64]) -> Vec<(f64, f64)> {
    use rustfft::FftPlanner;
    let m = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::<f64>::new().plan_fft_forward(m).process(&mut buf);
    let keep = (m / 2).min(512);
    (0..keep)
        .map(|k| {
            let c = buf[k] / m as f64;
            if k == 0 {
                (c.re, 0.0)
            } else {
                (2.0 * c.re, -2.0 * c.im)
            }
        })
        .collect()
}

fn eval_fourier(coeffs: &[(f64, f64)], t: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, (a, b))| {
            let (s, c) = (k as f64 * t).sin_cos();
            a * c + b * s
        })
        .sum()
}
