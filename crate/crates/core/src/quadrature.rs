//! Quadrature rules shared by the geometry, chord and spectral code.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre rule on `[a, b]` with `panels` equal panels.
pub fn gauss_legendre_composite(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    let width = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let mid = lo + 0.5 * width;
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + 0.5 * width * xi, 0.5 * width * wi));
        }
    }
    out
}

/// Weights `R_k` of the periodic product rule
/// `∫₀^{2π} ln(4 sin²((t_i - τ)/2)) f(τ) dτ ≈ Σ_j R_{|i-j|} f(t_j)`
/// on `N = 2n` equispaced nodes (Kress).
pub fn kress_log_weights(grid: usize) -> Vec<f64> {
    assert!(grid >= 2 && grid % 2 == 0);
    let n = grid / 2;
    let nf = n as f64;
    (0..grid)
        .map(|k| {
            let t = PI * k as f64 / nf;
            let mut acc = 0.0;
            for m in 1..n {
                acc += (m as f64 * t).cos() / m as f64;
            }
            let nyquist = if k % 2 == 0 { 1.0 } else { -1.0 };
            -2.0 * PI / nf * acc - PI / (nf * nf) * nyquist
        })
        .collect()
}

const GREGORY: [f64; 6] = [
    1.0 / 12.0,
    1.0 / 24.0,
    19.0 / 720.0,
    3.0 / 160.0,
    863.0 / 60480.0,
    275.0 / 24192.0,
];

/// Gregory-corrected trapezoid sum over equispaced samples of one panel.
///
/// The rule is exact for polynomials of degree up to the number of
/// corrections used (six for panels with at least 13 samples, fewer for
/// shorter panels).
pub fn gregory(samples: &[f64], h: f64) -> f64 {
    let n = samples.len();
    match n {
        0 | 1 => return 0.0,
        2 => return 0.5 * h * (samples[0] + samples[1]),
        _ => {}
    }
    let mut sum: f64 = samples.iter().sum::<f64>() - 0.5 * (samples[0] + samples[n - 1]);
    let order = GREGORY.len().min((n - 1) / 2);
    for (j, g) in GREGORY.iter().enumerate().take(order) {
        let j = j + 1;
        let mut fwd = 0.0;
        let mut bwd = 0.0;
        let mut binom = 1.0;
        for i in 0..=j {
            let sign = if (j - i) % 2 == 0 { 1.0 } else { -1.0 };
            fwd += sign * binom * samples[i];
            let sign_b = if i % 2 == 0 { 1.0 } else { -1.0 };
            bwd += sign_b * binom * samples[n - 1 - i];
            binom = binom * (j - i) as f64 / (i + 1) as f64;
        }
        let left = if j % 2 == 1 { *g } else { -*g };
        sum += left * fwd - g * bwd;
    }
    h * sum
}

/// Mean and zero-mean antiderivative of a periodic sampled function.
///
/// Given `f(t_j)`, `t_j = j·P/M`, returns `(c, F)` with `c` the mean value of
/// `f` and `F_j = ∫₀^{t_j} (f(t) - c) dt`, computed by integrating the
/// trigonometric interpolant term by term.
pub fn periodic_antiderivative(samples: &[Complex64], period: f64) -> (Complex64, Vec<Complex64>) {
    let m = samples.len();
    assert!(m >= 2);
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(m);
    let inverse = planner.plan_fft_inverse(m);
    let mut buf = samples.to_vec();
    forward.process(&mut buf);
    let scale = 1.0 / m as f64;
    let mean = buf[0] * scale;
    let mut offset = Complex64::new(0.0, 0.0);
    for (k, c) in buf.iter_mut().enumerate() {
        let freq = if k <= m / 2 { k as i64 } else { k as i64 - m as i64 };
        if k == 0 || (m % 2 == 0 && k == m / 2) {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        let factor = Complex64::new(0.0, -period / (2.0 * PI * freq as f64));
        *c *= factor * scale;
        offset += *c;
    }
    inverse.process(&mut buf);
    let values = buf.into_iter().map(|v| v - offset).collect();
    (mean, values)
}

/// Trigonometric interpolation of periodic samples onto a finer or coarser
/// equispaced grid of size `target`.
pub fn periodic_resample(samples: &[Complex64], target: usize) -> Vec<Complex64> {
    let m = samples.len();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf = samples.to_vec();
    planner.plan_fft_forward(m).process(&mut buf);
    let mut out = vec![Complex64::new(0.0, 0.0); target];
    let keep = m.min(target);
    let half = keep / 2;
    for k in 0..keep {
        let freq = if k < half || (k == half && keep % 2 == 1) {
            k as i64
        } else {
            k as i64 - keep as i64
        };
        let src = freq.rem_euclid(m as i64) as usize;
        let dst = freq.rem_euclid(target as i64) as usize;
        let mut c = buf[src];
        if keep % 2 == 0 && k == half {
            // split the Nyquist coefficient symmetrically
            c *= 0.5;
            out[(-freq).rem_euclid(target as i64) as usize] += c;
        }
        out[dst] += c;
    }
    planner.plan_fft_inverse(target).process(&mut out);
    let scale = 1.0 / m as f64;
    out.iter().map(|v| v * scale).collect()
}
