use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geometry::ArcLengthCurve;
use crate::quadrature::kress_log_weights;
use crate::specfun::{bessel_i0, k0_regular_part, k0_unchecked};

/// Closure tolerance (relative to length) required before assembly.
pub const CLOSURE_TOLERANCE: f64 = 1e-10;

/// Largest `κ·|Γ(s) - Γ(s')|` at which the smooth log-coefficient `I₀` is
/// kept. Beyond it the coefficient is switched off by a C^∞ window in the
/// parameter difference, which bounds `I₀` by roughly 430 and keeps the
/// cancellation in the split kernel at a few ulps.
const MAX_SPLIT_ARGUMENT: f64 = 8.0;

/// Quadrature rule used for the log-singular kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureScheme {
    /// Periodic Kress product rule for `ln(4 sin²((t-τ)/2))` times a smooth
    /// coefficient localised to `|t - τ| < window`, periodic trapezoid for
    /// the remainder. `window = π` means no localisation.
    KressLog { window: f64 },
}

/// Nyström matrix of `(α/2π) K₀(κ|Γ(s) - Γ(s')|)` on the arc-length grid.
#[derive(Debug, Clone)]
pub struct BsMatrix {
    data: Vec<f64>,
    size: usize,
    alpha: f64,
    kappa: f64,
    length: f64,
    scheme: QuadratureScheme,
    self_intersecting: bool,
}

impl BsMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn scheme(&self) -> QuadratureScheme {
        self.scheme
    }

    /// Set when the sampled curve crosses itself; assembly still proceeds.
    pub fn self_intersecting(&self) -> bool {
        self.self_intersecting
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut()
            .zip(self.data.chunks_exact(self.size))
            .for_each(|(yi, row)| *yi = row.iter().zip(x).map(|(a, b)| a * b).sum());
    }

    /// Largest `|M_ij - M_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.size {
            for j in (i + 1)..self.size {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

/// Reusable assembly data for one grid size.
#[derive(Debug, Clone)]
pub(crate) struct Assembler {
    log_weights: Vec<f64>,
    self_intersecting: bool,
}

impl Assembler {
    pub(crate) fn new(curve: &ArcLengthCurve, check_intersections: bool) -> Result<Self> {
        if !curve.is_closed(CLOSURE_TOLERANCE) {
            return Err(Error::NotClosed {
                defect: curve.closure_defect(),
                limit: CLOSURE_TOLERANCE * curve.length(),
            });
        }
        Ok(Self {
            log_weights: kress_log_weights(curve.grid_size()),
            self_intersecting: check_intersections && curve.self_intersects(),
        })
    }

    pub(crate) fn self_intersecting(&self) -> bool {
        self.self_intersecting
    }

    pub(crate) fn assemble(&self, curve: &ArcLengthCurve, alpha: f64, kappa: f64) -> Result<BsMatrix> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(invalid(format!("coupling must be positive, got {alpha}")));
        }
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(invalid(format!("kappa must be positive, got {kappa}")));
        }
        let n = curve.grid_size();
        let length = curve.length();
        let points = curve.points();
        let h = 2.0 * PI / n as f64;
        // chord ≤ arc, so κ·r ≤ κ·(L/2π)·|t - τ|
        let window = (MAX_SPLIT_ARGUMENT * 2.0 * PI / (kappa * length)).min(PI);
        let prefactor = alpha / (2.0 * PI) * length / (2.0 * PI);
        let diagonal = prefactor * (-0.5 * self.log_weights[0] + h * (-crate::specfun::EULER_GAMMA + (4.0 * PI / (kappa * length)).ln()));

        let mut data = vec![0.0; n * n];
        data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let pi = points[i];
            for (j, entry) in row.iter_mut().enumerate() {
                if i == j {
                    *entry = diagonal;
                    continue;
                }
                // fill from the upper triangle's formula so both halves agree bitwise
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                let k = b - a;
                let pa = if a == i { pi } else { points[a] };
                let pb = points[b];
                let r = (pb[0] - pa[0]).hypot(pb[1] - pa[1]);
                let z = kappa * r;
                let tau = h * k.min(n - k) as f64;
                let w = window_weight(tau, window);
                let sin_half = (PI * k as f64 / n as f64).sin().abs();
                let (coef, smooth) = if w == 1.0 {
                    let i0 = bessel_i0(z);
                    (i0, k0_regular_part(z) + i0 * (4.0 * sin_half / z).ln())
                } else if w == 0.0 {
                    (0.0, k0_unchecked(z))
                } else {
                    let a0 = w * bessel_i0(z);
                    (a0, k0_unchecked(z) + a0 * (2.0 * sin_half).ln())
                };
                *entry = prefactor * (-0.5 * self.log_weights[k] * coef + h * smooth);
            }
        });

        Ok(BsMatrix {
            data,
            size: n,
            alpha,
            kappa,
            length,
            scheme: QuadratureScheme::KressLog { window },
            self_intersecting: self.self_intersecting,
        })
    }
}

/// C^∞ window: 1 on `[0, window/2]`, 0 beyond `window`.
fn window_weight(tau: f64, window: f64) -> f64 {
    if window >= PI {
        return 1.0;
    }
    let inner = 0.5 * window;
    if tau <= inner {
        return 1.0;
    }
    if tau >= window {
        return 0.0;
    }
    let x = (tau - inner) / (window - inner);
    let bump = |y: f64| if y <= 0.0 { 0.0 } else { (-1.0 / y).exp() };
    let up = bump(x);
    1.0 - up / (up + bump(1.0 - x))
}

/// Nyström discretisation of the Birman–Schwinger operator on a closed curve.
///
/// The logarithmic singularity of K₀ on the diagonal is split off as
/// `-½ ln(4 sin²((t-τ)/2)) I₀(κr)` and integrated with Kress weights; the
/// remainder is smooth and handled by the trapezoid rule, so convergence is
/// spectral in the grid size for smooth loops.
pub fn assemble_bs_matrix(curve: &ArcLengthCurve, alpha: f64, kappa: f64) -> Result<BsMatrix> {
    Assembler::new(curve, true)?.assemble(curve, alpha, kappa)
}
