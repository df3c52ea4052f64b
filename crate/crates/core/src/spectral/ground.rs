use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::eigen::{max_eigenpair_with, EigenOptions, Eigenpair};
use super::matrix::Assembler;
use crate::error::{invalid, Error, Result};
use crate::geometry::{validate_positive, ArcLengthCurve, Point};
use crate::specfun::k0_unchecked;

/// Solver settings for [`ground_state_with`].
#[derive(Debug, Clone, Copy)]
pub struct GroundStateOptions {
    /// Final width of the `κ` bracket.
    pub kappa_tolerance: f64,
    pub eigen: EigenOptions,
    /// Doublings/halvings allowed while searching for a bracket.
    pub bracket_budget: usize,
    pub max_bisections: usize,
}

impl Default for GroundStateOptions {
    fn default() -> Self {
        Self {
            kappa_tolerance: 1e-8,
            eigen: EigenOptions::default(),
            bracket_budget: 60,
            max_bisections: 200,
        }
    }
}

/// Bound state `ε₁ = -κ*²` and its Perron density on the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateResult {
    #[serde(rename = "kappa")]
    pub kappa_star: f64,
    pub energy: f64,
    #[serde(rename = "residual")]
    pub lambda_residual: f64,
    #[serde(rename = "iterations")]
    pub bisection_iterations: usize,
    #[serde(rename = "grid")]
    pub grid_size: usize,
    /// Samples of the density `φ(s_i)`, positive, `Σ φ_i² L/N = 1`.
    pub eigenvector: Vec<f64>,
    #[serde(skip)]
    pub self_intersecting: bool,
}

/// `λ_max` of the discretised operator at one `κ`.
pub fn largest_eigenvalue(curve: &ArcLengthCurve, alpha: f64, kappa: f64) -> Result<f64> {
    let matrix = Assembler::new(curve, false)?.assemble(curve, alpha, kappa)?;
    Ok(max_eigenpair_with(&matrix, &EigenOptions::default(), None)?.value)
}

pub fn ground_state(curve: &ArcLengthCurve, alpha: f64, tol: f64) -> Result<GroundStateResult> {
    ground_state_with(
        curve,
        alpha,
        &GroundStateOptions {
            kappa_tolerance: tol,
            ..GroundStateOptions::default()
        },
    )
}

/// Locate `κ*` with `λ_max(κ*) = 1` by bisection, exploiting that `λ_max`
/// decreases strictly in `κ`.
///
/// The bracket starts at `κ = α` and is widened by doubling upwards and
/// halving downwards. Once its width is below the tolerance, a secant step
/// between the endpoints gives the reported `κ*`, whose eigenpair is then
/// recomputed. Each eigen-solve is warm-started from the previous vector.
pub fn ground_state_with(
    curve: &ArcLengthCurve,
    alpha: f64,
    options: &GroundStateOptions,
) -> Result<GroundStateResult> {
    validate_positive("coupling", alpha)?;
    validate_positive("kappa tolerance", options.kappa_tolerance)?;
    let assembler = Assembler::new(curve, true)?;
    let mut warm: Option<Vec<f64>> = None;
    let mut solve = |kappa: f64| -> Result<Eigenpair> {
        let matrix = assembler.assemble(curve, alpha, kappa)?;
        let pair = max_eigenpair_with(&matrix, &options.eigen, warm.as_deref())?;
        warm = Some(pair.vector.clone());
        Ok(pair)
    };

    let mut hi = alpha;
    let mut lambda_hi = solve(hi)?.value;
    let mut steps = 0;
    while lambda_hi >= 1.0 {
        if steps == options.bracket_budget {
            return Err(invalid(format!(
                "largest eigenvalue still {lambda_hi} at kappa {hi}; upper bracket not found"
            )));
        }
        hi *= 2.0;
        lambda_hi = solve(hi)?.value;
        steps += 1;
    }
    let mut lo = 0.5 * hi;
    let mut lambda_lo = solve(lo)?.value;
    steps = 0;
    while lambda_lo <= 1.0 {
        if steps == options.bracket_budget {
            return Err(Error::NoBoundState {
                kappa: lo,
                lambda: lambda_lo,
            });
        }
        hi = lo;
        lambda_hi = lambda_lo;
        lo *= 0.5;
        lambda_lo = solve(lo)?.value;
        steps += 1;
    }

    let mut iterations = 0;
    while hi - lo > options.kappa_tolerance && iterations < options.max_bisections {
        let mid = 0.5 * (lo + hi);
        let lambda = solve(mid)?.value;
        iterations += 1;
        if lambda > 1.0 {
            lo = mid;
            lambda_lo = lambda;
        } else {
            hi = mid;
            lambda_hi = lambda;
        }
    }
    let kappa_star = (lo + (lambda_lo - 1.0) / (lambda_lo - lambda_hi) * (hi - lo)).clamp(lo, hi);
    let pair = solve(kappa_star)?;
    let lambda_residual = (pair.value - 1.0).abs();
    if lambda_residual > options.kappa_tolerance {
        return Err(Error::NoConvergence {
            iterations,
            residual: lambda_residual,
        });
    }
    Ok(GroundStateResult {
        kappa_star,
        energy: -kappa_star * kappa_star,
        eigenvector: pair.vector,
        lambda_residual,
        bisection_iterations: iterations,
        grid_size: curve.grid_size(),
        self_intersecting: assembler.self_intersecting(),
    })
}

/// Planar eigenfunction `ψ(x) = Σ (L/N) (1/2π) K₀(κ*|x - Γ(s_i)|) φ(s_i)`.
pub fn eigenfunction_at(result: &GroundStateResult, curve: &ArcLengthCurve, x: Point) -> Result<f64> {
    if result.eigenvector.len() != curve.grid_size() {
        return Err(invalid(format!(
            "result has {} samples but the curve has {}",
            result.eigenvector.len(),
            curve.grid_size()
        )));
    }
    if !(x[0].is_finite() && x[1].is_finite()) {
        return Err(invalid("evaluation point must be finite"));
    }
    let distance = curve.distance_to_samples(x);
    if distance <= 1e-8 * curve.length() {
        return Err(Error::PointOnCurve { distance });
    }
    let weight = curve.spacing() / (2.0 * PI);
    Ok(curve
        .points()
        .iter()
        .zip(&result.eigenvector)
        .map(|(p, phi)| weight * k0_unchecked(result.kappa_star * (p[0] - x[0]).hypot(p[1] - x[1])) * phi)
        .sum())
}
