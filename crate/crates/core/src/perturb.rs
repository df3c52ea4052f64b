//! Second-order expansion of the mean squared chord around the circle.
//!
//! For `γ = 2π/L + g` the squared-chord moment has the representation
//! `c²(u) = 2∫₀ᵘ (u - x) ∫₀ᴸ cos(∫_{z-x/2}^{z+x/2} γ) dz dx`, and expanding
//! the cosine gives `c²(u) = (L³/π²) sin²(πu/L) - I_g(u) + O(g³)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::CurvatureSpec;
use crate::quadrature::gauss_legendre_composite;

/// `F_n(v) = ∫₀ᵛ (v - y) cos 2y sin ny dy` in closed form, for `v ∈ (0, π/2]`.
pub fn f_n(n: u32, v: f64) -> Result<f64> {
    check_mode_argument(n, v)?;
    Ok(match n {
        1 => (9.0 * v.sin() - (3.0 * v).sin() - 6.0 * v) / 18.0,
        2 => (4.0 * v - (4.0 * v).sin()) / 32.0,
        _ => {
            let n = n as f64;
            n * v / (n * n - 4.0)
                - ((n - 2.0) * v).sin() / (2.0 * (n - 2.0).powi(2))
                - ((n + 2.0) * v).sin() / (2.0 * (n + 2.0).powi(2))
        }
    })
}

/// `G_n(v) = ∫₀ᵛ (v - y) cos 2y sin² ny dy`, the kernel that multiplies the
/// mode weights in `I_g`.
///
/// Closed form `½C₂ - ¼C_{2n-2} - ¼C_{2n+2}` with `C_k = (1 - cos kv)/k²`
/// and `C₀ = v²/2`.
pub fn g_n(n: u32, v: f64) -> Result<f64> {
    check_mode_argument(n, v)?;
    let c = |k: u32| {
        if k == 0 {
            0.5 * v * v
        } else {
            let k = k as f64;
            2.0 * (0.5 * k * v).sin().powi(2) / (k * k)
        }
    };
    Ok(0.5 * c(2) - 0.25 * c(2 * n - 2) - 0.25 * c(2 * n + 2))
}

fn check_mode_argument(n: u32, v: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid("mode index must be at least 1"));
    }
    if !(v > 0.0 && v <= 0.5 * PI) {
        return Err(invalid(format!("argument {v} outside (0, π/2]")));
    }
    Ok(())
}

fn check_separation(spec: &CurvatureSpec, u: f64) -> Result<()> {
    let l = spec.length();
    if !(u > 0.0 && u <= 0.5 * l * (1.0 + 1e-14)) {
        return Err(invalid(format!("arc separation {u} outside (0, L/2] for L = {l}")));
    }
    Ok(())
}

/// One row of the `I_g` decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeContribution {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    /// `(a_n² + b_n²)/n²`.
    pub weight: f64,
    /// `G_n(πu/L)`.
    #[serde(rename = "F")]
    pub kernel: f64,
    pub contribution: f64,
}

/// `I_g(u) = (L⁵/2π⁴) Σ (a_n² + b_n²)/n² · G_n(πu/L)`, summed in ascending `n`.
pub fn i_g(spec: &CurvatureSpec, u: f64) -> Result<(f64, Vec<ModeContribution>)> {
    check_separation(spec, u)?;
    let l = spec.length();
    let prefactor = l.powi(5) / (2.0 * PI.powi(4));
    let v = (PI * u / l).min(0.5 * PI);
    let mut total = 0.0;
    let mut rows = Vec::with_capacity(spec.modes().len());
    for m in spec.modes() {
        let weight = (m.a * m.a + m.b * m.b) / (m.n as f64).powi(2);
        let kernel = g_n(m.n, v)?;
        let contribution = prefactor * weight * kernel;
        total += contribution;
        rows.push(ModeContribution {
            n: m.n,
            a: m.a,
            b: m.b,
            weight,
            kernel,
            contribution,
        });
    }
    Ok((total, rows))
}

fn periodic_points(spec: &CurvatureSpec, extra: usize) -> usize {
    16 * spec.max_mode() as usize + extra
}

fn x_rule(u: f64) -> Vec<(f64, f64)> {
    gauss_legendre_composite(0.0, u, 16, 20)
}

/// `I_g(u) = ∫₀ᵘ (u - x) cos(2πx/L) ∫₀ᴸ (∫_{z-x/2}^{z+x/2} g)² dz dx` by
/// direct quadrature.
pub fn i_g_direct(spec: &CurvatureSpec, u: f64) -> Result<f64> {
    check_separation(spec, u)?;
    if spec.is_circle() {
        return Ok(0.0);
    }
    let l = spec.length();
    let nz = periodic_points(spec, 16);
    let hz = l / nz as f64;
    Ok(x_rule(u)
        .iter()
        .map(|&(x, w)| {
            let inner: f64 = (0..nz).map(|j| spec.window_integral(j as f64 * hz, x).powi(2)).sum::<f64>() * hz;
            w * (u - x) * (2.0 * PI * x / l).cos() * inner
        })
        .sum())
}

/// Squared-chord moment `c²(u)` from the curvature alone.
pub fn c2_from_curvature(spec: &CurvatureSpec, u: f64) -> Result<f64> {
    check_separation(spec, u)?;
    let l = spec.length();
    if spec.is_circle() {
        return Ok(l.powi(3) / (PI * PI) * (PI * u / l).sin().powi(2));
    }
    let nz = periodic_points(spec, 256);
    let hz = l / nz as f64;
    Ok(2.0
        * x_rule(u)
            .iter()
            .map(|&(x, w)| {
                let base = 2.0 * PI * x / l;
                let inner: f64 =
                    (0..nz).map(|j| (base + spec.window_integral(j as f64 * hz, x)).cos()).sum::<f64>() * hz;
                w * (u - x) * inner
            })
            .sum::<f64>())
}

/// Outcome of [`second_order_expansion_audit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionAudit {
    pub u: f64,
    pub epsilon: f64,
    /// `c²(εg) - [(L³/π²) sin²(πu/L) - ε² I_g]` at `ε = ε₀`.
    pub residual: f64,
    /// The same at `ε₀/2`.
    pub residual_half: f64,
    /// `|residual / residual_half|`; 8 for a cubic remainder.
    pub ratio: f64,
    /// `c²(εg) - c²(-εg)` at `ε₀`.
    pub odd_part: f64,
    pub odd_part_half: f64,
    pub consistent: bool,
}

impl ExpansionAudit {
    pub fn verdict(&self) -> &'static str {
        if self.consistent {
            "consistent"
        } else {
            "inconsistent"
        }
    }
}

/// Largest admissible `‖L ε₀ g‖_∞` for the audit.
pub const AUDIT_SUP_NORM_LIMIT: f64 = 0.1;

/// Check that the remainder of the second-order expansion scales like `ε³`.
///
/// The perturbation is scaled by `ε₀` and `ε₀/2`; halving `ε` must shrink the
/// remainder by at least a factor 6. A spec with vanishing remainder (the
/// circle) is reported as consistent.
pub fn second_order_expansion_audit(spec: &CurvatureSpec, u: f64, epsilon: f64) -> Result<ExpansionAudit> {
    check_separation(spec, u)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    let scaled_norm = epsilon * spec.sup_norm(4096);
    if scaled_norm > AUDIT_SUP_NORM_LIMIT * (1.0 + 1e-12) {
        return Err(invalid(format!(
            "‖Lεg‖∞ = {scaled_norm} exceeds the expansion limit {AUDIT_SUP_NORM_LIMIT}"
        )));
    }
    let l = spec.length();
    let circle = l.powi(3) / (PI * PI) * (PI * u / l).sin().powi(2);
    let (ig, _) = i_g(spec, u)?;
    let residual_at = |eps: f64| -> Result<f64> { Ok(c2_from_curvature(&spec.scaled(eps), u)? - (circle - eps * eps * ig)) };
    let odd_at = |eps: f64| -> Result<f64> {
        Ok(c2_from_curvature(&spec.scaled(eps), u)? - c2_from_curvature(&spec.scaled(-eps), u)?)
    };
    let residual = residual_at(epsilon)?;
    let residual_half = residual_at(0.5 * epsilon)?;
    let trivial = residual == 0.0 && residual_half == 0.0;
    let ratio = if trivial { f64::NAN } else { (residual / residual_half).abs() };
    Ok(ExpansionAudit {
        u,
        epsilon,
        residual,
        residual_half,
        ratio,
        odd_part: odd_at(epsilon)?,
        odd_part_half: odd_at(0.5 * epsilon)?,
        consistent: trivial || ratio >= 6.0,
    })
}
