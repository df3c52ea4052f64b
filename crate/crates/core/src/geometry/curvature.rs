use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::{validate_grid, validate_positive, ArcLengthCurve, CurveSource};
use crate::error::{invalid, Error, Result};
use crate::quadrature::periodic_antiderivative;

/// One Fourier mode of the curvature perturbation,
/// `a sin(2πns/L) + b cos(2πns/L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierMode {
    pub n: u32,
    pub a: f64,
    pub b: f64,
}

/// Curvature `γ(s) = 2π/L + g(s)` of a loop of length `L`, with `g` a finite
/// Fourier sum without constant term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct CurvatureSpec {
    length: f64,
    modes: Vec<FourierMode>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    length: f64,
    #[serde(default)]
    modes: Vec<FourierMode>,
}

impl TryFrom<RawSpec> for CurvatureSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        CurvatureSpec::new(raw.length, raw.modes)
    }
}

impl From<CurvatureSpec> for RawSpec {
    fn from(spec: CurvatureSpec) -> Self {
        RawSpec {
            length: spec.length,
            modes: spec.modes,
        }
    }
}

/// Oversampled grid used for curve integration: at least 4096 points and
/// enough to resolve the highest mode comfortably.
fn fine_grid(spec: &CurvatureSpec, grid: usize) -> usize {
    let target = 4096.max(64 * (spec.max_mode() as usize + 2));
    grid * target.div_ceil(grid)
}

impl CurvatureSpec {
    pub fn new(length: f64, mut modes: Vec<FourierMode>) -> Result<Self> {
        validate_positive("length", length)?;
        modes.sort_by_key(|m| m.n);
        for w in modes.windows(2) {
            if w[0].n == w[1].n {
                return Err(invalid(format!("duplicate curvature mode n={}", w[0].n)));
            }
        }
        for m in &modes {
            if m.n == 0 {
                return Err(invalid("curvature modes must have n >= 1"));
            }
            if !m.a.is_finite() || !m.b.is_finite() {
                return Err(invalid(format!("non-finite coefficient in mode n={}", m.n)));
            }
        }
        Ok(Self { length, modes })
    }

    /// The unperturbed circle.
    pub fn circle(length: f64) -> Result<Self> {
        Self::new(length, Vec::new())
    }

    /// Random perturbation with the given modes, coefficients uniform in
    /// `[-1, 1]` and then scaled so the sampled `‖L g‖_∞` equals `sup_norm`.
    pub fn random(length: f64, mode_indices: &[u32], sup_norm: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = mode_indices
            .iter()
            .map(|&n| FourierMode {
                n,
                a: rng.gen_range(-1.0..1.0),
                b: rng.gen_range(-1.0..1.0),
            })
            .collect();
        let spec = Self::new(length, modes)?;
        let current = spec.sup_norm(4096);
        if current == 0.0 {
            return Ok(spec);
        }
        Ok(spec.scaled(sup_norm / current))
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn modes(&self) -> &[FourierMode] {
        &self.modes
    }

    pub fn is_circle(&self) -> bool {
        self.modes.iter().all(|m| m.a == 0.0 && m.b == 0.0)
    }

    pub fn max_mode(&self) -> u32 {
        self.modes.iter().map(|m| m.n).max().unwrap_or(0)
    }

    pub fn mode(&self, n: u32) -> Option<FourierMode> {
        self.modes.iter().copied().find(|m| m.n == n)
    }

    /// `Σ (|a_n| + |b_n|) · L`, an upper bound on `‖L g‖_∞`.
    pub fn sup_norm_bound(&self) -> f64 {
        self.modes.iter().map(|m| m.a.abs() + m.b.abs()).sum::<f64>() * self.length
    }

    /// `‖L g‖_∞` sampled on `samples` equispaced points.
    pub fn sup_norm(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|i| self.perturbation(i as f64 * self.length / samples as f64).abs())
            .fold(0.0, f64::max)
            * self.length
    }

    /// Same shape, every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            length: self.length,
            modes: self
                .modes
                .iter()
                .map(|m| FourierMode {
                    n: m.n,
                    a: m.a * factor,
                    b: m.b * factor,
                })
                .collect(),
        }
    }

    /// Replace (or insert) mode `n`.
    pub fn with_mode(&self, n: u32, a: f64, b: f64) -> Result<Self> {
        let mut modes: Vec<FourierMode> = self.modes.iter().copied().filter(|m| m.n != n).collect();
        modes.push(FourierMode { n, a, b });
        Self::new(self.length, modes)
    }

    fn phase(&self, n: u32, s: f64) -> f64 {
        2.0 * PI * n as f64 * s / self.length
    }

    /// `g(s)`.
    pub fn perturbation(&self, s: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| {
                let (sn, cs) = self.phase(m.n, s).sin_cos();
                m.a * sn + m.b * cs
            })
            .sum()
    }

    /// Signed curvature `γ(s)`.
    pub fn curvature(&self, s: f64) -> f64 {
        2.0 * PI / self.length + self.perturbation(s)
    }

    /// `∫₀ˢ g`.
    pub fn bend(&self, s: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| {
                let (sn, cs) = self.phase(m.n, s).sin_cos();
                self.length / (2.0 * PI * m.n as f64) * (m.a * (1.0 - cs) + m.b * sn)
            })
            .sum()
    }

    /// Tangent angle `β(s) = 2πs/L + ∫₀ˢ g`.
    pub fn bending_angle(&self, s: f64) -> f64 {
        2.0 * PI * s / self.length + self.bend(s)
    }

    /// `∫_{z-x/2}^{z+x/2} g`.
    pub fn window_integral(&self, z: f64, x: f64) -> f64 {
        self.modes
            .iter()
            .map(|m| {
                let (sn, cs) = self.phase(m.n, z).sin_cos();
                let k = PI * m.n as f64;
                self.length / k * (m.a * sn + m.b * cs) * (k * x / self.length).sin()
            })
            .sum()
    }

    /// `∫₀ᴸ g² = (L/2) Σ (a_n² + b_n²)`.
    pub fn perturbation_energy(&self) -> f64 {
        0.5 * self.length * self.modes.iter().map(|m| m.a * m.a + m.b * m.b).sum::<f64>()
    }

    /// Complex Fourier coefficients of `γ`, indexed by frequency in
    /// `-max_mode..=max_mode`.
    pub fn curvature_coefficients(&self) -> Vec<(i64, Complex64)> {
        let top = self.max_mode() as i64;
        let mut out: Vec<(i64, Complex64)> =
            (-top..=top).map(|k| (k, Complex64::new(0.0, 0.0))).collect();
        out[top as usize].1 = Complex64::new(2.0 * PI / self.length, 0.0);
        for m in &self.modes {
            let n = m.n as i64;
            let c = Complex64::new(0.5 * m.b, -0.5 * m.a);
            out[(top + n) as usize].1 += c;
            out[(top - n) as usize].1 += c.conj();
        }
        out
    }

    fn closure_integral(&self, grid: usize) -> (Complex64, [Complex64; 2]) {
        let h = self.length / grid as f64;
        let scale = self.length / (2.0 * PI);
        let mut value = Complex64::new(0.0, 0.0);
        let mut da = Complex64::new(0.0, 0.0);
        let mut db = Complex64::new(0.0, 0.0);
        for j in 0..grid {
            let s = j as f64 * h;
            let e = Complex64::from_polar(1.0, self.bending_angle(s));
            let (sn, cs) = (2.0 * PI * s / self.length).sin_cos();
            value += e;
            da += Complex64::i() * e * (scale * (1.0 - cs));
            db += Complex64::i() * e * (scale * sn);
        }
        (value * h, [da * h, db * h])
    }
}

/// Integrate the tangent `exp(iβ)` to positions on the `grid`-point
/// arc-length grid. Closure is recorded, not enforced.
pub fn build_from_curvature(spec: &CurvatureSpec, grid: usize) -> Result<ArcLengthCurve> {
    validate_grid(grid)?;
    let fine = fine_grid(spec, grid);
    let stride = fine / grid;
    let length = spec.length();
    let h = length / fine as f64;
    let tangent: Vec<Complex64> = (0..fine)
        .map(|j| Complex64::from_polar(1.0, spec.bending_angle(j as f64 * h)))
        .collect();
    let (mean, primitive) = periodic_antiderivative(&tangent, length);
    let points = (0..grid)
        .map(|i| {
            let j = i * stride;
            let z = primitive[j] + mean * (j as f64 * h);
            [z.re, z.im]
        })
        .collect();
    let gap = mean * length;
    let tangent_defect = spec.bend(length).abs();
    Ok(
        ArcLengthCurve::from_samples(length, points, [gap.re, gap.im], CurveSource::Curvature)?
            .with_tangent_defect(tangent_defect),
    )
}

/// Default Newton budget for [`close_curve`].
pub const CLOSURE_MAX_ITERATIONS: usize = 50;

/// Make the curve close by adjusting the first Fourier pair `(a₁, b₁)`.
///
/// Newton iteration on the two closure integrals `∫ cos β = ∫ sin β = 0`.
/// The curvature construction keeps unit speed, so the length is already `L`
/// and the final uniform rescale is the identity.
pub fn close_curve(curve: &ArcLengthCurve, spec: &CurvatureSpec) -> Result<(ArcLengthCurve, CurvatureSpec)> {
    close_curve_with(curve, spec, CLOSURE_MAX_ITERATIONS)
}

/// [`close_curve`] with an explicit iteration budget.
pub fn close_curve_with(
    curve: &ArcLengthCurve,
    spec: &CurvatureSpec,
    max_iterations: usize,
) -> Result<(ArcLengthCurve, CurvatureSpec)> {
    let length = spec.length();
    if (curve.length() - length).abs() > 1e-12 * length {
        return Err(invalid("curve and curvature spec disagree on length"));
    }
    if !curve.closure_defect().is_finite() {
        return Err(invalid("closure defect is not finite"));
    }
    let grid = curve.grid_size();
    if curve.is_closed(1e-13) {
        return Ok((curve.clone(), spec.clone()));
    }
    let quad = fine_grid(spec, grid);
    let first = spec.mode(1).unwrap_or(FourierMode { n: 1, a: 0.0, b: 0.0 });
    let (mut a1, mut b1) = (first.a, first.b);
    let mut current = spec.clone();
    let mut defect = curve.closure_defect();
    for _ in 0..max_iterations {
        let (value, [da, db]) = current.closure_integral(quad);
        defect = value.norm();
        if !defect.is_finite() {
            break;
        }
        if defect <= 1e-13 * length {
            let closed = build_from_curvature(&current, grid)?;
            if closed.is_closed(1e-10) {
                return Ok((closed, current));
            }
            defect = closed.closure_defect();
            break;
        }
        let det = da.re * db.im - db.re * da.im;
        if det.abs() < 1e-300 || !det.is_finite() {
            break;
        }
        let step_a = (value.re * db.im - db.re * value.im) / det;
        let step_b = (da.re * value.im - value.re * da.im) / det;
        a1 -= step_a;
        b1 -= step_b;
        current = current.with_mode(1, a1, b1)?;
    }
    Err(Error::NotClosable {
        iterations: max_iterations,
        defect,
    })
}
