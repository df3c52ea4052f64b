use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::curve::{validate_positive, Point};
use crate::error::{invalid, Error, Result};

/// Equilateral polygon; vertex indices are taken modulo the vertex count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolygon", into = "RawPolygon")]
pub struct Polygon {
    vertices: Vec<Point>,
    side_length: f64,
    equilateral_tolerance: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPolygon {
    side: f64,
    vertices: Vec<Point>,
}

impl TryFrom<RawPolygon> for Polygon {
    type Error = Error;
    fn try_from(raw: RawPolygon) -> Result<Self> {
        Polygon::new(raw.vertices, raw.side, DEFAULT_EQUILATERAL_TOLERANCE)
    }
}

impl From<Polygon> for RawPolygon {
    fn from(p: Polygon) -> Self {
        RawPolygon {
            side: p.side_length,
            vertices: p.vertices,
        }
    }
}

pub const DEFAULT_EQUILATERAL_TOLERANCE: f64 = 1e-9;

impl Polygon {
    /// Validates that every side has length `side` to `tolerance · side`.
    pub fn new(vertices: Vec<Point>, side: f64, tolerance: f64) -> Result<Self> {
        validate_positive("side length", side)?;
        if vertices.len() < 3 {
            return Err(invalid("a polygon needs at least three vertices"));
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            if !((len - side).abs() <= tolerance * side) {
                return Err(invalid(format!(
                    "side {i} has length {len}, expected {side} (tolerance {tolerance})"
                )));
            }
        }
        Ok(Self {
            vertices,
            side_length: side,
            equilateral_tolerance: tolerance,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn side_length(&self) -> f64 {
        self.side_length
    }

    pub fn equilateral_tolerance(&self) -> f64 {
        self.equilateral_tolerance
    }

    /// `|y_{n+m} - y_n|`.
    pub fn diagonal(&self, n: usize, m: usize) -> f64 {
        let k = self.vertices.len();
        let a = self.vertices[n % k];
        let b = self.vertices[(n + m) % k];
        (b[0] - a[0]).hypot(b[1] - a[1])
    }
}

/// Regular polygon inscribed in the circle of radius `ℓ / (2 sin(π/N))`.
pub fn build_regular_polygon(vertex_count: usize, side: f64) -> Result<Polygon> {
    validate_positive("side length", side)?;
    if vertex_count < 3 {
        return Err(invalid("a polygon needs at least three vertices"));
    }
    let r = side / (2.0 * (PI / vertex_count as f64).sin());
    let vertices = (0..vertex_count)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / vertex_count as f64;
            [r * t.cos(), r * t.sin()]
        })
        .collect();
    Polygon::new(vertices, side, DEFAULT_EQUILATERAL_TOLERANCE)
}

/// Rhombus of side `ℓ` with acute interior angle `φ ∈ (0, π/2]`; diagonals
/// `2ℓ sin(φ/2)` (vertical) and `2ℓ cos(φ/2)` (horizontal). `φ = π/2` is the
/// square.
pub fn rhomboid(angle: f64, side: f64) -> Result<Polygon> {
    validate_positive("side length", side)?;
    if !(angle > 0.0 && angle <= 0.5 * PI) {
        return Err(invalid(format!("rhomboid angle must lie in (0, π/2], got {angle}")));
    }
    let (s, c) = (0.5 * angle).sin_cos();
    let vertices = vec![[side * c, 0.0], [0.0, side * s], [-side * c, 0.0], [0.0, -side * s]];
    Polygon::new(vertices, side, DEFAULT_EQUILATERAL_TOLERANCE)
}

/// Random equilateral perturbation of the regular `N`-gon.
///
/// Edge directions `2πk/N + δ_k` with `δ_k` uniform in `[-amplitude, amplitude]`
/// are projected by Gauss–Newton onto the closing constraint
/// `Σ exp(iθ_k) = 0`, so the result is exactly equilateral.
pub fn perturbed_regular_polygon(
    vertex_count: usize,
    side: f64,
    amplitude: f64,
    seed: u64,
) -> Result<Polygon> {
    validate_positive("side length", side)?;
    if vertex_count < 3 {
        return Err(invalid("a polygon needs at least three vertices"));
    }
    let n = vertex_count;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta: Vec<f64> = (0..n)
        .map(|k| 2.0 * PI * k as f64 / n as f64 + rng.gen_range(-amplitude..=amplitude))
        .collect();
    let mut closed = false;
    for _ in 0..100 {
        let (cx, cy) = theta.iter().fold((0.0, 0.0), |(x, y), t| (x + t.cos(), y + t.sin()));
        if cx.hypot(cy) < 1e-15 * n as f64 {
            closed = true;
            break;
        }
        // J = [[-sin θ], [cos θ]]; minimal-norm step δ = -Jᵀ (J Jᵀ)⁻¹ c
        let (mut jxx, mut jxy, mut jyy) = (0.0, 0.0, 0.0);
        for t in &theta {
            let (s, c) = t.sin_cos();
            jxx += s * s;
            jxy += -s * c;
            jyy += c * c;
        }
        let det = jxx * jyy - jxy * jxy;
        if det.abs() < 1e-300 {
            break;
        }
        let lx = (jyy * cx - jxy * cy) / det;
        let ly = (-jxy * cx + jxx * cy) / det;
        for t in theta.iter_mut() {
            let (s, c) = t.sin_cos();
            *t -= -s * lx + c * ly;
        }
    }
    if !closed {
        return Err(Error::NotClosable {
            iterations: 100,
            defect: f64::NAN,
        });
    }
    let mut vertices = Vec::with_capacity(n);
    let mut p = [0.0, 0.0];
    for t in &theta {
        vertices.push(p);
        p = [p[0] + side * t.cos(), p[1] + side * t.sin()];
    }
    Polygon::new(vertices, side, DEFAULT_EQUILATERAL_TOLERANCE)
}
