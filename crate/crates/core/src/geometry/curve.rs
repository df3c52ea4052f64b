use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quadrature::periodic_resample;

pub type Point = [f64; 2];

/// Where a sampled curve came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveSource {
    Circle,
    Curvature,
    Lens,
    Paperclip,
    Ellipse,
    File,
}

/// A planar loop sampled on a uniform arc-length grid `s_i = i·L/N`.
///
/// Chords that wrap past `s = L` are continued quasi-periodically: the
/// endpoint displacement `Γ(L) - Γ(0)` is added, which is exact for curves
/// whose tangent is periodic and vanishes for closed curves.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcLengthCurve {
    length: f64,
    points: Vec<Point>,
    gap: Point,
    tangent_defect: f64,
    corners: Vec<usize>,
    source: CurveSource,
}

pub(crate) fn validate_grid(n: usize) -> Result<()> {
    if n < 16 || n % 2 != 0 {
        return Err(invalid(format!("grid size must be even and >= 16, got {n}")));
    }
    Ok(())
}

pub(crate) fn validate_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

impl ArcLengthCurve {
    /// Assemble a curve from raw samples. `gap` is `Γ(L) - Γ(0)`.
    pub fn from_samples(
        length: f64,
        points: Vec<Point>,
        gap: Point,
        source: CurveSource,
    ) -> Result<Self> {
        validate_positive("length", length)?;
        validate_grid(points.len())?;
        if points.iter().flatten().any(|v| !v.is_finite()) || gap.iter().any(|v| !v.is_finite()) {
            return Err(invalid("curve samples must be finite"));
        }
        Ok(Self {
            length,
            points,
            gap,
            tangent_defect: 0.0,
            corners: Vec::new(),
            source,
        })
    }

    pub(crate) fn with_corners(mut self, corners: Vec<usize>) -> Self {
        self.corners = corners;
        self
    }

    pub(crate) fn with_tangent_defect(mut self, defect: f64) -> Self {
        self.tangent_defect = defect;
        self
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn grid_size(&self) -> usize {
        self.points.len()
    }

    /// Arc-length spacing `L/N`.
    pub fn spacing(&self) -> f64 {
        self.length / self.points.len() as f64
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn source(&self) -> CurveSource {
        self.source
    }

    /// `Γ(L) - Γ(0)`.
    pub fn gap(&self) -> Point {
        self.gap
    }

    pub fn closure_defect(&self) -> f64 {
        self.gap[0].hypot(self.gap[1])
    }

    pub fn tangent_defect(&self) -> f64 {
        self.tangent_defect
    }

    /// Grid indices of tangent discontinuities.
    pub fn corners(&self) -> &[usize] {
        &self.corners
    }

    pub fn is_closed(&self, relative_tol: f64) -> bool {
        self.closure_defect() <= relative_tol * self.length
    }

    /// Map an arc separation onto the sample grid, refusing off-grid values.
    pub fn grid_offset(&self, u: f64) -> Result<usize> {
        let steps = u / self.spacing();
        let k = steps.round();
        if !(u > 0.0) || (steps - k).abs() > 1e-9 * steps.max(1.0) {
            return Err(invalid(format!(
                "arc separation {u} is not a positive multiple of the grid spacing {}",
                self.spacing()
            )));
        }
        Ok(k as usize)
    }

    /// `Γ(s_{i+k}) - Γ(s_i)` with quasi-periodic wrap.
    pub fn chord_vector(&self, i: usize, k: usize) -> Point {
        let n = self.points.len();
        let j = i + k;
        let wraps = (j / n) as f64;
        let a = self.points[i % n];
        let b = self.points[j % n];
        [
            b[0] - a[0] + wraps * self.gap[0],
            b[1] - a[1] + wraps * self.gap[1],
        ]
    }

    pub fn chord(&self, i: usize, k: usize) -> f64 {
        let v = self.chord_vector(i, k);
        v[0].hypot(v[1])
    }

    /// Length of the closing polyline through all samples.
    pub fn polyline_length(&self) -> f64 {
        (0..self.points.len()).map(|i| self.chord(i, 1)).sum()
    }

    /// Apply `x ↦ Q x + t` with `Q` the rotation by `angle`.
    pub fn rigid_motion(&self, angle: f64, translation: Point) -> Self {
        let (s, c) = angle.sin_cos();
        let rot = |p: Point| [c * p[0] - s * p[1], s * p[0] + c * p[1]];
        let mut out = self.clone();
        for p in &mut out.points {
            let r = rot(*p);
            *p = [r[0] + translation[0], r[1] + translation[1]];
        }
        out.gap = rot(self.gap);
        out
    }

    /// Uniform dilation by `factor` (length scales too).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        validate_positive("scale factor", factor)?;
        let mut out = self.clone();
        out.length *= factor;
        for p in &mut out.points {
            p[0] *= factor;
            p[1] *= factor;
        }
        out.gap = [self.gap[0] * factor, self.gap[1] * factor];
        Ok(out)
    }

    /// Trigonometric resampling of a smooth closed curve onto `target` points.
    pub fn resampled(&self, target: usize) -> Result<Self> {
        validate_grid(target)?;
        if !self.corners.is_empty() {
            return Err(invalid("cannot resample a curve with corners spectrally"));
        }
        if !self.is_closed(1e-8) {
            return Err(invalid("only closed curves can be resampled"));
        }
        let z: Vec<Complex64> = self.points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        let fine = periodic_resample(&z, target);
        let mut out = self.clone();
        out.points = fine.iter().map(|c| [c.re, c.im]).collect();
        Ok(out)
    }

    /// Whether the closing polyline crosses itself.
    ///
    /// Checked by a brute-force segment sweep at sample resolution; adjacent
    /// segments are skipped.
    pub fn self_intersects(&self) -> bool {
        let n = self.points.len();
        let seg = |i: usize| -> (Point, Point) {
            let a = self.points[i];
            let d = self.chord_vector(i, 1);
            (a, [a[0] + d[0], a[1] + d[1]])
        };
        let closed = self.is_closed(1e-8);
        for i in 0..n {
            let (a, b) = seg(i);
            for j in (i + 2)..n {
                if closed && i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = seg(j);
                if a[0].max(b[0]) < c[0].min(d[0])
                    || c[0].max(d[0]) < a[0].min(b[0])
                    || a[1].max(b[1]) < c[1].min(d[1])
                    || c[1].max(d[1]) < a[1].min(b[1])
                {
                    continue;
                }
                if segments_cross(a, b, c, d) {
                    return true;
                }
            }
        }
        false
    }

    /// Distance from `x` to the nearest sample.
    pub fn distance_to_samples(&self, x: Point) -> f64 {
        self.points
            .iter()
            .map(|p| (p[0] - x[0]).hypot(p[1] - x[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

/// Circle of circumference `L`, centred at the origin, traversed
/// counter-clockwise from `(L/2π, 0)`.
pub fn build_circle(length: f64, grid: usize) -> Result<ArcLengthCurve> {
    validate_positive("length", length)?;
    validate_grid(grid)?;
    let radius = length / (2.0 * PI);
    let points = (0..grid)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / grid as f64;
            [radius * t.cos(), radius * t.sin()]
        })
        .collect();
    ArcLengthCurve::from_samples(length, points, [0.0, 0.0], CurveSource::Circle)
}

/// Circle chord `(L/π) sin(πu/L)` for arc separation `u`.
pub fn circle_chord(length: f64, u: f64) -> f64 {
    length / PI * (PI * u / length).sin().abs()
}
