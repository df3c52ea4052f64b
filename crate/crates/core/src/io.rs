//! JSON file formats for curves, curvature specs and polygons.
//!
//! Curve files look like
//! `{"length": L, "n": N, "points": [[x, y], ...], "closure_defect": d, "source": "circle"}`
//! with two optional extensions: `"corners"` (sample indices of corners) and
//! `"gap"` (the vector `Γ(L) - Γ(0)` of an open curve).

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::{ArcLengthCurve, CurvatureSpec, CurveSource, Point, Polygon};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CurveFile {
    length: f64,
    n: usize,
    points: Vec<Point>,
    #[serde(default)]
    closure_defect: f64,
    #[serde(default = "file_source")]
    source: CurveSource,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    corners: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gap: Option<Point>,
}

fn file_source() -> CurveSource {
    CurveSource::File
}

pub fn curve_to_json(curve: &ArcLengthCurve) -> Result<String> {
    let gap = curve.gap();
    let file = CurveFile {
        length: curve.length(),
        n: curve.grid_size(),
        points: curve.points().to_vec(),
        closure_defect: curve.closure_defect(),
        source: curve.source(),
        corners: curve.corners().to_vec(),
        gap: (gap != [0.0, 0.0]).then_some(gap),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

/// Parse a curve file. Without a `"gap"` entry a nonzero `closure_defect` is
/// kept as a gap of that length along x, so closure checks still see it.
pub fn curve_from_json(text: &str) -> Result<ArcLengthCurve> {
    let file: CurveFile = serde_json::from_str(text)?;
    if file.n != file.points.len() {
        return Err(invalid(format!("\"n\" is {} but {} points were given", file.n, file.points.len())));
    }
    if !(file.closure_defect >= 0.0) {
        return Err(invalid("closure_defect must be nonnegative"));
    }
    if let Some(&c) = file.corners.iter().find(|&&c| c >= file.n) {
        return Err(invalid(format!("corner index {c} out of range")));
    }
    let gap = file.gap.unwrap_or([file.closure_defect, 0.0]);
    Ok(ArcLengthCurve::from_samples(file.length, file.points, gap, file.source)?.with_corners(file.corners))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

pub fn read_curve(path: &Path) -> Result<ArcLengthCurve> {
    curve_from_json(&fs::read_to_string(path)?)
}

pub fn read_spec(path: &Path) -> Result<CurvatureSpec> {
    read_json(path)
}

pub fn read_polygon(path: &Path) -> Result<Polygon> {
    read_json(path)
}
