//! Closed planar curves on uniform arc-length grids, and equilateral polygons.

mod curvature;
mod curve;
mod polygon;
mod shapes;

pub use curvature::{
    build_from_curvature, close_curve, close_curve_with, CurvatureSpec, FourierMode,
    CLOSURE_MAX_ITERATIONS,
};
pub use curve::{build_circle, circle_chord, ArcLengthCurve, CurveSource, Point};
pub use polygon::{
    build_regular_polygon, perturbed_regular_polygon, rhomboid, Polygon,
    DEFAULT_EQUILATERAL_TOLERANCE,
};
pub use shapes::{build_ellipse, build_lens, build_paperclip};

pub(crate) use curve::validate_positive;
