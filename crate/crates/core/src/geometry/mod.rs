//! Planar geometry kernel: points, polygons, hulls, containment, closed
//! traces, trace simplification and circle detection.

mod circle_detect;
mod containment;
mod hull;
mod point;
mod polygon;
mod simplify;
mod trace;

pub use circle_detect::{
    detect_arcs, detect_circle, fit_circle, ArcFit, CircleDetection, HoughParams,
};
pub use containment::{point_in_region, segment_in_region, segment_on_boundary, Location};
pub use hull::{classify_polygon, convex_hull, Convexity};
pub use point::{angle_diff, normalize_angle, orient, signed_line_distance, Point2D, Segment};
pub use polygon::{bounding_box, shoelace, Circle, Polygon, Region, CIRCLE_SEGMENTS};
pub use simplify::{
    douglas_peucker_closed, simplify_trace, Simplified, DEFAULT_EPS_SIMPLIFY, TURN_THRESHOLD,
};
pub use trace::{ClosedTrace, MIN_TRACE_POINTS};
pub(crate) use simplify::{corner_polygon, prune_redundant};

/// Two points closer than this are the same point (meters).
pub const EPS_PT: f64 = 1e-6;

/// Cross products within this of zero count as collinear (square meters).
pub const EPS_CROSS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid circle radius {0}")]
    InvalidCircle(f64),
}
