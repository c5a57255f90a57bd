//! Shape identification of a traced boundary and the alpha-spaced path plan
//! built on it.
//!
//! A plan is a set of straight traversal lines. On polygons every line
//! starts at a vertex and ends on an edge not touching it, with endpoints
//! stepped `alpha` apart along that edge. On circles the lines are
//! diameters (or radii, for an arc) whose boundary points are `alpha` apart
//! in arc length.

mod circular;
mod fan;
mod shape;

use std::f64::consts::TAU;
use std::fmt;

use serde_json::{json, Value};

use crate::geometry::{segment_in_region, Circle, GeometryError, Point2D, Polygon, Segment, EPS_PT};

pub use circular::plan_circular;
pub use fan::{plan_concave, plan_convex};
pub use shape::{decompose_complex, identify_shape};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlanError {
    #[error("accuracy factor {0} is not a positive length")]
    BadAlpha(f64),
    #[error("accuracy factor {alpha} is not shorter than the arc ({arc:.4} m)")]
    AlphaExceedsArc { alpha: f64, arc: f64 },
    #[error("trace cannot be classified: {0}")]
    UnclassifiableTrace(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Conditions that leave a valid but thin plan.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanWarning {
    /// Every edge is shorter than alpha, so fans reach edge ends only.
    AlphaExceedsLongestEdge { part_id: u32, alpha: f64, longest: f64 },
    /// Every candidate line ran along the boundary or left the region.
    NoInteriorLines { part_id: u32 },
}

impl fmt::Display for PlanWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanWarning::AlphaExceedsLongestEdge { part_id, alpha, longest } => write!(
                f,
                "part {part_id}: alpha {alpha} exceeds the longest edge ({longest:.4} m); lines reach edge ends only"
            ),
            PlanWarning::NoInteriorLines { part_id } => write!(f, "part {part_id}: no interior path lines"),
        }
    }
}

/// Angular extent of a circular part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcSpan {
    Full,
    /// The arc runs clockwise from bearing `start` to bearing `end`; the
    /// chord between its ends closes the part.
    Partial { start: f64, end: f64 },
}

impl ArcSpan {
    /// Clockwise angle covered, in (0, 2π].
    pub fn sweep(&self) -> f64 {
        match *self {
            ArcSpan::Full => TAU,
            ArcSpan::Partial { start, end } => {
                let s = (start - end).rem_euclid(TAU);
                if s == 0.0 {
                    TAU
                } else {
                    s
                }
            }
        }
    }
}

/// Classification of a traced region.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeClass {
    Convex(Polygon),
    Concave(Polygon),
    Circular(Circle, ArcSpan),
    /// At least two parts, none of them complex, that tile the region.
    Complex(Vec<ShapeClass>),
}

/// Arc sample spacing (radians) when a circular part becomes a polygon.
const ARC_SAMPLE: f64 = TAU / 720.0;

impl ShapeClass {
    pub fn name(&self) -> &'static str {
        match self {
            ShapeClass::Convex(_) => "convex",
            ShapeClass::Concave(_) => "concave",
            ShapeClass::Circular(..) => "circular",
            ShapeClass::Complex(_) => "complex",
        }
    }

    /// Planning parts: the shape itself, or its parts when complex.
    pub fn parts(&self) -> &[ShapeClass] {
        match self {
            ShapeClass::Complex(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            ShapeClass::Convex(p) | ShapeClass::Concave(p) => p.area(),
            ShapeClass::Circular(c, span) => {
                let s = span.sweep();
                0.5 * c.radius * c.radius * (s - s.sin())
            }
            ShapeClass::Complex(parts) => parts.iter().map(ShapeClass::area).sum(),
        }
    }

    /// Polygon outline; arcs are sampled every half degree. For a complex
    /// shape, `None`: its parts carry the outlines.
    pub fn outline(&self) -> Option<Polygon> {
        match self {
            ShapeClass::Convex(p) | ShapeClass::Concave(p) => Some(p.clone()),
            ShapeClass::Circular(c, span) => Some(arc_polygon(c, *span)),
            ShapeClass::Complex(_) => None,
        }
    }

    /// Whether the closed segment lies in the region. Circular parts are
    /// tested analytically: a disk, or a disk cut by the chord.
    pub fn contains_segment(&self, a: Point2D, b: Point2D) -> bool {
        match self {
            ShapeClass::Convex(p) | ShapeClass::Concave(p) => segment_in_region(a, b, p),
            ShapeClass::Circular(c, span) => {
                let in_disk = |p: Point2D| p.distance(c.center) <= c.radius + EPS_PT;
                if !in_disk(a) || !in_disk(b) {
                    return false;
                }
                match *span {
                    ArcSpan::Full => true,
                    ArcSpan::Partial { start, end } => {
                        // The part lies left of the chord from start to end.
                        let (s, e) = (c.point_at(start), c.point_at(end));
                        let side = |p: Point2D| Segment::new(s, e).direction().cross(p - s);
                        let tol = EPS_PT * s.distance(e).max(1.0);
                        side(a) >= -tol && side(b) >= -tol
                    }
                }
            }
            ShapeClass::Complex(parts) => parts.iter().any(|p| p.contains_segment(a, b)),
        }
    }
}

fn arc_polygon(c: &Circle, span: ArcSpan) -> Polygon {
    match span {
        ArcSpan::Full => c.to_polygon(720),
        ArcSpan::Partial { start, .. } => {
            let sweep = span.sweep();
            let n = (sweep / ARC_SAMPLE).ceil().max(2.0) as usize;
            let ring = (0..=n).map(|k| c.point_at(start - sweep * k as f64 / n as f64)).collect();
            Polygon::new(ring).expect("arc with chord is simple")
        }
    }
}

/// One traversal line. `start_angle` is measured anticlockwise from the
/// boundary leaving `start_vertex` (the next edge of the counterclockwise
/// ring, or the counterclockwise tangent on an arc) to the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPlanEntry {
    pub line_id: u32,
    pub start_vertex: Point2D,
    pub end_point: Point2D,
    pub start_angle: f64,
    pub part_id: u32,
}

impl PathPlanEntry {
    pub fn segment(&self) -> Segment {
        Segment::new(self.start_vertex, self.end_point)
    }

    pub fn length(&self) -> f64 {
        self.start_vertex.distance(self.end_point)
    }

    /// Same unordered endpoint pair within `EPS_PT`.
    pub fn same_segment(&self, other: &PathPlanEntry) -> bool {
        let (a, b) = (self.start_vertex, self.end_point);
        let (c, d) = (other.start_vertex, other.end_point);
        (a.approx_eq(c, EPS_PT) && b.approx_eq(d, EPS_PT)) || (a.approx_eq(d, EPS_PT) && b.approx_eq(c, EPS_PT))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathPlan {
    pub entries: Vec<PathPlanEntry>,
    pub alpha: f64,
    /// Start vertices in order of first appearance, with the indices of the
    /// entries leaving each.
    pub per_vertex_index: Vec<(Point2D, Vec<usize>)>,
    pub warnings: Vec<PlanWarning>,
}

impl PathPlan {
    /// Numbers the entries 1.. in order and indexes them by start vertex.
    pub(crate) fn assemble(mut entries: Vec<PathPlanEntry>, alpha: f64, warnings: Vec<PlanWarning>) -> Self {
        let mut per_vertex_index: Vec<(Point2D, Vec<usize>)> = Vec::new();
        for (i, e) in entries.iter_mut().enumerate() {
            e.line_id = i as u32 + 1;
            match per_vertex_index.iter_mut().find(|(v, _)| v.approx_eq(e.start_vertex, EPS_PT)) {
                Some((_, list)) => list.push(i),
                None => per_vertex_index.push((e.start_vertex, vec![i])),
            }
        }
        Self {
            entries,
            alpha,
            per_vertex_index,
            warnings,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.entries.iter().map(PathPlanEntry::length).sum()
    }

    /// JSON array of `{line_id, part_id, start, end, angle_rad}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    json!({
                        "line_id": format!("L{}", e.line_id),
                        "part_id": e.part_id,
                        "start": [round6(e.start_vertex.x), round6(e.start_vertex.y)],
                        "end": [round6(e.end_point.x), round6(e.end_point.y)],
                        "angle_rad": round6(e.start_angle),
                    })
                })
                .collect(),
        )
    }
}

/// Rounds to the micrometer so exported coordinates are byte-stable.
pub fn round6(x: f64) -> f64 {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), PlanError> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(PlanError::BadAlpha(alpha))
    }
}

/// Plans every part of `shape`. Parts are numbered from 0 in order, and a
/// line never leaves its part.
pub fn build_path_plan(shape: &ShapeClass, alpha: f64) -> Result<PathPlan, PlanError> {
    check_alpha(alpha)?;
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for (k, part) in shape.parts().iter().enumerate() {
        let part_id = k as u32;
        let (mut e, mut w) = match part {
            ShapeClass::Convex(p) => fan::fan_entries(p, alpha, false, part_id),
            ShapeClass::Concave(p) => fan::fan_entries(p, alpha, true, part_id),
            ShapeClass::Circular(c, span) => (circular::circular_entries(c, *span, alpha, part_id)?, Vec::new()),
            ShapeClass::Complex(_) => {
                return Err(PlanError::UnclassifiableTrace("nested complex shape".into()));
            }
        };
        entries.append(&mut e);
        warnings.append(&mut w);
    }
    Ok(PathPlan::assemble(entries, alpha, warnings))
}

#[cfg(test)]
mod tests;
