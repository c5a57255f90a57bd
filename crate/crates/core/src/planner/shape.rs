use super::{ArcSpan, PlanError, ShapeClass};
use crate::geometry::{
    classify_polygon, corner_polygon, detect_arcs, detect_circle, simplify_trace, CircleDetection, ClosedTrace,
    Convexity, HoughParams, Point2D, Polygon, DEFAULT_EPS_SIMPLIFY,
};

/// Length of each run end ignored when fitting edge lines for corners.
const CORNER_TRIM: f64 = 0.25;
/// Farthest a fitted corner may sit from its turn point.
const CORNER_REACH: f64 = 0.5;
/// Turn points this close to an arc end merge into it.
const JOIN: f64 = 4.0 * DEFAULT_EPS_SIMPLIFY;
/// Parts below this share of the trace area are slivers left by a cut.
const SLIVER: f64 = 0.01;

/// Classifies a closed trace. A trace without turn points that fits a
/// circle is circular; a trace with convex arcs beside straight runs is
/// split into parts; otherwise the corner polygon is convex or concave.
pub fn identify_shape(trace: &ClosedTrace) -> Result<ShapeClass, PlanError> {
    let s = simplify_trace(trace, DEFAULT_EPS_SIMPLIFY)?;
    if s.turn_points.is_empty() {
        if let Some(det) = detect_circle(trace).filter(|d| d.full) {
            return Ok(ShapeClass::Circular(det.circle, ArcSpan::Full));
        }
    }
    let arcs: Vec<CircleDetection> = detect_arcs(trace, &HoughParams::default())
        .into_iter()
        .filter(|a| a.full || bulges(trace, a))
        .collect();
    if !arcs.is_empty() {
        let mut parts = decompose(trace, &arcs, &s.turn_points, &s.vertex_indices)?;
        return Ok(if parts.len() == 1 {
            parts.remove(0)
        } else {
            ShapeClass::Complex(parts)
        });
    }
    let poly = corner_polygon(trace, &s.turn_points, CORNER_TRIM, CORNER_REACH).unwrap_or(s.polygon);
    Ok(polygon_class(poly))
}

/// Cuts a trace at the ends of its detected arcs. Each arc closed by its
/// chord becomes a circular part; the rest, with the chords, becomes one
/// polygon part. A full circle passes through as the only part.
pub fn decompose_complex(trace: &ClosedTrace, arcs: &[CircleDetection]) -> Result<Vec<ShapeClass>, PlanError> {
    let s = simplify_trace(trace, DEFAULT_EPS_SIMPLIFY)?;
    decompose(trace, arcs, &s.turn_points, &s.vertex_indices)
}

fn polygon_class(poly: Polygon) -> ShapeClass {
    match classify_polygon(&poly) {
        Convexity::Convex => ShapeClass::Convex(poly),
        Convexity::Concave => ShapeClass::Concave(poly),
    }
}

/// An arc bulges out of the region when the trace turns around its center
/// in the same sense as around the whole region.
fn bulges(trace: &ClosedTrace, arc: &CircleDetection) -> bool {
    arc.sweep * trace.signed_area() > 0.0
}

fn decompose(
    trace: &ClosedTrace,
    arcs: &[CircleDetection],
    turn_points: &[usize],
    simplified: &[usize],
) -> Result<Vec<ShapeClass>, PlanError> {
    if let Some(full) = arcs.iter().find(|a| a.full) {
        return Ok(vec![ShapeClass::Circular(full.circle, ArcSpan::Full)]);
    }
    if arcs.is_empty() {
        return Err(PlanError::UnclassifiableTrace("no arcs to cut at".into()));
    }
    let pts = trace.points();
    let n = pts.len();
    for (i, a) in arcs.iter().enumerate() {
        for b in &arcs[i + 1..] {
            if a.indices(n).any(|k| b.contains(k, n)) {
                return Err(PlanError::UnclassifiableTrace(format!(
                    "arcs starting at points {} and {} overlap",
                    a.start, b.start
                )));
            }
        }
    }
    let cut: Vec<&CircleDetection> = arcs.iter().filter(|a| bulges(trace, a)).collect();
    let ends: Vec<usize> = cut.iter().flat_map(|a| [a.start, a.end(n)]).collect();
    let strictly_inside = |i: usize| cut.iter().any(|a| a.contains(i, n) && i != a.start && i != a.end(n));
    let near_end = |i: usize| ends.iter().any(|&e| pts[e].distance(pts[i]) < JOIN);
    let in_other_arc = |i: usize| arcs.iter().any(|a| !bulges(trace, a) && a.contains(i, n));

    let mut keep: Vec<usize> = ends.clone();
    keep.extend(turn_points.iter().copied().filter(|&i| !strictly_inside(i) && !near_end(i)));
    // Arcs curving into the region stay in the polygon part, as simplified.
    keep.extend(simplified.iter().copied().filter(|&i| in_other_arc(i) && !near_end(i)));
    keep.sort_unstable();
    keep.dedup();

    let total = trace.signed_area().abs();
    let mut parts = Vec::new();
    if keep.len() >= 3 {
        let ring: Vec<Point2D> = keep.iter().map(|&i| pts[i]).collect();
        if let Ok(poly) = Polygon::new(ring) {
            if poly.area() >= SLIVER * total {
                parts.push(polygon_class(poly));
            }
        }
    }
    for a in cut {
        let first = (pts[a.start] - a.circle.center).angle();
        let last = (pts[a.end(n)] - a.circle.center).angle();
        // Spans run clockwise from start to end.
        let span = if a.sweep < 0.0 {
            ArcSpan::Partial { start: first, end: last }
        } else {
            ArcSpan::Partial { start: last, end: first }
        };
        parts.push(ShapeClass::Circular(a.circle, span));
    }
    if parts.is_empty() {
        return Err(PlanError::UnclassifiableTrace("decomposition left no parts".into()));
    }
    Ok(parts)
}
