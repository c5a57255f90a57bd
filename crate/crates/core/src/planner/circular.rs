use std::f64::consts::FRAC_PI_2;

use super::{check_alpha, ArcSpan, PathPlan, PathPlanEntry, PlanError};
use crate::geometry::{Circle, Point2D, Segment, EPS_PT};

/// Plan of a circular part. Boundary points start at the span start (bearing
/// 0 for a full circle) and step clockwise by arc length `alpha`. A full
/// circle gets one diameter per point, antipodal repeats dropped; an arc
/// gets radii toward the center, cut at the chord when the center lies
/// beyond it.
pub fn plan_circular(c: &Circle, span: ArcSpan, alpha: f64) -> Result<PathPlan, PlanError> {
    let entries = circular_entries(c, span, alpha, 0)?;
    Ok(PathPlan::assemble(entries, alpha, Vec::new()))
}

/// Bearings visited clockwise from `start`. Stepping stops once the walked
/// arc reaches the span; an arc also gets its end point.
pub(crate) fn stepped_bearings(r: f64, span: ArcSpan, alpha: f64) -> Vec<f64> {
    let sweep = span.sweep();
    let arc = sweep * r;
    let start = match span {
        ArcSpan::Full => 0.0,
        ArcSpan::Partial { start, .. } => start,
    };
    let mut out = Vec::new();
    let mut k = 0u32;
    while f64::from(k) * alpha < arc - EPS_PT {
        out.push(start - f64::from(k) * alpha / r);
        k += 1;
    }
    if let ArcSpan::Partial { .. } = span {
        out.push(start - sweep);
    }
    out
}

pub(crate) fn circular_entries(
    c: &Circle,
    span: ArcSpan,
    alpha: f64,
    part_id: u32,
) -> Result<Vec<PathPlanEntry>, PlanError> {
    check_alpha(alpha)?;
    let arc = span.sweep() * c.radius;
    if alpha >= arc {
        return Err(PlanError::AlphaExceedsArc { alpha, arc });
    }
    let mut entries: Vec<PathPlanEntry> = Vec::new();
    for theta in stepped_bearings(c.radius, span, alpha) {
        let p = c.point_at(theta);
        let end = match span {
            ArcSpan::Full => c.point_at(theta + std::f64::consts::PI),
            ArcSpan::Partial { start, end } => radius_end(c, p, c.point_at(start), c.point_at(end)),
        };
        if p.distance(end) <= EPS_PT {
            continue;
        }
        let entry = PathPlanEntry {
            line_id: 0,
            start_vertex: p,
            end_point: end,
            // A line toward the center is normal to the tangent.
            start_angle: FRAC_PI_2,
            part_id,
        };
        if !entries.iter().any(|e| e.same_segment(&entry)) {
            entries.push(entry);
        }
    }
    Ok(entries)
}

/// End of the radius from `p` toward the center: the center itself, or the
/// point where the radius meets the chord `s → e` first.
fn radius_end(c: &Circle, p: Point2D, s: Point2D, e: Point2D) -> Point2D {
    let radius = Segment::new(p, c.center);
    let chord = Segment::new(s, e);
    // The part lies left of the chord; the center is beyond it when right.
    if chord.direction().cross(c.center - s) >= -EPS_PT * chord.length() {
        return c.center;
    }
    match radius.line_intersection_params(&chord) {
        Some((t, _)) => radius.point_at(t.clamp(0.0, 1.0)),
        None => p,
    }
}
