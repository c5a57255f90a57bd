use super::{check_alpha, PathPlan, PathPlanEntry, PlanError, PlanWarning};
use crate::geometry::{segment_in_region, segment_on_boundary, Point2D, Polygon, EPS_PT};

/// Fan plan of a convex polygon.
pub fn plan_convex(poly: &Polygon, alpha: f64) -> Result<PathPlan, PlanError> {
    check_alpha(alpha)?;
    let (entries, warnings) = fan_entries(poly, alpha, false, 0);
    Ok(PathPlan::assemble(entries, alpha, warnings))
}

/// Fan plan of a concave polygon: candidates leaving the region are dropped.
pub fn plan_concave(poly: &Polygon, alpha: f64) -> Result<PathPlan, PlanError> {
    check_alpha(alpha)?;
    let (entries, warnings) = fan_entries(poly, alpha, true, 0);
    Ok(PathPlan::assemble(entries, alpha, warnings))
}

/// Points along `a → b` at arc length 0, α, 2α, ... plus `b` itself; the
/// last gap is at most α.
pub(crate) fn edge_stops(a: Point2D, b: Point2D, alpha: f64) -> Vec<Point2D> {
    let len = a.distance(b);
    let mut out = Vec::with_capacity((len / alpha) as usize + 2);
    let mut k = 0u32;
    loop {
        let t = f64::from(k) * alpha;
        if t >= len - EPS_PT {
            break;
        }
        out.push(a.lerp(b, t / len));
        k += 1;
    }
    out.push(b);
    out
}

/// Anticlockwise angle in [0, 2π) from direction `from` to direction `to`.
pub(crate) fn ccw_angle(from: Point2D, to: Point2D) -> f64 {
    from.cross(to).atan2(from.dot(to)).rem_euclid(std::f64::consts::TAU)
}

/// Candidate lines from every vertex to every edge not touching it. Edges
/// are swept in ring order after the vertex, each from the end shared with
/// the previous edge. Lines along the boundary are dropped, as are lines
/// leaving the region when `check_region`. A line found from both ends is
/// kept once, owned by the lexicographically smaller end.
pub(crate) fn fan_entries(
    poly: &Polygon,
    alpha: f64,
    check_region: bool,
    part_id: u32,
) -> (Vec<PathPlanEntry>, Vec<PlanWarning>) {
    let n = poly.len();
    let mut entries: Vec<PathPlanEntry> = Vec::new();
    for i in 0..n {
        let p = poly.vertex(i);
        let leaving = poly.vertex(i + 1) - p;
        for k in 1..n - 1 {
            let j = i + k;
            let (a, b) = (poly.vertex(j), poly.vertex(j + 1));
            for q in edge_stops(a, b, alpha) {
                if q.approx_eq(p, EPS_PT) || segment_on_boundary(p, q, poly) {
                    continue;
                }
                if check_region && !segment_in_region(p, q, poly) {
                    continue;
                }
                let entry = PathPlanEntry {
                    line_id: 0,
                    start_vertex: p,
                    end_point: q,
                    start_angle: ccw_angle(leaving, q - p),
                    part_id,
                };
                match entries.iter_mut().find(|e| e.same_segment(&entry)) {
                    Some(old) => {
                        if entry.start_vertex.lex_cmp(&old.start_vertex).is_lt() {
                            *old = entry;
                        }
                    }
                    None => entries.push(entry),
                }
            }
        }
    }
    let mut warnings = Vec::new();
    let longest = poly.longest_edge();
    if alpha >= longest {
        warnings.push(PlanWarning::AlphaExceedsLongestEdge { part_id, alpha, longest });
    }
    if entries.is_empty() {
        warnings.push(PlanWarning::NoInteriorLines { part_id });
    }
    (entries, warnings)
}
