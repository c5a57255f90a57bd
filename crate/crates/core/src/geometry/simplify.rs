//! Closed-polyline simplification and turn-point extraction.
//!
//! A controller-driven trace changes heading by more than 1° at almost every
//! tick, so turns are judged on the simplified ring and only at its
//! vertices. A vertex is a turn point when the heading change measured over
//! arc-length windows of `w` on either side is large and stays concentrated:
//! doubling the window must not raise it much. A sharp corner keeps its full
//! turn at both scales, while constant curvature spreads turn linearly with
//! window length (ratio 1/2).

use super::point::{normalize_angle, Point2D, Segment};
use super::trace::ClosedTrace;
use super::{GeometryError, Polygon};

/// Default simplification tolerance (meters).
pub const DEFAULT_EPS_SIMPLIFY: f64 = 0.05;

/// Turns at or below this angle (radians) are not turn points.
pub const TURN_THRESHOLD: f64 = std::f64::consts::PI / 180.0;

/// Window length per unit of simplification tolerance.
const WINDOW_PER_EPS: f64 = 10.0;

/// Minimum share of the doubled-window turn that the single-window turn
/// must reach for the vertex to count as a corner.
const CONCENTRATION: f64 = 0.75;

/// Result of [`simplify_trace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Simplified {
    /// The simplified ring, counterclockwise.
    pub polygon: Polygon,
    /// Trace index of every retained vertex, in trace order.
    pub vertex_indices: Vec<usize>,
    /// Trace indices of the turn points, ascending.
    pub turn_points: Vec<usize>,
}

/// Simplifies a closed trace to within `eps` and reports its turn points.
pub fn simplify_trace(trace: &ClosedTrace, eps: f64) -> Result<Simplified, GeometryError> {
    if !trace.is_closed() {
        return Err(GeometryError::DegenerateInput("trace is not closed".into()));
    }
    if !(eps > 0.0) {
        return Err(GeometryError::DegenerateInput(format!("tolerance {eps}")));
    }
    let pts = trace.points();
    let mut kept = douglas_peucker_closed(pts, eps);
    prune_redundant(pts, &mut kept, eps);
    if kept.len() < 3 {
        return Err(GeometryError::DegenerateInput(format!(
            "simplified trace has {} vertices",
            kept.len()
        )));
    }
    let polygon = Polygon::new(kept.iter().map(|&i| pts[i]).collect())?;

    let ring = ArcRing::new(pts);
    let w = (WINDOW_PER_EPS * eps).min(ring.total / 8.0);
    let mut candidates: Vec<(usize, f64)> = Vec::new();
    for &i in &kept {
        let (t1, u1) = ring.turn(i, w);
        if t1.abs() <= TURN_THRESHOLD + 3.0 * u1 {
            continue;
        }
        let (t2, _) = ring.turn(i, 2.0 * w);
        if t1 * t2 > 0.0 && t1.abs() > CONCENTRATION * t2.abs() {
            candidates.push((i, t1.abs()));
        }
    }
    let turn_points = merge_nearby(&ring, candidates, w);
    Ok(Simplified {
        polygon,
        vertex_indices: kept,
        turn_points,
    })
}

/// Douglas-Peucker on a closed ring. The ring is split at index 0 and at the
/// point farthest from it, and each half is simplified separately. Returns
/// retained indices in ascending order.
pub fn douglas_peucker_closed(points: &[Point2D], eps: f64) -> Vec<usize> {
    let n = points.len();
    if n < 3 {
        return (0..n).collect();
    }
    let far = (1..n)
        .max_by(|&a, &b| {
            points[0]
                .distance(points[a])
                .total_cmp(&points[0].distance(points[b]))
        })
        .unwrap_or(1);
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[far] = true;
    // Index n stands for index 0 when closing the ring.
    let at = |i: usize| points[i % n];
    let mut stack = vec![(0usize, far), (far, n)];
    while let Some((lo, hi)) = stack.pop() {
        if hi <= lo + 1 {
            continue;
        }
        let seg = Segment::new(at(lo), at(hi));
        let (mut best, mut best_d) = (lo, -1.0);
        for i in (lo + 1)..hi {
            let d = seg.distance_to_point(at(i));
            if d > best_d {
                best = i;
                best_d = d;
            }
        }
        if best_d > eps {
            keep[best % n] = true;
            stack.push((lo, best));
            stack.push((best, hi));
        }
    }
    (0..n).filter(|&i| keep[i]).collect()
}

/// Drops retained vertices whose neighbours can be joined directly while
/// every raw point in between stays within `eps` of the joining segment.
pub(crate) fn prune_redundant(points: &[Point2D], kept: &mut Vec<usize>, eps: f64) {
    let n = points.len();
    let mut changed = true;
    while changed && kept.len() > 3 {
        changed = false;
        let mut k = 0;
        while k < kept.len() && kept.len() > 3 {
            let m = kept.len();
            let prev = kept[(k + m - 1) % m];
            let next = kept[(k + 1) % m];
            let seg = Segment::new(points[prev], points[next]);
            let mut i = (prev + 1) % n;
            let mut ok = true;
            while i != next {
                if seg.distance_to_point(points[i]) > eps {
                    ok = false;
                    break;
                }
                i = (i + 1) % n;
            }
            if ok {
                kept.remove(k);
                changed = true;
            } else {
                k += 1;
            }
        }
    }
}

/// Keeps the strongest candidate within each cluster of candidates closer
/// than `w` along the ring.
fn merge_nearby(ring: &ArcRing, mut candidates: Vec<(usize, f64)>, w: f64) -> Vec<usize> {
    if candidates.len() < 2 {
        return candidates.into_iter().map(|c| c.0).collect();
    }
    candidates.sort_by_key(|c| c.0);
    let m = candidates.len();
    // Start a cluster after the widest gap so no cluster straddles index 0.
    let gap = |k: usize| ring.forward_distance(candidates[k].0, candidates[(k + 1) % m].0);
    let start = (0..m)
        .max_by(|&a, &b| gap(a).total_cmp(&gap(b)))
        .map(|k| (k + 1) % m)
        .unwrap_or(0);
    let mut out = Vec::new();
    let mut best = candidates[start];
    for step in 1..=m {
        let k = (start + step) % m;
        let prev = (start + step - 1) % m;
        if step < m && gap(prev) < w {
            if candidates[k].1 > best.1 {
                best = candidates[k];
            }
        } else {
            out.push(best.0);
            best = candidates[k];
        }
    }
    out.sort_unstable();
    out
}

/// Arc-length view of a closed ring.
struct ArcRing<'a> {
    points: &'a [Point2D],
    /// Arc length at each point.
    s: Vec<f64>,
    total: f64,
}

impl<'a> ArcRing<'a> {
    fn new(points: &'a [Point2D]) -> Self {
        let n = points.len();
        let mut s = Vec::with_capacity(n);
        let mut acc = 0.0;
        for i in 0..n {
            s.push(acc);
            acc += points[i].distance(points[(i + 1) % n]);
        }
        Self {
            points,
            s,
            total: acc,
        }
    }

    fn forward_distance(&self, from: usize, to: usize) -> f64 {
        (self.s[to] - self.s[from]).rem_euclid(self.total)
    }

    /// Points from `i` walking forward or backward while within arc length `w`.
    fn window(&self, i: usize, w: f64, forward: bool) -> Vec<Point2D> {
        let n = self.points.len();
        let mut out = vec![self.points[i]];
        let mut j = i;
        for _ in 1..n {
            j = if forward { (j + 1) % n } else { (j + n - 1) % n };
            let d = if forward {
                self.forward_distance(i, j)
            } else {
                self.forward_distance(j, i)
            };
            if d > w {
                break;
            }
            out.push(self.points[j]);
        }
        if !forward {
            out.reverse();
        }
        out
    }

    /// Signed heading change across point `i` between the incoming and the
    /// outgoing window of length `w`, with an uncertainty estimate from the
    /// fit residuals.
    fn turn(&self, i: usize, w: f64) -> (f64, f64) {
        let (a, ua) = fit_direction(&self.window(i, w, false));
        let (b, ub) = fit_direction(&self.window(i, w, true));
        (normalize_angle(b - a), ua + ub)
    }
}

/// Principal direction of a point run, oriented from its first to its last
/// point, plus an angular uncertainty from the perpendicular residuals.
fn fit_direction(run: &[Point2D]) -> (f64, f64) {
    let m = run.len();
    let chord = run[m - 1] - run[0];
    if m < 3 {
        return (chord.angle(), 0.0);
    }
    let inv = 1.0 / m as f64;
    let (mut cx, mut cy) = (0.0, 0.0);
    for p in run {
        cx += p.x;
        cy += p.y;
    }
    cx *= inv;
    cy *= inv;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in run {
        let (dx, dy) = (p.x - cx, p.y - cy);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let mut dir = Point2D::from_angle(theta);
    if dir.dot(chord) < 0.0 {
        dir = -dir;
    }
    // Residual variance is the smaller eigenvalue of the scatter matrix.
    let tr = sxx + syy;
    let det = sxx * syy - sxy * sxy;
    let minor = (0.5 * tr - (0.25 * tr * tr - det).max(0.0).sqrt()).max(0.0) * inv;
    let span = chord.norm().max(f64::EPSILON);
    let uncertainty = (minor.sqrt() * (12.0 * inv).sqrt() / span).min(std::f64::consts::PI);
    (dir.angle(), uncertainty)
}

/// Fits a straight line to every run between consecutive turn points and
/// intersects neighbouring lines to recover sharp corners. Falls back to
/// the turn point itself when neighbouring runs are nearly parallel or their
/// intersection lands farther than `reach` from it.
pub(crate) fn corner_polygon(
    trace: &ClosedTrace,
    turn_points: &[usize],
    trim: f64,
    reach: f64,
) -> Option<Polygon> {
    let m = turn_points.len();
    if m < 3 {
        return None;
    }
    let pts = trace.points();
    let ring = ArcRing::new(pts);
    let n = pts.len();
    let mut lines = Vec::with_capacity(m);
    for k in 0..m {
        let (a, b) = (turn_points[k], turn_points[(k + 1) % m]);
        let len = ring.forward_distance(a, b);
        let cut = trim.min(len / 4.0);
        let mut run = Vec::new();
        let mut i = a;
        while i != b {
            let sa = ring.forward_distance(a, i);
            if sa >= cut && len - sa >= cut {
                run.push(pts[i]);
            }
            i = (i + 1) % n;
        }
        if run.len() < 2 {
            run = vec![pts[a], pts[b]];
        }
        let (theta, _) = fit_direction(&run);
        let c = run.iter().fold(Point2D::ORIGIN, |acc, p| acc + *p) * (1.0 / run.len() as f64);
        lines.push((c, Point2D::from_angle(theta)));
    }
    let mut corners = Vec::with_capacity(m);
    for k in 0..m {
        // Corner k sits between the run ending at it and the run leaving it.
        let (p, r) = lines[(k + m - 1) % m];
        let (q, s) = lines[k];
        let tp = pts[turn_points[k]];
        let denom = r.cross(s);
        let corner = if denom.abs() < (1.0f64).to_radians().sin() {
            tp
        } else {
            let t = (q - p).cross(s) / denom;
            let x = p + r * t;
            if x.distance(tp) <= reach {
                x
            } else {
                tp
            }
        };
        corners.push(corner);
    }
    Polygon::new(corners).ok()
}
