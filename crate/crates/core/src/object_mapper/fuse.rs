use super::MappingError;
use crate::geometry::{douglas_peucker_closed, prune_redundant, Point2D, Polygon};

/// Closes two half-loops around an object into one outline. Each end of
/// one half pairs with the nearer end of the other; near each joint the
/// closest pair of points within `4·eps_close` of arc length from the ends
/// becomes the joint, which trims any overlap. The ring is simplified with
/// `eps_simplify`. A half that already closes on itself (a path grazing
/// the object is followed all round on the first pass) is the outline.
pub fn fuse_object_traces(
    half1: &[Point2D],
    half2: &[Point2D],
    eps_close: f64,
    eps_simplify: f64,
) -> Result<Polygon, MappingError> {
    let limit = 4.0 * eps_close;
    for half in [half1, half2] {
        if let Some(ring) = self_closed(half, 2.0 * eps_close) {
            return simplified(ring, eps_simplify);
        }
    }
    if half1.len() < 2 || half2.len() < 2 {
        return Err(MappingError::FusionGap { gap: f64::INFINITY, limit });
    }
    let forward = half1[half1.len() - 1].distance(half2[0]).max(half2[half2.len() - 1].distance(half1[0]));
    let backward = half1[half1.len() - 1]
        .distance(half2[half2.len() - 1])
        .max(half2[0].distance(half1[0]));
    let second: Vec<Point2D> = if backward < forward {
        half2.iter().rev().copied().collect()
    } else {
        half2.to_vec()
    };
    let first = half1;

    // Joint A: end of the first half to start of the second.
    let (i1, j1, gap_a) = joint(first, &second, limit);
    // Joint B: end of the second half to start of the first.
    let (j2, i2, gap_b) = joint(&second, first, limit);
    let gap = gap_a.max(gap_b);
    if gap > limit {
        return Err(MappingError::FusionGap { gap, limit });
    }
    if i2 > i1 || j1 > j2 {
        return Err(MappingError::FusionGap { gap: f64::INFINITY, limit });
    }
    let mut ring: Vec<Point2D> = first[i2..=i1].to_vec();
    ring.extend_from_slice(&second[j1..=j2]);
    simplified(ring, eps_simplify)
}

/// The polyline as a ring when its ends meet within `tol` after a lap
/// much longer than `tol`.
fn self_closed(pts: &[Point2D], tol: f64) -> Option<Vec<Point2D>> {
    let n = pts.len();
    if n < 4 || pts[0].distance(pts[n - 1]) > tol {
        return None;
    }
    let len: f64 = pts.windows(2).map(|w| w[0].distance(w[1])).sum();
    (len > 8.0 * tol).then(|| pts.to_vec())
}

fn simplified(mut ring: Vec<Point2D>, eps_simplify: f64) -> Result<Polygon, MappingError> {
    ring.dedup_by(|a, b| a.distance(*b) < 1e-9);
    if ring.len() > 1 && ring[0].distance(ring[ring.len() - 1]) < 1e-9 {
        ring.pop();
    }
    let mut kept = douglas_peucker_closed(&ring, eps_simplify);
    // The ring start is always kept by the simplifier; drop it when straight.
    prune_redundant(&ring, &mut kept, eps_simplify);
    Ok(Polygon::new(kept.into_iter().map(|k| ring[k]).collect())?)
}

/// Closest pair between the tail of `x` and the head of `y`, each limited
/// to `window` of arc length. Returns (index in x, index in y, distance).
fn joint(x: &[Point2D], y: &[Point2D], window: f64) -> (usize, usize, f64) {
    let tail = window_len(x.iter().rev(), window);
    let head = window_len(y.iter(), window);
    let mut best = (x.len() - 1, 0, f64::INFINITY);
    for i in x.len() - tail..x.len() {
        for (j, q) in y.iter().enumerate().take(head) {
            let d = x[i].distance(*q);
            if d < best.2 {
                best = (i, j, d);
            }
        }
    }
    best
}

/// Number of leading points whose arc length from the first stays within
/// `window`; at least one.
fn window_len<'a>(pts: impl Iterator<Item = &'a Point2D>, window: f64) -> usize {
    let mut count = 0;
    let mut len = 0.0;
    let mut prev: Option<Point2D> = None;
    for p in pts {
        if let Some(q) = prev {
            len += q.distance(*p);
            if len > window {
                break;
            }
        }
        count += 1;
        prev = Some(*p);
    }
    count.max(1)
}
