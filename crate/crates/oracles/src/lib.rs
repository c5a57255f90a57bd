//! Slow, obviously-correct reference implementations used to cross-check
//! the library in tests. Everything works on plain `[f64; 2]` so that no
//! library code is shared with the implementations under test.

use std::f64::consts::PI;

use rand::Rng;

pub type P = [f64; 2];

fn sub(a: P, b: P) -> P {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: P, b: P) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn dist(a: P, b: P) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

pub fn dist_point_segment(p: P, a: P, b: P) -> f64 {
    let ab = sub(b, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    if len2 == 0.0 {
        return dist(p, a);
    }
    let ap = sub(p, a);
    let t = ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
}

/// Distance from `p` to the closed ring `poly`.
pub fn dist_to_ring(p: P, poly: &[P]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| dist_point_segment(p, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

pub fn signed_area(poly: &[P]) -> f64 {
    let n = poly.len();
    0.5 * (0..n).map(|i| cross(poly[i], poly[(i + 1) % n])).sum::<f64>()
}

/// Hull vertices by the angular-gap criterion: a point is extreme iff the
/// directions to all other points leave a gap wider than a half turn.
/// Points in the middle of a hull edge leave a gap of exactly π and are
/// excluded. Returned in input order, duplicates collapsed.
pub fn brute_force_hull(points: &[P]) -> Vec<P> {
    let mut out: Vec<P> = Vec::new();
    for &p in points {
        let mut angles: Vec<f64> = points
            .iter()
            .filter(|q| dist(p, **q) > 1e-12)
            .map(|q| (q[1] - p[1]).atan2(q[0] - p[0]))
            .collect();
        if angles.is_empty() {
            continue;
        }
        angles.sort_by(f64::total_cmp);
        let mut gap = angles[0] + 2.0 * PI - angles[angles.len() - 1];
        for w in angles.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        if gap > PI + 1e-9 && !out.iter().any(|q| dist(*q, p) <= 1e-12) {
            out.push(p);
        }
    }
    out
}

/// Winding number of `poly` around `p` (nonzero means inside).
pub fn winding_number(p: P, poly: &[P]) -> i32 {
    let n = poly.len();
    let mut wn = 0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let side = cross(sub(b, a), sub(p, a));
        if a[1] <= p[1] {
            if b[1] > p[1] && side > 0.0 {
                wn += 1;
            }
        } else if b[1] <= p[1] && side < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// 0 = outside, 1 = on boundary (within `tol`), 2 = inside.
pub fn locate(p: P, poly: &[P], tol: f64) -> u8 {
    if dist_to_ring(p, poly) <= tol {
        1
    } else if winding_number(p, poly) != 0 {
        2
    } else {
        0
    }
}

/// Samples `samples + 1` evenly spaced points of segment `ab` and reports
/// whether none is outside `poly`.
pub fn segment_inside_sampled(a: P, b: P, poly: &[P], samples: usize, tol: f64) -> bool {
    (0..=samples).all(|k| {
        let t = k as f64 / samples as f64;
        locate([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])], poly, tol) != 0
    })
}

/// Whether every sampled point of `ab` lies on the ring.
pub fn segment_on_ring_sampled(a: P, b: P, poly: &[P], samples: usize, tol: f64) -> bool {
    (0..=samples).all(|k| {
        let t = k as f64 / samples as f64;
        dist_to_ring([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])], poly) <= tol
    })
}

/// Strictly convex polygon with `n` vertices on a random rotated ellipse,
/// counterclockwise.
pub fn random_convex_polygon<R: Rng>(rng: &mut R, n: usize) -> Vec<P> {
    let (rx, ry) = (rng.random_range(0.5..3.0), rng.random_range(0.5..3.0));
    let rot: f64 = rng.random_range(0.0..PI);
    let (cx, cy) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
    let angles = spread_angles(rng, n);
    angles
        .into_iter()
        .map(|t| {
            let (x, y) = (rx * t.cos(), ry * t.sin());
            [
                cx + x * rot.cos() - y * rot.sin(),
                cy + x * rot.sin() + y * rot.cos(),
            ]
        })
        .collect()
}

/// Star-shaped simple polygon with `n` vertices at random radii around the
/// origin, counterclockwise. Usually concave.
pub fn random_star_polygon<R: Rng>(rng: &mut R, n: usize) -> Vec<P> {
    spread_angles(rng, n)
        .into_iter()
        .map(|t| {
            let r = rng.random_range(0.4..2.0);
            [r * t.cos(), r * t.sin()]
        })
        .collect()
}

/// Sorted angles in [0, 2π) with a minimum separation so vertices are
/// well apart.
fn spread_angles<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let slot = 2.0 * PI / n as f64;
    (0..n)
        .map(|k| slot * (k as f64 + rng.random_range(0.15..0.85)))
        .collect()
}

/// Samples the curve of points at distance exactly `d` from the ring on
/// the inner (`inward = true`) or outer side: every edge shifted by `d`
/// plus arcs of radius `d` around every vertex, keeping only samples that
/// are at least `d - tol` from the whole ring.
pub fn offset_samples(poly: &[P], d: f64, inward: bool, spacing: f64) -> Vec<P> {
    let ccw = signed_area(poly) > 0.0;
    let n = poly.len();
    // Inner side of a CCW ring is to the left of each edge.
    let left = inward == ccw;
    let mut raw: Vec<P> = Vec::new();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let len = dist(a, b);
        let (ux, uy) = ((b[0] - a[0]) / len, (b[1] - a[1]) / len);
        let (nx, ny) = if left { (-uy, ux) } else { (uy, -ux) };
        let steps = (len / spacing).ceil().max(1.0) as usize;
        for k in 0..=steps {
            let t = len * k as f64 / steps as f64;
            raw.push([a[0] + ux * t + nx * d, a[1] + uy * t + ny * d]);
        }
        let arc_steps = ((2.0 * PI * d) / spacing).ceil().max(8.0) as usize;
        for k in 0..arc_steps {
            let t = 2.0 * PI * k as f64 / arc_steps as f64;
            raw.push([a[0] + d * t.cos(), a[1] + d * t.sin()]);
        }
    }
    let tol = 1e-9 + d * 1e-9;
    raw.into_iter()
        .filter(|p| dist_to_ring(*p, poly) >= d - 1e-7 - tol)
        .filter(|p| (winding_number(*p, poly) != 0) == inward)
        .collect()
}

/// Samples of the circle at distance `d` outside (or inside) a circle.
pub fn circle_offset_samples(c: P, r: f64, d: f64, inward: bool, spacing: f64) -> Vec<P> {
    let rr = if inward { r - d } else { r + d };
    let steps = ((2.0 * PI * rr) / spacing).ceil() as usize;
    (0..steps)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / steps as f64;
            [c[0] + rr * t.cos(), c[1] + rr * t.sin()]
        })
        .collect()
}

/// Largest distance from a point of `a` to the set `b`.
pub fn directed_hausdorff(a: &[P], b: &[P]) -> f64 {
    a.iter()
        .map(|p| b.iter().map(|q| dist(*p, *q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

pub fn hausdorff(a: &[P], b: &[P]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Points every `spacing` along the closed ring, starting at its first
/// vertex and following its orientation.
pub fn densify_ring(poly: &[P], spacing: f64) -> Vec<P> {
    let n = poly.len();
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let steps = (dist(a, b) / spacing).ceil().max(1.0) as usize;
        for k in 0..steps {
            let t = k as f64 / steps as f64;
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// `n` points on a circle starting at bearing 0, clockwise or not.
pub fn circle_trace(c: P, r: f64, n: usize, clockwise: bool) -> Vec<P> {
    let sign = if clockwise { -1.0 } else { 1.0 };
    (0..n)
        .map(|k| {
            let t = sign * 2.0 * PI * k as f64 / n as f64;
            [c[0] + r * t.cos(), c[1] + r * t.sin()]
        })
        .collect()
}

/// Counterclockwise stadium: a `2·half × 2·r` rectangle centered at `c`
/// with semicircular caps on its left and right ends. Returns the points
/// and the index ranges `[start, end)` of the two caps.
pub fn stadium_trace(c: P, half: f64, r: f64, spacing: f64) -> (Vec<P>, [(usize, usize); 2]) {
    let mut pts = Vec::new();
    let straight = ((2.0 * half) / spacing).round() as usize;
    let cap = ((PI * r) / spacing).round() as usize;
    // Bottom side, left to right.
    for k in 0..straight {
        let t = k as f64 / straight as f64;
        pts.push([c[0] - half + 2.0 * half * t, c[1] - r]);
    }
    let right_start = pts.len();
    for k in 0..cap {
        let t = -PI / 2.0 + PI * k as f64 / cap as f64;
        pts.push([c[0] + half + r * t.cos(), c[1] + r * t.sin()]);
    }
    let right = (right_start, pts.len());
    for k in 0..straight {
        let t = k as f64 / straight as f64;
        pts.push([c[0] + half - 2.0 * half * t, c[1] + r]);
    }
    let left_start = pts.len();
    for k in 0..cap {
        let t = PI / 2.0 + PI * k as f64 / cap as f64;
        pts.push([c[0] - half + r * t.cos(), c[1] + r * t.sin()]);
    }
    let left = (left_start, pts.len());
    (pts, [right, left])
}

/// Fan-line enumeration for a polygon plan: for every vertex and every edge
/// not touching it, lines to points stepped `alpha` from the edge's start
/// plus its far end. Lines running along the ring or leaving the polygon
/// (by dense sampling) are dropped and unordered duplicates merged.
pub fn enumerate_fan_lines(poly: &[P], alpha: f64) -> Vec<(P, P)> {
    let n = poly.len();
    let mut out: Vec<(P, P)> = Vec::new();
    for v in 0..n {
        for e in 0..n {
            if e == v || (e + 1) % n == v {
                continue;
            }
            let (a, b) = (poly[e], poly[(e + 1) % n]);
            let len = dist(a, b);
            let mut ts = Vec::new();
            let mut t = 0.0;
            while t < len - 1e-9 {
                ts.push(t);
                t += alpha;
            }
            ts.push(len);
            for t in ts {
                let q = [a[0] + (b[0] - a[0]) * t / len, a[1] + (b[1] - a[1]) * t / len];
                let p = poly[v];
                if segment_on_ring_sampled(p, q, poly, 2000, 1e-7) {
                    continue;
                }
                if !segment_inside_sampled(p, q, poly, 10_000, 1e-7) {
                    continue;
                }
                let dup = out.iter().any(|(x, y)| {
                    (dist(*x, p) < 1e-6 && dist(*y, q) < 1e-6)
                        || (dist(*x, q) < 1e-6 && dist(*y, p) < 1e-6)
                });
                if !dup {
                    out.push((p, q));
                }
            }
        }
    }
    out
}

/// Points visited when stepping clockwise by arc length `alpha` around a
/// circle of radius `r` from bearing 0, stopping before returning to an
/// already visited bearing. Returns bearings in radians.
pub fn circle_stepping(r: f64, alpha: f64) -> Vec<f64> {
    let step = alpha / r;
    let mut out: Vec<f64> = Vec::new();
    let mut k = 0usize;
    loop {
        let theta = (-(k as f64) * step).rem_euclid(2.0 * PI);
        let seen = out.iter().any(|t| {
            let d = (t - theta).rem_euclid(2.0 * PI);
            d.min(2.0 * PI - d) * r < 1e-6
        });
        if seen || k > 100_000 {
            break;
        }
        out.push(theta);
        k += 1;
    }
    out
}

/// Number of distinct diameters through the stepped points of a full
/// circle: antipodal pairs count once.
pub fn count_diameters(bearings: &[f64]) -> usize {
    let mut lines: Vec<f64> = Vec::new();
    for t in bearings {
        let m = t.rem_euclid(PI);
        if !lines.iter().any(|l| {
            let d = (l - m).abs();
            d.min(PI - d) < 1e-9
        }) {
            lines.push(m);
        }
    }
    lines.len()
}

/// First distance at which the ray from `o` along unit `dir` meets the ring.
pub fn ray_hit(o: P, dir: P, poly: &[P]) -> Option<f64> {
    let n = poly.len();
    let mut best: Option<f64> = None;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let s = sub(b, a);
        let denom = cross(dir, s);
        if denom.abs() < 1e-15 {
            continue;
        }
        let ao = sub(a, o);
        let t = cross(ao, s) / denom;
        let u = cross(ao, dir) / denom;
        if t >= 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u) {
            best = Some(best.map_or(t, |b| b.min(t)));
        }
    }
    best
}

/// Ordinary least-squares fit `y = a + b·x`, returning R².
pub fn r_squared(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy * sxy / (sxx * syy)
}
