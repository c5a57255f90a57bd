//! Circle and arc detection on closed traces: Hough voting over
//! (center, radius) followed by an algebraic least-squares refit.

use std::f64::consts::PI;

use super::point::{normalize_angle, Point2D};
use super::polygon::{bounding_box, Circle};
use super::trace::ClosedTrace;

/// Detection parameters. Lengths in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoughParams {
    /// Accumulator cell size for center and radius.
    pub rho: f64,
    /// Inlier share (within `eps_fit`) that makes a full circle.
    pub theta_circle: f64,
    /// Inlier band for the full-circle test.
    pub eps_fit: f64,
    /// Residual band a partial arc's points must stay within.
    pub eps_span: f64,
    /// Smallest radius considered.
    pub r_min: f64,
    /// Shortest accepted partial arc.
    pub min_arc_length: f64,
    /// Smallest accepted partial-arc sweep (radians).
    pub min_sweep: f64,
    /// Upper bound on voting points; the trace is subsampled evenly beyond it.
    pub max_vote_points: usize,
    /// Accumulator peaks examined per detection.
    pub peaks: usize,
}

impl Default for HoughParams {
    fn default() -> Self {
        let rho = 0.05;
        Self {
            rho,
            theta_circle: 0.90,
            eps_fit: 3.0 * rho,
            eps_span: rho / 10.0,
            r_min: 0.1,
            min_arc_length: 1.0,
            min_sweep: PI / 3.0,
            max_vote_points: 720,
            peaks: 6,
        }
    }
}

/// A detected circle and the run of trace points lying on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleDetection {
    pub circle: Circle,
    /// First trace index of the run.
    pub start: usize,
    /// Number of points in the run (wrapping past the end of the trace).
    pub len: usize,
    /// True when the run is the whole trace.
    pub full: bool,
    /// Bearing of the run's first point from the center.
    pub start_angle: f64,
    /// Signed angle swept from the first to the last point of the run;
    /// negative when the trace runs clockwise around the center.
    pub sweep: f64,
}

impl CircleDetection {
    /// Trace index of the run's last point.
    pub fn end(&self, trace_len: usize) -> usize {
        (self.start + self.len - 1) % trace_len
    }

    pub fn indices(&self, trace_len: usize) -> impl Iterator<Item = usize> {
        let start = self.start;
        (0..self.len).map(move |k| (start + k) % trace_len)
    }

    pub fn contains(&self, i: usize, trace_len: usize) -> bool {
        (i + trace_len - self.start) % trace_len < self.len
    }
}

/// Result of [`fit_circle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcFit {
    pub circle: Circle,
    /// Root-mean-square radial residual.
    pub rms: f64,
}

/// Algebraic (Kåsa) least-squares circle through `points`: minimizes
/// Σ(x² + y² + Dx + Ey + F)². `None` for fewer than three points or a
/// collinear set.
pub fn fit_circle(points: &[Point2D]) -> Option<ArcFit> {
    let m = points.len();
    if m < 3 {
        return None;
    }
    let inv = 1.0 / m as f64;
    let mean = points.iter().fold(Point2D::ORIGIN, |a, p| a + *p) * inv;
    // Normal equations in centered coordinates.
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for p in points {
        let q = *p - mean;
        let row = [q.x, q.y, 1.0];
        let z = -(q.x * q.x + q.y * q.y);
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += row[i] * row[j];
            }
            b[i] += row[i] * z;
        }
    }
    let [d, e, f] = solve3(a, b)?;
    let center = Point2D::new(-0.5 * d, -0.5 * e);
    let r2 = center.norm_sq() - f;
    if !(r2 > 0.0) {
        return None;
    }
    let circle = Circle::new(center + mean, r2.sqrt()).ok()?;
    let ss: f64 = points
        .iter()
        .map(|p| (p.distance(circle.center) - circle.radius).powi(2))
        .sum();
    Some(ArcFit {
        circle,
        rms: (ss * inv).sqrt(),
    })
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..3 {
            let k = a[row][col] / a[col][col];
            for c in col..3 {
                a[row][c] -= k * a[col][c];
            }
            b[row] -= k * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for c in (row + 1)..3 {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Detects the dominant circle of a closed trace with default parameters.
/// A full circle covers the whole trace; otherwise the result is the
/// longest arc run, or `None`.
pub fn detect_circle(trace: &ClosedTrace) -> Option<CircleDetection> {
    detect_with(trace, &HoughParams::default(), &vec![false; trace.len()])
}

/// Repeats detection, masking each found arc, until no further arc is
/// found. A full circle is returned alone. Arcs come back in trace order.
pub fn detect_arcs(trace: &ClosedTrace, params: &HoughParams) -> Vec<CircleDetection> {
    let n = trace.len();
    let mut mask = vec![false; n];
    let mut found: Vec<CircleDetection> = Vec::new();
    while let Some(det) = detect_with(trace, params, &mask) {
        if det.full {
            return vec![det];
        }
        for i in det.indices(n) {
            mask[i] = true;
        }
        found.push(det);
        if found.len() >= 16 {
            break;
        }
    }
    found.sort_by_key(|d| d.start);
    merge_split_arcs(trace.points(), &mut found, params);
    found
}

/// Joins neighbouring arcs of one circle. Masking can split an arc where
/// a few points stray outside the residual band; the gap points must stay
/// within the inlier band of both fits.
fn merge_split_arcs(pts: &[Point2D], arcs: &mut Vec<CircleDetection>, params: &HoughParams) {
    let n = pts.len();
    let same = |a: &Circle, b: &Circle| {
        a.center.distance(b.center) <= params.eps_fit && (a.radius - b.radius).abs() <= params.eps_fit
    };
    'outer: loop {
        let m = arcs.len();
        if m < 2 {
            return;
        }
        for i in 0..m {
            let j = (i + 1) % m;
            let (a, b) = (arcs[i], arcs[j]);
            if !same(&a.circle, &b.circle) {
                continue;
            }
            let len = (b.end(n) + n - a.start) % n + 1;
            let gap = (a.len..len - b.len).map(|k| (a.start + k) % n);
            let near = |c: &Circle, p: Point2D| (p.distance(c.center) - c.radius).abs() <= params.eps_fit;
            if !gap.clone().all(|k| near(&a.circle, pts[k]) && near(&b.circle, pts[k])) {
                continue;
            }
            let run: Vec<Point2D> = (0..len).map(|k| pts[(a.start + k) % n]).collect();
            let Some(fit) = fit_circle(&run) else {
                continue;
            };
            let merged = CircleDetection {
                circle: fit.circle,
                start: a.start,
                len,
                full: false,
                start_angle: (pts[a.start] - fit.circle.center).angle(),
                sweep: sweep_of(pts, fit.circle.center, a.start, len),
            };
            arcs[i] = merged;
            arcs.remove(j);
            arcs.sort_by_key(|d| d.start);
            continue 'outer;
        }
        return;
    }
}

fn detect_with(
    trace: &ClosedTrace,
    params: &HoughParams,
    mask: &[bool],
) -> Option<CircleDetection> {
    let pts = trace.points();
    let n = pts.len();
    let active: Vec<usize> = (0..n).filter(|&i| !mask[i]).collect();
    if active.len() < 8 {
        return None;
    }
    let unmasked = active.len() == n;
    let (lo, hi) = bounding_box(pts);
    let r_max = 0.5 * lo.distance(hi);
    if r_max <= params.r_min {
        return None;
    }

    let stride = active.len().div_ceil(params.max_vote_points);
    let voters: Vec<Point2D> = active.iter().step_by(stride).map(|&i| pts[i]).collect();
    let acc = Accumulator::vote(&voters, lo, hi, params.r_min, r_max, params.rho);

    for (center, radius) in acc.peaks(params.peaks) {
        let Ok(mut circle) = Circle::new(center, radius) else {
            continue;
        };
        // Pull the peak onto its inliers.
        for _ in 0..3 {
            let inliers: Vec<Point2D> = active
                .iter()
                .map(|&i| pts[i])
                .filter(|p| (p.distance(circle.center) - circle.radius).abs() <= params.eps_fit)
                .collect();
            match fit_circle(&inliers) {
                Some(fit) => circle = fit.circle,
                None => break,
            }
        }
        if circle.radius < params.r_min || circle.radius > r_max {
            continue;
        }
        let residual = |i: usize| (pts[i].distance(circle.center) - circle.radius).abs();

        if unmasked {
            let inliers = (0..n).filter(|&i| residual(i) <= params.eps_fit).count();
            if inliers as f64 >= params.theta_circle * n as f64 {
                return Some(CircleDetection {
                    circle,
                    start: 0,
                    len: n,
                    full: true,
                    start_angle: (pts[0] - circle.center).angle(),
                    sweep: sweep_of(pts, circle.center, 0, n),
                });
            }
        }

        if let Some(det) = arc_run(pts, mask, circle, params) {
            return Some(det);
        }
    }
    None
}

/// Longest cyclic run of unmasked points hugging `circle`, refit once on
/// its own points and accepted only if long and wide enough.
fn arc_run(
    pts: &[Point2D],
    mask: &[bool],
    circle: Circle,
    params: &HoughParams,
) -> Option<CircleDetection> {
    let n = pts.len();
    let (start, len) = longest_run(n, |i| {
        !mask[i] && (pts[i].distance(circle.center) - circle.radius).abs() <= params.eps_span
    })?;
    let run: Vec<Point2D> = (0..len).map(|k| pts[(start + k) % n]).collect();
    let fit = fit_circle(&run)?;
    let circle = fit.circle;
    // Re-grow the run around its middle under the refit circle.
    let mid = (start + len / 2) % n;
    let hugs = |i: usize| {
        !mask[i] && (pts[i].distance(circle.center) - circle.radius).abs() <= params.eps_span
    };
    if !hugs(mid) {
        return None;
    }
    let mut first = mid;
    let mut count = 1;
    while count < n && hugs((first + n - 1) % n) {
        first = (first + n - 1) % n;
        count += 1;
    }
    let mut last = mid;
    while count < n && hugs((last + 1) % n) {
        last = (last + 1) % n;
        count += 1;
    }
    if count >= n {
        return None;
    }
    let run: Vec<Point2D> = (0..count).map(|k| pts[(first + k) % n]).collect();
    let fit = fit_circle(&run)?;
    let arc_len: f64 = run.windows(2).map(|w| w[0].distance(w[1])).sum();
    let sweep = sweep_of(pts, fit.circle.center, first, count);
    let (lo, hi) = bounding_box(pts);
    if arc_len < params.min_arc_length
        || sweep.abs() < params.min_sweep
        || fit.rms > params.eps_span
        || fit.circle.radius < params.r_min
        || fit.circle.radius > 0.5 * lo.distance(hi)
    {
        return None;
    }
    Some(CircleDetection {
        circle: fit.circle,
        start: first,
        len: count,
        full: false,
        start_angle: (pts[first] - fit.circle.center).angle(),
        sweep,
    })
}

/// Longest cyclic run of indices satisfying `pred`, as (start, len). The
/// run is shorter than `n` unless every index qualifies.
fn longest_run(n: usize, pred: impl Fn(usize) -> bool) -> Option<(usize, usize)> {
    let ok: Vec<bool> = (0..n).map(pred).collect();
    if ok.iter().all(|&b| b) {
        return Some((0, n));
    }
    // Begin scanning just after a failing index so runs never wrap mid-scan.
    let anchor = ok.iter().position(|&b| !b)?;
    let mut best: Option<(usize, usize)> = None;
    let mut cur: Option<(usize, usize)> = None;
    for k in 1..=n {
        let i = (anchor + k) % n;
        if ok[i] {
            cur = Some(match cur {
                Some((s, l)) => (s, l + 1),
                None => (i, 1),
            });
            if cur.map(|c| c.1) > best.map(|b| b.1) {
                best = cur;
            }
        } else {
            cur = None;
        }
    }
    best
}

fn sweep_of(pts: &[Point2D], center: Point2D, start: usize, len: usize) -> f64 {
    let n = pts.len();
    let mut total = 0.0;
    let mut prev = (pts[start] - center).angle();
    for k in 1..len {
        let a = (pts[(start + k) % n] - center).angle();
        total += normalize_angle(a - prev);
        prev = a;
    }
    total
}

/// Votes of every point for all (cx, cy, r) cells it lies on.
struct Accumulator {
    votes: Vec<u16>,
    nx: usize,
    ny: usize,
    nr: usize,
    origin: Point2D,
    r_min: f64,
    cell: f64,
}

/// Cell budget; the grid is coarsened beyond it.
const MAX_CELLS: f64 = 3.0e7;

impl Accumulator {
    fn vote(points: &[Point2D], lo: Point2D, hi: Point2D, r_min: f64, r_max: f64, rho: f64) -> Self {
        let dims = |cell: f64| {
            (
                ((hi.x - lo.x) / cell).ceil() as usize + 1,
                ((hi.y - lo.y) / cell).ceil() as usize + 1,
                ((r_max - r_min) / cell).ceil() as usize + 1,
            )
        };
        let mut cell = rho;
        let (mut nx, mut ny, mut nr) = dims(cell);
        let cells = (nx * ny * nr) as f64;
        if cells > MAX_CELLS {
            cell *= (cells / MAX_CELLS).cbrt();
            (nx, ny, nr) = dims(cell);
        }
        let mut votes = vec![0u16; nx * ny * nr];
        for p in points {
            for ix in 0..nx {
                let dx = p.x - (lo.x + ix as f64 * cell);
                for iy in 0..ny {
                    let dy = p.y - (lo.y + iy as f64 * cell);
                    let r = dx.hypot(dy);
                    let ir = ((r - r_min) / cell).round();
                    if ir >= 0.0 && (ir as usize) < nr {
                        let k = (ix * ny + iy) * nr + ir as usize;
                        votes[k] = votes[k].saturating_add(1);
                    }
                }
            }
        }
        Self {
            votes,
            nx,
            ny,
            nr,
            origin: lo,
            r_min,
            cell,
        }
    }

    /// Up to `k` local maxima, strongest first, each suppressing its
    /// neighbourhood of ±3 cells.
    fn peaks(&self, k: usize) -> Vec<(Point2D, f64)> {
        let mut order: Vec<usize> = (0..self.votes.len()).filter(|&i| self.votes[i] > 0).collect();
        order.sort_by(|&a, &b| self.votes[b].cmp(&self.votes[a]).then(a.cmp(&b)));
        let mut chosen: Vec<(usize, usize, usize)> = Vec::new();
        for idx in order {
            if chosen.len() >= k {
                break;
            }
            let ir = idx % self.nr;
            let iy = (idx / self.nr) % self.ny;
            let ix = idx / (self.nr * self.ny);
            debug_assert!(ix < self.nx);
            let near = chosen.iter().any(|&(x, y, r)| {
                x.abs_diff(ix) <= 3 && y.abs_diff(iy) <= 3 && r.abs_diff(ir) <= 3
            });
            if !near {
                chosen.push((ix, iy, ir));
            }
        }
        chosen
            .into_iter()
            .map(|(ix, iy, ir)| {
                (
                    Point2D::new(
                        self.origin.x + ix as f64 * self.cell,
                        self.origin.y + iy as f64 * self.cell,
                    ),
                    self.r_min + ir as f64 * self.cell,
                )
            })
            .collect()
    }
}
