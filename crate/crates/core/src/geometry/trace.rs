use super::point::{normalize_angle, Point2D};
use super::polygon::{bounding_box, shoelace};
use super::GeometryError;

/// Fewest points a valid closed trace may have.
pub const MIN_TRACE_POINTS: usize = 8;

/// A polyline recorded by dead reckoning while following a contour.
///
/// `cumulative_heading[i]` is the unwrapped heading at `points[i]`, so its
/// total change over a loop is ±2π. A closed trace does not repeat its first
/// point; the closing edge is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedTrace {
    points: Vec<Point2D>,
    cumulative_heading: Vec<f64>,
    closed: bool,
}

impl ClosedTrace {
    pub fn new(
        points: Vec<Point2D>,
        cumulative_heading: Vec<f64>,
        closed: bool,
    ) -> Result<Self, GeometryError> {
        if points.len() != cumulative_heading.len() {
            return Err(GeometryError::DegenerateInput(format!(
                "{} points but {} headings",
                points.len(),
                cumulative_heading.len()
            )));
        }
        if points.len() < MIN_TRACE_POINTS {
            return Err(GeometryError::DegenerateInput(format!(
                "trace has {} points, need {MIN_TRACE_POINTS}",
                points.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(GeometryError::DegenerateInput(format!("non-finite point {p}")));
        }
        Ok(Self {
            points,
            cumulative_heading,
            closed,
        })
    }

    /// Closed trace whose headings are the directions of travel between
    /// consecutive points, unwrapped. A repeated closing point is dropped.
    pub fn from_points(mut points: Vec<Point2D>) -> Result<Self, GeometryError> {
        if points.len() > 1 && points[0] == points[points.len() - 1] {
            points.pop();
        }
        let headings = unwrapped_headings(&points);
        Self::new(points, headings, true)
    }

    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    pub fn cumulative_heading(&self) -> &[f64] {
        &self.cumulative_heading
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distance between the last and the first point.
    pub fn closure_gap(&self) -> f64 {
        self.points[0].distance(self.points[self.points.len() - 1])
    }

    /// Shoelace area of the implicit ring; negative for a clockwise loop.
    pub fn signed_area(&self) -> f64 {
        shoelace(&self.points)
    }

    /// Length of the ring including the closing edge.
    pub fn perimeter(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| self.points[i].distance(self.points[(i + 1) % n]))
            .sum()
    }

    /// Cumulative arc length at each point, starting at 0.
    pub fn arc_lengths(&self) -> Vec<f64> {
        let mut s = Vec::with_capacity(self.points.len());
        let mut acc = 0.0;
        s.push(0.0);
        for w in self.points.windows(2) {
            acc += w[0].distance(w[1]);
            s.push(acc);
        }
        s
    }

    pub fn bounding_box(&self) -> (Point2D, Point2D) {
        bounding_box(&self.points)
    }
}

/// Directions of travel between consecutive points (the last one wraps to
/// the first), unwrapped so successive values differ by less than π.
pub(crate) fn unwrapped_headings(points: &[Point2D]) -> Vec<f64> {
    let n = points.len();
    let mut out = Vec::with_capacity(n);
    let mut prev: Option<f64> = None;
    for i in 0..n {
        let raw = (points[(i + 1) % n] - points[i]).angle();
        let h = match prev {
            None => raw,
            Some(p) => p + normalize_angle(raw - p),
        };
        out.push(h);
        prev = Some(h);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(n_side: usize) -> Vec<Point2D> {
        let corners = [
            Point2D::new(0.0, 0.0),
            Point2D::new(1.0, 0.0),
            Point2D::new(1.0, 1.0),
            Point2D::new(0.0, 1.0),
        ];
        let mut pts = Vec::new();
        for k in 0..4 {
            let (a, b) = (corners[k], corners[(k + 1) % 4]);
            for i in 0..n_side {
                pts.push(a.lerp(b, i as f64 / n_side as f64));
            }
        }
        pts
    }

    #[test]
    fn orientation_and_turn() {
        let ccw = ClosedTrace::from_points(square(10)).unwrap();
        assert!((ccw.signed_area() - 1.0).abs() < 1e-12);
        let h = ccw.cumulative_heading();
        assert!((h[h.len() - 1] - h[0] - 1.5 * std::f64::consts::PI).abs() < 1e-9);
        let cw = ClosedTrace::from_points(square(10).into_iter().rev().collect()).unwrap();
        assert!(cw.signed_area() < 0.0);
        assert!((ccw.perimeter() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn too_short_is_rejected() {
        assert!(ClosedTrace::from_points(square(1)).is_err());
    }
}
