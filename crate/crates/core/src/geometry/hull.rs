//! Gift-wrapping (Jarvis march) hull and the orientation-based
//! convex/concave test built on it.
//!
//! The march runs in O(n·h) for `h` hull vertices. Collinear points are
//! dropped so that hulls are canonical: every returned vertex is a strict
//! turn, and ties on direction go to the farthest candidate.

use super::point::{orient, Point2D};
use super::{GeometryError, Polygon, EPS_CROSS};

/// Convex hull of `points`, counterclockwise, starting from the lowest
/// leftmost input point.
pub fn convex_hull(points: &[Point2D]) -> Result<Polygon, GeometryError> {
    let mut pts: Vec<Point2D> = points.to_vec();
    if let Some(p) = pts.iter().find(|p| !p.is_finite()) {
        return Err(GeometryError::DegenerateInput(format!("non-finite point {p}")));
    }
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    if pts.len() < 3 {
        return Err(GeometryError::DegenerateInput(format!(
            "{} distinct points",
            pts.len()
        )));
    }

    let start = 0; // lexicographically smallest is always a hull vertex
    let mut hull = Vec::new();
    let mut current = start;
    loop {
        hull.push(pts[current]);
        if hull.len() > pts.len() {
            // Inconsistent orientation answers on near-degenerate input.
            return Err(GeometryError::DegenerateInput(
                "gift wrapping did not close".into(),
            ));
        }
        let origin = pts[current];
        let mut candidate = if current == 0 { 1 } else { 0 };
        for (r, &p) in pts.iter().enumerate() {
            if r == current || r == candidate {
                continue;
            }
            let turn = orient(origin, pts[candidate], p);
            if turn < -EPS_CROSS
                || (turn.abs() <= EPS_CROSS
                    && origin.distance(p) > origin.distance(pts[candidate]))
            {
                candidate = r;
            }
        }
        current = candidate;
        if current == start {
            break;
        }
    }

    if hull.len() < 3 {
        return Err(GeometryError::DegenerateInput("all points collinear".into()));
    }
    Polygon::new_unchecked_simple(hull)
        .map_err(|_| GeometryError::DegenerateInput("all points collinear".into()))
}

/// Convexity of a simple polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Concave,
}

/// Walks the counterclockwise ring and reports `Concave` as soon as one
/// successor edge turns clockwise (cross product below `−EPS_CROSS`).
pub fn classify_polygon(poly: &Polygon) -> Convexity {
    let n = poly.len();
    for i in 0..n {
        let a = poly.vertex(i + n - 1);
        let b = poly.vertex(i);
        let c = poly.vertex(i + 1);
        if orient(a, b, c) < -EPS_CROSS {
            return Convexity::Concave;
        }
    }
    Convexity::Convex
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2D {
        Point2D::new(x, y)
    }

    #[test]
    fn interior_point_drops_out() {
        let hull = convex_hull(&[p(0.0, 0.0), p(2.0, 0.0), p(1.0, 1.0), p(1.0, 3.0)]).unwrap();
        assert_eq!(hull.vertices(), &[p(0.0, 0.0), p(2.0, 0.0), p(1.0, 3.0)]);
    }

    #[test]
    fn square_is_its_own_hull() {
        let sq = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
        let hull = convex_hull(&sq).unwrap();
        assert_eq!(hull.vertices(), &sq);
    }

    #[test]
    fn collinear_points_are_dropped() {
        let pts = [
            p(0.0, 0.0),
            p(0.5, 0.0),
            p(1.0, 0.0),
            p(1.0, 0.5),
            p(1.0, 1.0),
            p(0.0, 1.0),
            p(0.0, 0.5),
        ];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.len(), 4);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            convex_hull(&[p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0), p(3.0, 3.0)]),
            Err(GeometryError::DegenerateInput(_))
        ));
        assert!(convex_hull(&[p(0.0, 0.0), p(0.0, 0.0), p(1.0, 0.0)]).is_err());
        assert!(convex_hull(&[]).is_err());
    }

    #[test]
    fn classify_square_and_l() {
        let sq = Polygon::rectangle(p(0.0, 0.0), p(1.0, 1.0)).unwrap();
        assert_eq!(classify_polygon(&sq), Convexity::Convex);
        let l = Polygon::new(vec![
            p(0.0, 0.0),
            p(2.0, 0.0),
            p(2.0, 1.0),
            p(1.0, 1.0),
            p(1.0, 2.0),
            p(0.0, 2.0),
        ])
        .unwrap();
        assert_eq!(classify_polygon(&l), Convexity::Concave);
        // Orientation of the input does not matter.
        let l_cw = Polygon::new(l.vertices().iter().rev().copied().collect()).unwrap();
        assert_eq!(classify_polygon(&l_cw), Convexity::Concave);
    }
}
