use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::point::{Point2D, Segment};
use super::{GeometryError, EPS_PT};

/// A simple polygon stored counterclockwise. The closing edge from the last
/// vertex back to the first is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2D>,
}

impl Polygon {
    /// Validates and normalizes a vertex ring: consecutive duplicates (within
    /// `EPS_PT`) are merged, orientation is made counterclockwise, and the
    /// ring must be simple with at least three vertices and non-zero area.
    pub fn new(vertices: Vec<Point2D>) -> Result<Self, GeometryError> {
        let mut poly = Self::normalized(vertices)?;
        if let Some((i, j)) = poly.first_self_intersection() {
            return Err(GeometryError::InvalidPolygon(format!(
                "edges {i} and {j} intersect"
            )));
        }
        poly.vertices.shrink_to_fit();
        Ok(poly)
    }

    /// Like [`Polygon::new`] but skips the O(n²) simplicity check. For rings
    /// that are simple by construction (regular polygons, clipped results).
    pub(crate) fn new_unchecked_simple(vertices: Vec<Point2D>) -> Result<Self, GeometryError> {
        Self::normalized(vertices)
    }

    fn normalized(vertices: Vec<Point2D>) -> Result<Self, GeometryError> {
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(GeometryError::InvalidPolygon(format!(
                "non-finite vertex {p}"
            )));
        }
        let mut ring: Vec<Point2D> = Vec::with_capacity(vertices.len());
        for v in vertices {
            if ring.last().is_none_or(|last| !last.approx_eq(v, EPS_PT)) {
                ring.push(v);
            }
        }
        while ring.len() > 1 && ring[0].approx_eq(ring[ring.len() - 1], EPS_PT) {
            ring.pop();
        }
        if ring.len() < 3 {
            return Err(GeometryError::InvalidPolygon(format!(
                "need at least 3 distinct vertices, got {}",
                ring.len()
            )));
        }
        let area = shoelace(&ring);
        if area.abs() <= f64::EPSILON {
            return Err(GeometryError::InvalidPolygon("zero area".into()));
        }
        if area < 0.0 {
            ring.reverse();
        }
        Ok(Self { vertices: ring })
    }

    pub fn rectangle(min: Point2D, max: Point2D) -> Result<Self, GeometryError> {
        Self::new(vec![
            min,
            Point2D::new(max.x, min.y),
            max,
            Point2D::new(min.x, max.y),
        ])
    }

    pub fn vertices(&self) -> &[Point2D] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point2D {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1` (wrapping).
    pub fn edge(&self, i: usize) -> Segment {
        let n = self.vertices.len();
        Segment::new(self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    /// Positive (counterclockwise) area.
    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|e| e.length()).sum()
    }

    pub fn centroid(&self) -> Point2D {
        let mut cx = 0.0;
        let mut cy = 0.0;
        let n = self.vertices.len();
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let c = p.cross(q);
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        let k = 1.0 / (6.0 * self.area());
        Point2D::new(cx * k, cy * k)
    }

    pub fn bounding_box(&self) -> (Point2D, Point2D) {
        bounding_box(&self.vertices)
    }

    pub fn longest_edge(&self) -> f64 {
        self.edges().map(|e| e.length()).fold(0.0, f64::max)
    }

    /// Euclidean distance from `p` to the polygon outline.
    pub fn distance_to_boundary(&self, p: Point2D) -> f64 {
        self.edges()
            .map(|e| e.distance_to_point(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance between the two outlines; zero if they cross or touch.
    pub fn boundary_distance(&self, other: &Polygon) -> f64 {
        let mut best = f64::INFINITY;
        for e in self.edges() {
            for f in other.edges() {
                best = best.min(e.distance_to_segment(&f));
                if best == 0.0 {
                    return 0.0;
                }
            }
        }
        best
    }

    /// Signed interior angle at vertex `i` in (0, 2π); greater than π at a
    /// reflex vertex.
    pub fn interior_angle(&self, i: usize) -> f64 {
        let n = self.vertices.len();
        let prev = self.vertices[(i + n - 1) % n];
        let cur = self.vertices[i % n];
        let next = self.vertices[(i + 1) % n];
        let out = (next - cur).angle();
        let back = (prev - cur).angle();
        (back - out).rem_euclid(2.0 * PI)
    }

    fn first_self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.vertices.len();
        for i in 0..n {
            let e = self.edge(i);
            for j in (i + 1)..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let f = self.edge(j);
                if adjacent {
                    // Neighbouring edges may only share their common vertex;
                    // a fold-back puts one edge's far end on the other.
                    let (other_far, own_far) = if j == i + 1 { (f.b, e.a) } else { (f.a, e.b) };
                    if e.distance_to_point(other_far) <= EPS_PT
                        || f.distance_to_point(own_far) <= EPS_PT
                    {
                        return Some((i, j));
                    }
                    continue;
                }
                if e.intersects(&f) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Signed shoelace area; positive for counterclockwise rings.
pub fn shoelace(points: &[Point2D]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for i in 0..n {
        twice += points[i].cross(points[(i + 1) % n]);
    }
    0.5 * twice
}

pub fn bounding_box(points: &[Point2D]) -> (Point2D, Point2D) {
    let mut min = Point2D::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point2D::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    (min, max)
}

/// A circle; radius is strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2D,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2D, radius: f64) -> Result<Self, GeometryError> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(GeometryError::InvalidCircle(radius));
        }
        Ok(Self { center, radius })
    }

    pub fn point_at(&self, angle: f64) -> Point2D {
        self.center + Point2D::from_angle(angle) * self.radius
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    /// Regular polygon with `segments` vertices on the circle, the first at
    /// bearing 0.
    pub fn to_polygon(&self, segments: usize) -> Polygon {
        let segments = segments.max(3);
        let step = 2.0 * PI / segments as f64;
        let ring = (0..segments)
            .map(|k| self.point_at(k as f64 * step))
            .collect();
        Polygon::new_unchecked_simple(ring).expect("regular polygon is valid")
    }

    /// Distance from `p` to the circle outline.
    pub fn distance_to_boundary(&self, p: Point2D) -> f64 {
        (p.distance(self.center) - self.radius).abs()
    }
}

/// Number of vertices used whenever a circle takes part in exact polygon
/// geometry (0.5° resolution).
pub const CIRCLE_SEGMENTS: usize = 720;

/// A closed planar region: either a polygon or an analytic circle.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Polygon(Polygon),
    Circle(Circle),
}

impl Region {
    /// The polygon used for exact geometry; circles are sampled at 0.5°.
    pub fn to_polygon(&self) -> Polygon {
        match self {
            Region::Polygon(p) => p.clone(),
            Region::Circle(c) => c.to_polygon(CIRCLE_SEGMENTS),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Region::Polygon(p) => p.area(),
            Region::Circle(c) => c.area(),
        }
    }

    pub fn distance_to_boundary(&self, p: Point2D) -> f64 {
        match self {
            Region::Polygon(poly) => poly.distance_to_boundary(p),
            Region::Circle(c) => c.distance_to_boundary(p),
        }
    }

    pub fn contains(&self, p: Point2D) -> bool {
        match self {
            Region::Polygon(poly) => {
                super::point_in_region(p, poly) != super::Location::Outside
            }
            Region::Circle(c) => p.distance(c.center) <= c.radius + EPS_PT,
        }
    }

    pub fn bounding_box(&self) -> (Point2D, Point2D) {
        match self {
            Region::Polygon(p) => p.bounding_box(),
            Region::Circle(c) => (
                c.center - Point2D::new(c.radius, c.radius),
                c.center + Point2D::new(c.radius, c.radius),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2D {
        Point2D::new(x, y)
    }

    #[test]
    fn normalizes_to_ccw_and_merges_duplicates() {
        let poly = Polygon::new(vec![
            p(0.0, 0.0),
            p(0.0, 1.0),
            p(0.0, 1.0 + 1e-9),
            p(1.0, 1.0),
            p(1.0, 0.0),
            p(0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(poly.len(), 4);
        assert!((poly.area() - 1.0).abs() < 1e-6);
        assert_eq!(poly.vertex(0), p(1.0, 0.0));
    }

    #[test]
    fn rejects_bow_tie_and_degenerate() {
        let bow = Polygon::new(vec![p(0.0, 0.0), p(1.0, 1.0), p(1.0, 0.0), p(0.0, 1.0)]);
        assert!(matches!(bow, Err(GeometryError::InvalidPolygon(_))));
        let line = Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)]);
        assert!(line.is_err());
        let two = Polygon::new(vec![p(0.0, 0.0), p(1.0, 0.0)]);
        assert!(two.is_err());
        let nan = Polygon::new(vec![p(0.0, 0.0), p(f64::NAN, 0.0), p(0.0, 1.0)]);
        assert!(nan.is_err());
    }

    #[test]
    fn interior_angles_of_l_shape() {
        let l = Polygon::new(vec![
            p(0.0, 0.0),
            p(2.0, 0.0),
            p(2.0, 1.0),
            p(1.0, 1.0),
            p(1.0, 2.0),
            p(0.0, 2.0),
        ])
        .unwrap();
        let reflex: Vec<usize> = (0..l.len())
            .filter(|&i| l.interior_angle(i) > PI)
            .collect();
        assert_eq!(reflex.len(), 1);
        assert_eq!(l.vertex(reflex[0]), p(1.0, 1.0));
        assert!((l.interior_angle(0) - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn circle_polygonization() {
        let c = Circle::new(p(1.0, 2.0), 3.0).unwrap();
        let poly = c.to_polygon(CIRCLE_SEGMENTS);
        assert_eq!(poly.len(), 720);
        assert!((poly.area() - c.area()).abs() / c.area() < 1e-4);
        assert!(Circle::new(p(0.0, 0.0), 0.0).is_err());
    }
}
