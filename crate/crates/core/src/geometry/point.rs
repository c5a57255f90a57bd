use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point (or free vector) in the world plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at `angle` radians, counterclockwise from +x.
    #[inline]
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c, s)
    }

    #[inline]
    pub fn dot(self, other: Point2D) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product; positive when `other` is
    /// counterclockwise from `self`.
    #[inline]
    pub fn cross(self, other: Point2D) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn distance(self, other: Point2D) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Left-hand perpendicular (rotated +90°).
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self * (1.0 / n)
        }
    }

    #[inline]
    pub fn lerp(self, other: Point2D, t: f64) -> Self {
        self + (other - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Lexicographic (x, then y) comparison.
    pub fn lex_cmp(&self, other: &Point2D) -> std::cmp::Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }

    pub fn approx_eq(self, other: Point2D, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

impl From<[f64; 2]> for Point2D {
    fn from([x, y]: [f64; 2]) -> Self {
        Self::new(x, y)
    }
}

impl From<Point2D> for [f64; 2] {
    fn from(p: Point2D) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point2D {
    type Output = Point2D;
    #[inline]
    fn add(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Point2D {
    #[inline]
    fn add_assign(&mut self, rhs: Point2D) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Point2D {
    type Output = Point2D;
    #[inline]
    fn sub(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2D {
    type Output = Point2D;
    #[inline]
    fn mul(self, k: f64) -> Point2D {
        Point2D::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2D {
    type Output = Point2D;
    #[inline]
    fn neg(self) -> Point2D {
        Point2D::new(-self.x, -self.y)
    }
}

/// Twice the signed area of triangle `abc`; positive for a left turn.
#[inline]
pub fn orient(a: Point2D, b: Point2D, c: Point2D) -> f64 {
    (b - a).cross(c - a)
}

/// Wraps an angle into (−π, π].
pub fn normalize_angle(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Smallest absolute difference between two headings.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs()
}

/// A closed line segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point2D,
    pub b: Point2D,
}

impl Segment {
    #[inline]
    pub const fn new(a: Point2D, b: Point2D) -> Self {
        Self { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn direction(&self) -> Point2D {
        self.b - self.a
    }

    pub fn midpoint(&self) -> Point2D {
        self.a.lerp(self.b, 0.5)
    }

    pub fn point_at(&self, t: f64) -> Point2D {
        self.a.lerp(self.b, t)
    }

    /// Parameter of the orthogonal projection of `p`, clamped to [0, 1].
    pub fn project(&self, p: Point2D) -> f64 {
        let d = self.direction();
        let len2 = d.norm_sq();
        if len2 == 0.0 {
            return 0.0;
        }
        ((p - self.a).dot(d) / len2).clamp(0.0, 1.0)
    }

    pub fn closest_point(&self, p: Point2D) -> Point2D {
        self.point_at(self.project(p))
    }

    pub fn distance_to_point(&self, p: Point2D) -> f64 {
        self.closest_point(p).distance(p)
    }

    /// Parameters `(t, u)` of the crossing of the two supporting lines, with
    /// `self.a + t·(self.b − self.a) = other.a + u·(other.b − other.a)`.
    /// `None` for (near-)parallel lines.
    pub fn line_intersection_params(&self, other: &Segment) -> Option<(f64, f64)> {
        let r = self.direction();
        let s = other.direction();
        let denom = r.cross(s);
        let scale = r.norm() * s.norm();
        if scale == 0.0 || denom.abs() <= 1e-12 * scale {
            return None;
        }
        let qp = other.a - self.a;
        Some((qp.cross(s) / denom, qp.cross(r) / denom))
    }

    /// True when the two closed segments share at least one point.
    pub fn intersects(&self, other: &Segment) -> bool {
        let d1 = orient(other.a, other.b, self.a);
        let d2 = orient(other.a, other.b, self.b);
        let d3 = orient(self.a, self.b, other.a);
        let d4 = orient(self.a, self.b, other.b);
        if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
            && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
        {
            return true;
        }
        (d1 == 0.0 && on_segment(other, self.a))
            || (d2 == 0.0 && on_segment(other, self.b))
            || (d3 == 0.0 && on_segment(self, other.a))
            || (d4 == 0.0 && on_segment(self, other.b))
    }

    pub fn distance_to_segment(&self, other: &Segment) -> f64 {
        if self.intersects(other) {
            return 0.0;
        }
        self.distance_to_point(other.a)
            .min(self.distance_to_point(other.b))
            .min(other.distance_to_point(self.a))
            .min(other.distance_to_point(self.b))
    }
}

fn on_segment(s: &Segment, p: Point2D) -> bool {
    p.x >= s.a.x.min(s.b.x)
        && p.x <= s.a.x.max(s.b.x)
        && p.y >= s.a.y.min(s.b.y)
        && p.y <= s.a.y.max(s.b.y)
}

/// Distance from `p` to the infinite line through `a` and `b`, signed
/// positive on the left of `a → b`.
pub fn signed_line_distance(a: Point2D, b: Point2D, p: Point2D) -> f64 {
    let d = b - a;
    let n = d.norm();
    if n == 0.0 {
        return p.distance(a);
    }
    d.cross(p - a) / n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_angle_range() {
        assert_eq!(normalize_angle(PI), PI);
        assert_eq!(normalize_angle(-PI), PI);
        assert!((normalize_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert!((normalize_angle(7.0) - (7.0 - 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn segment_intersection_and_touching() {
        let s = Segment::new(Point2D::new(0.0, 0.0), Point2D::new(2.0, 0.0));
        let t = Segment::new(Point2D::new(1.0, -1.0), Point2D::new(1.0, 1.0));
        assert!(s.intersects(&t));
        let touch = Segment::new(Point2D::new(2.0, 0.0), Point2D::new(3.0, 1.0));
        assert!(s.intersects(&touch));
        let apart = Segment::new(Point2D::new(0.0, 1.0), Point2D::new(2.0, 1.0));
        assert!(!s.intersects(&apart));
        assert!((s.distance_to_segment(&apart) - 1.0).abs() < 1e-12);
        let (ts, us) = s.line_intersection_params(&t).unwrap();
        assert!((ts - 0.5).abs() < 1e-12 && (us - 0.5).abs() < 1e-12);
    }

    #[test]
    fn signed_distance_sign() {
        let a = Point2D::new(0.0, 0.0);
        let b = Point2D::new(1.0, 0.0);
        assert!(signed_line_distance(a, b, Point2D::new(0.5, 2.0)) > 0.0);
        assert!(signed_line_distance(a, b, Point2D::new(0.5, -2.0)) < 0.0);
    }
}
