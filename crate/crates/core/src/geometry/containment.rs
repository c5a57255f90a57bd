use super::point::{Point2D, Segment};
use super::{Polygon, EPS_PT};

/// Where a point lies relative to a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    OnBoundary,
    Outside,
}

/// Even-odd ray cast, with anything within `EPS_PT` of an edge reported as
/// [`Location::OnBoundary`].
pub fn point_in_region(p: Point2D, poly: &Polygon) -> Location {
    if poly.distance_to_boundary(p) <= EPS_PT {
        return Location::OnBoundary;
    }
    let mut inside = false;
    let verts = poly.vertices();
    let n = verts.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (verts[i], verts[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Splits `a → b` at every place it meets the polygon outline and returns
/// the sorted, deduplicated cut parameters in [0, 1] (including 0 and 1).
fn boundary_cuts(a: Point2D, b: Point2D, poly: &Polygon) -> Vec<f64> {
    let seg = Segment::new(a, b);
    let len = seg.length();
    let mut cuts = vec![0.0, 1.0];
    if len == 0.0 {
        return cuts;
    }
    for v in poly.vertices() {
        if seg.distance_to_point(*v) <= EPS_PT {
            cuts.push(seg.project(*v));
        }
    }
    for e in poly.edges() {
        // Parallel edges only matter when collinear, and then their
        // endpoints are already cut by the vertex pass above.
        if let Some((t, u)) = seg.line_intersection_params(&e) {
            if (-1e-12..=1.0 + 1e-12).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&u) {
                cuts.push(t.clamp(0.0, 1.0));
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() * len <= EPS_PT * 0.5);
    cuts
}

/// True when every point of the closed segment `a → b` lies inside or on
/// the polygon. Exact up to `EPS_PT`: the segment is cut wherever it meets
/// the outline and each piece is tested at its midpoint.
pub fn segment_in_region(a: Point2D, b: Point2D, poly: &Polygon) -> bool {
    if point_in_region(a, poly) == Location::Outside
        || point_in_region(b, poly) == Location::Outside
    {
        return false;
    }
    let cuts = boundary_cuts(a, b, poly);
    let seg = Segment::new(a, b);
    cuts.windows(2)
        .all(|w| point_in_region(seg.point_at(0.5 * (w[0] + w[1])), poly) != Location::Outside)
}

/// True when the whole segment runs along the polygon outline.
pub fn segment_on_boundary(a: Point2D, b: Point2D, poly: &Polygon) -> bool {
    if poly.distance_to_boundary(a) > EPS_PT || poly.distance_to_boundary(b) > EPS_PT {
        return false;
    }
    let cuts = boundary_cuts(a, b, poly);
    let seg = Segment::new(a, b);
    cuts.windows(2)
        .all(|w| poly.distance_to_boundary(seg.point_at(0.5 * (w[0] + w[1]))) <= EPS_PT)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2D {
        Point2D::new(x, y)
    }

    fn unit_square() -> Polygon {
        Polygon::rectangle(p(0.0, 0.0), p(1.0, 1.0)).unwrap()
    }

    fn l_shape() -> Polygon {
        Polygon::new(vec![
            p(0.0, 0.0),
            p(2.0, 0.0),
            p(2.0, 1.0),
            p(1.0, 1.0),
            p(1.0, 2.0),
            p(0.0, 2.0),
        ])
        .unwrap()
    }

    #[test]
    fn point_locations() {
        let sq = unit_square();
        assert_eq!(point_in_region(p(0.5, 0.5), &sq), Location::Inside);
        assert_eq!(point_in_region(p(1.0, 0.5), &sq), Location::OnBoundary);
        assert_eq!(point_in_region(p(0.0, 0.0), &sq), Location::OnBoundary);
        assert_eq!(point_in_region(p(1.5, 0.5), &sq), Location::Outside);
        // Ray passes exactly through a vertex.
        assert_eq!(point_in_region(p(-1.0, 1.0), &sq), Location::Outside);
        assert_eq!(point_in_region(p(1.5, 1.5), &l_shape()), Location::Outside);
        assert_eq!(point_in_region(p(1.5, 1.0), &l_shape()), Location::OnBoundary);
        assert_eq!(point_in_region(p(0.5, 1.0), &l_shape()), Location::Inside);
    }

    #[test]
    fn segments() {
        assert!(segment_in_region(p(0.0, 0.0), p(1.0, 1.0), &unit_square()));
        let l = l_shape();
        // Grazes the reflex corner without leaving the region.
        assert!(segment_in_region(p(2.0, 0.0), p(0.0, 2.0), &l));
        assert!(!segment_in_region(p(2.0, 0.5), p(0.5, 2.0), &l));
        assert!(segment_in_region(p(0.0, 0.0), p(1.0, 1.0), &l));
        // Along the boundary counts as inside.
        assert!(segment_in_region(p(0.0, 0.0), p(2.0, 0.0), &l));
        assert!(segment_in_region(p(0.0, 1.0), p(2.0, 1.0), &l));
        assert!(segment_in_region(p(0.0, 0.0), p(1.0, 2.0), &l));
    }

    #[test]
    fn boundary_coincidence() {
        let l = l_shape();
        assert!(segment_on_boundary(p(0.0, 0.0), p(2.0, 0.0), &l));
        assert!(segment_on_boundary(p(0.5, 0.0), p(1.5, 0.0), &l));
        assert!(!segment_on_boundary(p(0.0, 0.0), p(1.0, 1.0), &l));
        // Runs along an edge, then through the interior.
        assert!(!segment_on_boundary(p(1.0, 2.0), p(1.0, 0.0), &l));
    }
}
