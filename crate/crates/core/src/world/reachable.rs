use geo::BooleanOps;

use super::{WorldError, WorldSpec};
use crate::geometry::{Point2D, Polygon};

fn to_geo(p: &Polygon) -> geo::Polygon<f64> {
    let ring: Vec<geo::Coord<f64>> = p
        .vertices()
        .iter()
        .map(|v| geo::Coord { x: v.x, y: v.y })
        .collect();
    geo::Polygon::new(geo::LineString::new(ring), Vec::new())
}

/// Outer region minus every intrinsic object, as one simple polygon. Circles
/// take part as 720-gons.
pub fn true_reachable_region(w: &WorldSpec) -> Result<Polygon, WorldError> {
    let outer = w.outer.to_polygon();
    if w.intrinsic.is_empty() {
        return Ok(outer);
    }
    let mut region = geo::MultiPolygon::new(vec![to_geo(&outer)]);
    for obj in &w.intrinsic {
        region = region.difference(&to_geo(&obj.to_polygon()));
    }
    let [poly] = region.0.as_slice() else {
        return Err(WorldError::UnsupportedWorld(format!(
            "reachable region has {} components",
            region.0.len()
        )));
    };
    if !poly.interiors().is_empty() {
        return Err(WorldError::UnsupportedWorld(
            "reachable region has holes".into(),
        ));
    }
    let ring: Vec<Point2D> = poly
        .exterior()
        .coords()
        .map(|c| Point2D::new(c.x, c.y))
        .collect();
    let poly = Polygon::new(ring).map_err(|e| WorldError::UnsupportedWorld(e.to_string()))?;
    Ok(drop_collinear(poly))
}

/// Removes vertices that sit on the straight line through their neighbours.
fn drop_collinear(poly: Polygon) -> Polygon {
    let v = poly.vertices();
    let n = v.len();
    let kept: Vec<Point2D> = (0..n)
        .filter(|&i| {
            let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            crate::geometry::orient(a, b, c).abs() > crate::geometry::EPS_CROSS
        })
        .map(|i| v[i])
        .collect();
    Polygon::new(kept).unwrap_or(poly)
}
