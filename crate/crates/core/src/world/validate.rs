use std::fmt;

use super::WorldSpec;
use crate::geometry::{point_in_region, Location, Point2D, Region, EPS_PT};

/// One broken world invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// An intrinsic object does not reach the outer boundary.
    IntrinsicDetached { index: usize },
    /// An extrinsic object is not strictly inside the outer boundary.
    ExtrinsicOutside { index: usize },
    /// Two objects overlap or touch.
    ObjectsIntersect { first: String, second: String },
    /// Two obstacles are closer than the required clearance.
    Clearance {
        first: String,
        second: String,
        clearance: f64,
        required: f64,
    },
    StartOutside,
    StartInsideObject { object: String },
    /// The start position is within the sensor distance of an obstacle.
    StartClearance {
        object: String,
        clearance: f64,
        required: f64,
    },
}

impl Violation {
    /// World-file field the violation is attached to.
    pub fn field(&self) -> String {
        match self {
            Violation::IntrinsicDetached { index } => format!("intrinsic[{index}]"),
            Violation::ExtrinsicOutside { index } => format!("extrinsic[{index}]"),
            Violation::ObjectsIntersect { first, .. } | Violation::Clearance { first, .. } => {
                field_of(first)
            }
            Violation::StartOutside
            | Violation::StartInsideObject { .. }
            | Violation::StartClearance { .. } => "start".into(),
        }
    }
}

fn field_of(label: &str) -> String {
    match label.split_once(' ') {
        Some((kind, idx)) if idx.chars().all(|c| c.is_ascii_digit()) => format!("{kind}[{idx}]"),
        _ => "outer".into(),
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IntrinsicDetached { index } => {
                write!(f, "intrinsic {index} does not touch the outer boundary")
            }
            Violation::ExtrinsicOutside { index } => {
                write!(f, "extrinsic {index} is not inside the outer boundary")
            }
            Violation::ObjectsIntersect { first, second } => {
                let both_extrinsic = first.starts_with("extrinsic") && second.starts_with("extrinsic");
                if both_extrinsic {
                    write!(f, "extrinsic objects intersect ({first}, {second})")
                } else {
                    write!(f, "objects intersect ({first}, {second})")
                }
            }
            Violation::Clearance {
                first,
                second,
                clearance,
                required,
            } => {
                let (c, r) = (round6(*clearance), round6(*required));
                let op = if c < r { "<" } else { "<=" };
                write!(f, "{first} to {second}: clearance {c} {op} {r}")
            }
            Violation::StartOutside => write!(f, "start is outside the outer boundary"),
            Violation::StartInsideObject { object } => write!(f, "start is inside {object}"),
            Violation::StartClearance {
                object,
                clearance,
                required,
            } => {
                let (c, r) = (round6(*clearance), round6(*required));
                let op = if c < r { "<" } else { "<=" };
                write!(f, "start to {object}: clearance {c} {op} {r}")
            }
        }
    }
}

/// Separation of two regions, or `None` when they share a point.
pub fn region_gap(a: &Region, b: &Region) -> Option<f64> {
    let gap = match (a, b) {
        (Region::Circle(p), Region::Circle(q)) => {
            p.center.distance(q.center) - p.radius - q.radius
        }
        (Region::Polygon(poly), Region::Circle(c)) | (Region::Circle(c), Region::Polygon(poly)) => {
            if point_in_region(c.center, poly) != Location::Outside {
                return None;
            }
            poly.distance_to_boundary(c.center) - c.radius
        }
        (Region::Polygon(p), Region::Polygon(q)) => {
            let inside = |x: &[Point2D], y| x.iter().any(|v| point_in_region(*v, y) != Location::Outside);
            if inside(p.vertices(), q) || inside(q.vertices(), p) {
                return None;
            }
            p.boundary_distance(q)
        }
    };
    (gap > EPS_PT).then_some(gap)
}

/// Clearance between the outer boundary and an object strictly inside it,
/// or `None` if the object touches or leaves the outer region.
fn inner_clearance(outer: &Region, obj: &Region) -> Option<f64> {
    let gap = match (outer, obj) {
        (Region::Circle(o), Region::Circle(c)) => o.radius - o.center.distance(c.center) - c.radius,
        (Region::Circle(o), Region::Polygon(p)) => {
            let far = p
                .vertices()
                .iter()
                .map(|v| v.distance(o.center))
                .fold(0.0, f64::max);
            o.radius - far
        }
        (Region::Polygon(o), Region::Circle(c)) => {
            if point_in_region(c.center, o) != Location::Inside {
                return None;
            }
            o.distance_to_boundary(c.center) - c.radius
        }
        (Region::Polygon(o), Region::Polygon(p)) => {
            if p.vertices().iter().any(|v| point_in_region(*v, o) != Location::Inside) {
                return None;
            }
            o.boundary_distance(p)
        }
    };
    (gap > EPS_PT).then_some(gap)
}

/// Checks every world invariant against sensor distance `d` and returns all
/// violations (empty when the world is valid).
pub fn validate_world(w: &WorldSpec, d: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let required = 2.0 * d;
    let outer_poly = w.outer.to_polygon();

    for (i, obj) in w.intrinsic.iter().enumerate() {
        let touches = outer_poly.boundary_distance(&obj.to_polygon()) <= EPS_PT;
        if !touches {
            out.push(Violation::IntrinsicDetached { index: i });
        }
    }

    for (i, obj) in w.extrinsic.iter().enumerate() {
        let label = format!("extrinsic {i}");
        match inner_clearance(&w.outer, obj) {
            None => out.push(Violation::ExtrinsicOutside { index: i }),
            Some(c) if c <= required => out.push(Violation::Clearance {
                first: label.clone(),
                second: "outer boundary".into(),
                clearance: c,
                required,
            }),
            Some(_) => {}
        }
        for (j, intr) in w.intrinsic.iter().enumerate() {
            check_pair(&mut out, obj, intr, &label, &format!("intrinsic {j}"), required);
        }
        for (j, other) in w.extrinsic.iter().enumerate().skip(i + 1) {
            check_pair(&mut out, obj, other, &label, &format!("extrinsic {j}"), required);
        }
    }

    let p = w.start.position;
    if !w.outer.contains(p) {
        out.push(Violation::StartOutside);
    } else {
        let c = w.outer.distance_to_boundary(p);
        if c <= d {
            out.push(Violation::StartClearance {
                object: "outer boundary".into(),
                clearance: c,
                required: d,
            });
        }
    }
    let objects = w
        .intrinsic
        .iter()
        .enumerate()
        .map(|(i, r)| (format!("intrinsic object {i}"), r))
        .chain(
            w.extrinsic
                .iter()
                .enumerate()
                .map(|(i, r)| (format!("extrinsic object {i}"), r)),
        );
    for (name, obj) in objects {
        if obj.contains(p) {
            out.push(Violation::StartInsideObject { object: name });
        } else {
            let c = obj.distance_to_boundary(p);
            if c <= d {
                out.push(Violation::StartClearance {
                    object: name,
                    clearance: c,
                    required: d,
                });
            }
        }
    }
    out
}

fn check_pair(out: &mut Vec<Violation>, a: &Region, b: &Region, la: &str, lb: &str, required: f64) {
    match region_gap(a, b) {
        None => out.push(Violation::ObjectsIntersect {
            first: la.into(),
            second: lb.into(),
        }),
        Some(c) if c <= required => out.push(Violation::Clearance {
            first: la.into(),
            second: lb.into(),
            clearance: c,
            required,
        }),
        Some(_) => {}
    }
}
