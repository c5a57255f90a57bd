//! Last phase: traverse the path plan and map the extrinsic objects met on
//! the way.
//!
//! A sensor that starts firing on a path is sorted by where the obstacle
//! point lies: near the traced boundary the robot carries on, near a known
//! object it skirts the object back onto its line, and anywhere else it has
//! found a new object. A new object is followed until the robot is back on
//! the line beyond it; the same entry is then run in reverse, and on meeting
//! the object again the robot follows it on the same side, so the two
//! half-loops cover it all round.

mod fuse;
mod order;
mod traverse;

use crate::boundary_mapper::{BoundaryError, Side};
use crate::geometry::{point_in_region, GeometryError, Location, Point2D, Polygon, Segment};
use crate::planner::{PathPlan, PlanError, ShapeClass};
use crate::robot::{HostError, SensorLabel};

pub use fuse::fuse_object_traces;
pub use order::{order_traversal, Direction};
pub use traverse::run_mapping;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MappingError {
    #[error(transparent)]
    Host(#[from] HostError),
    #[error(transparent)]
    Follow(#[from] BoundaryError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("lost object {id} after {ticks} ticks of contour following")]
    LostObject { id: u32, ticks: u64 },
    #[error("half-loops are {gap:.3} m apart, more than {limit:.3} m")]
    FusionGap { gap: f64, limit: f64 },
}

impl MappingError {
    /// The tick budget ran out.
    pub fn is_timeout(&self) -> bool {
        match self {
            MappingError::Host(HostError::Timeout(_)) => true,
            MappingError::Follow(e) => e.is_timeout(),
            _ => false,
        }
    }
}

/// Thresholds of the obstacle rule and the object follow. Lengths in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappingConfig {
    /// Extra distance beyond the sensor range within which an obstacle
    /// point belongs to the traced boundary.
    pub delta_bound: f64,
    /// Distance from a known object's trace within which an obstacle point
    /// belongs to that object.
    pub delta_obj: f64,
    /// Distance from a path line that counts as back on the line.
    pub eps_line: f64,
    /// Joint tolerance when closing two half-loops.
    pub eps_close: f64,
    pub eps_simplify: f64,
    /// Tick budget for a single contour follow.
    pub max_object_ticks: u64,
}

impl MappingConfig {
    pub fn for_rig(d: f64, step: f64) -> Self {
        Self {
            delta_bound: d / 2.0 + 2.0 * step,
            delta_obj: 2.0 * d,
            eps_line: 2.0 * step,
            eps_close: 2.0 * step,
            eps_simplify: crate::geometry::DEFAULT_EPS_SIMPLIFY,
            max_object_ticks: 400_000,
        }
    }
}

/// Sense in which the robot turns to go along a new object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rotation {
    /// Turn left and keep the object on the right.
    Ccw,
    /// Turn right and keep the object on the left.
    Cw,
}

impl Rotation {
    pub fn side(self) -> Side {
        match self {
            Rotation::Ccw => Side::Right,
            Rotation::Cw => Side::Left,
        }
    }
}

/// Response to sensors that start firing on a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstacleAction {
    ContinuePath,
    SkirtKnownObject(u32),
    MapNewObject(Rotation),
}

/// Sensors that started firing, with the pose they fired at.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleEvent {
    pub position: Point2D,
    pub heading: f64,
    pub fired: Vec<SensorLabel>,
    /// Sensor range: the obstacle point is this far along each ray.
    pub range: f64,
}

impl ObstacleEvent {
    pub fn hit_point(&self, label: SensorLabel) -> Point2D {
        self.position + Point2D::from_angle(self.heading + label.bearing()) * self.range
    }
}

/// Object geometry the host already holds: a closed outline, or an open
/// half-loop still waiting for its second pass.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownObject {
    pub id: u32,
    pub points: Vec<Point2D>,
    pub closed: bool,
}

impl KnownObject {
    pub fn distance(&self, p: Point2D) -> f64 {
        let n = self.points.len();
        if n == 0 {
            return f64::INFINITY;
        }
        if n == 1 {
            return p.distance(self.points[0]);
        }
        if self.closed && n >= 3 {
            if let Ok(poly) = Polygon::new(self.points.clone()) {
                if point_in_region(p, &poly) != Location::Outside {
                    return 0.0;
                }
            }
        }
        let segs = n - usize::from(!self.closed);
        (0..segs)
            .map(|i| Segment::new(self.points[i], self.points[(i + 1) % n]).distance_to_point(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Sorts each newly fired sensor by its obstacle point: within
/// `range + delta_bound` of the boundary it is the boundary, within
/// `delta_obj` of a known object it is that object, otherwise it is new.
/// A new object outranks a known one, which outranks the boundary. New
/// objects seen by the front or right sensor are followed turning left.
pub fn handle_obstacle(
    event: &ObstacleEvent,
    boundary: &Polygon,
    known: &[KnownObject],
    cfg: &MappingConfig,
) -> ObstacleAction {
    let mut skirt: Option<u32> = None;
    let mut new_labels: Vec<SensorLabel> = Vec::new();
    for &label in &event.fired {
        let hit = event.hit_point(label);
        if boundary.distance_to_boundary(hit) <= event.range + cfg.delta_bound {
            continue;
        }
        let nearest = known
            .iter()
            .map(|k| (k.id, k.distance(hit)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match nearest {
            Some((id, dist)) if dist <= cfg.delta_obj => {
                skirt.get_or_insert(id);
            }
            _ => new_labels.push(label),
        }
    }
    if !new_labels.is_empty() {
        let right_or_front = new_labels.iter().any(|l| {
            matches!(
                l,
                SensorLabel::Front | SensorLabel::Right | SensorLabel::DiagFrontRight
            )
        });
        return ObstacleAction::MapNewObject(if right_or_front { Rotation::Ccw } else { Rotation::Cw });
    }
    match skirt {
        Some(id) => ObstacleAction::SkirtKnownObject(id),
        None => ObstacleAction::ContinuePath,
    }
}

/// An extrinsic object in the finished map.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedObject {
    pub id: u32,
    /// Simplified counterclockwise outline of the robot path around it.
    pub outline: Polygon,
    /// The half-loops the outline was fused from, or the single loop
    /// traced while searching for the boundary.
    pub source_traces: Vec<Vec<Point2D>>,
    /// Plan line on which the object was first met (none when met during
    /// the boundary search) and the tick.
    pub first_seen: (Option<u32>, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MapStats {
    /// Ticks of the whole run, boundary search included.
    pub ticks: u64,
    pub paths_traversed: usize,
    /// Odometry distance driven while traversing the plan.
    pub distance: f64,
    /// Boundary-search restarts after tracing an extrinsic object.
    pub restarts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapResult {
    pub boundary: Polygon,
    pub shape: ShapeClass,
    pub plan: PathPlan,
    pub objects: Vec<MappedObject>,
    pub stats: MapStats,
    /// Objects whose outline had to be closed without a clean second pass.
    pub warnings: Vec<String>,
}
