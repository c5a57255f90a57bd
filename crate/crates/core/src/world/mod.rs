//! Ground-truth environments: the outer boundary, intrinsic objects merged
//! into it, free-standing extrinsic objects and the robot's start pose.

mod format;
mod reachable;
mod validate;

use crate::geometry::{normalize_angle, Point2D, Region};

pub use format::{load_world, parse_shape, parse_world, world_to_json};
pub use reachable::true_reachable_region;
pub use validate::{region_gap, validate_world, Violation};

/// Sensor distance assumed by [`load_world`] when checking clearances.
pub const DEFAULT_SENSOR_DISTANCE: f64 = 0.2;

/// Position plus heading (radians, counterclockwise from +x, in (−π, π]).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose {
    pub position: Point2D,
    pub heading: f64,
}

impl Pose {
    pub fn new(position: Point2D, heading: f64) -> Self {
        Self {
            position,
            heading: normalize_angle(heading),
        }
    }

    /// Unit vector along the heading.
    pub fn direction(&self) -> Point2D {
        Point2D::from_angle(self.heading)
    }
}

/// A complete environment description.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldSpec {
    pub outer: Region,
    /// Objects touching or overlapping the outer boundary; they become part
    /// of the reachable boundary.
    pub intrinsic: Vec<Region>,
    /// Free-standing objects.
    pub extrinsic: Vec<Region>,
    pub start: Pose,
}

impl WorldSpec {
    pub fn new(outer: Region, start: Pose) -> Self {
        Self {
            outer,
            intrinsic: Vec::new(),
            extrinsic: Vec::new(),
            start,
        }
    }

    pub fn with_intrinsic(mut self, r: Region) -> Self {
        self.intrinsic.push(r);
        self
    }

    pub fn with_extrinsic(mut self, r: Region) -> Self {
        self.extrinsic.push(r);
        self
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WorldError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error in `{field}`: {constraint}")]
    Schema { field: String, constraint: String },
    #[error("unsupported world: {0}")]
    UnsupportedWorld(String),
}
