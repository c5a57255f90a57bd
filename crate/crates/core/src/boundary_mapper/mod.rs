//! First phase: find the reachable-area boundary by seeking a wall in a
//! random direction and following it on the left until the loop closes.
//! Loops around extrinsic objects are kept and the search restarts.

mod follow;

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{convex_hull, point_in_region, ClosedTrace, Location, GeometryError, Point2D, Polygon, Segment};
use crate::robot::{Command, Host, HostError, RobotLink};

pub use follow::{follow_contour, seek_obstacle, Closure, Side};
pub(crate) use follow::{rotate_by, ContourFollower};

/// Smallest |signed area| (m²) of a trace that can be classified.
pub const EPS_AREA: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Host(#[from] HostError),
    #[error("no sensor reads an obstacle")]
    NoContact,
    #[error("trace encloses area {area:.3e}, too small to classify")]
    DegenerateTrace { area: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("boundary not found after {restarts} restarts")]
    RestartsExhausted { restarts: usize },
}

impl BoundaryError {
    /// The run ran out of ticks or restarts rather than failing outright.
    pub fn is_timeout(&self) -> bool {
        matches!(
            self,
            BoundaryError::Host(HostError::Timeout(_)) | BoundaryError::RestartsExhausted { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceClassification {
    ReachableBoundary,
    ExtrinsicObject,
}

/// Orientation test for a left-hand follow: inside a room the wall is on
/// the left while the robot runs clockwise; around an island it runs
/// counterclockwise.
pub fn classify_trace(trace: &ClosedTrace) -> Result<TraceClassification, BoundaryError> {
    let area = trace.signed_area();
    if area.abs() < EPS_AREA {
        return Err(BoundaryError::DegenerateTrace { area });
    }
    Ok(if area < 0.0 {
        TraceClassification::ReachableBoundary
    } else {
        TraceClassification::ExtrinsicObject
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPhaseResult {
    pub boundary: ClosedTrace,
    pub pre_mapped_objects: Vec<ClosedTrace>,
    pub seek_directions_used: Vec<f64>,
    pub ticks: u64,
}

/// Seek directions: scripted values first, then uniform draws from a
/// seeded generator.
#[derive(Debug, Clone)]
pub struct Directions {
    scripted: VecDeque<f64>,
    rng: ChaCha8Rng,
}

impl Directions {
    pub fn seeded(seed: u64) -> Self {
        Self::scripted(Vec::new(), seed)
    }

    pub fn scripted(dirs: Vec<f64>, seed: u64) -> Self {
        Self {
            scripted: dirs.into(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn next_scripted(&mut self) -> Option<f64> {
        self.scripted.pop_front()
    }

    fn draw(&mut self) -> f64 {
        self.rng.random_range(0.0..TAU)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseConfig {
    pub max_restarts: usize,
    /// Random draws per restart before the direction is taken anyway.
    pub max_draws: usize,
}

impl Default for PhaseConfig {
    fn default() -> Self {
        Self {
            max_restarts: 16,
            max_draws: 256,
        }
    }
}

/// Whether a ray from `origin` along `theta` passes within `clearance` of
/// any known object hull.
fn aims_at(origin: Point2D, theta: f64, hulls: &[Polygon], clearance: f64, reach: f64) -> bool {
    let ray = Segment::new(origin, origin + Point2D::from_angle(theta) * reach);
    hulls.iter().any(|h| {
        point_in_region(origin, h) != Location::Outside || h.edges().any(|e| e.distance_to_segment(&ray) < clearance)
    })
}

/// Seek, follow and classify until a trace classifies as the reachable
/// boundary. After each extrinsic loop the robot backs away from the object
/// by three sensor distances and draws a direction that does not aim at any
/// object already traced.
pub fn run_boundary_phase<L: RobotLink>(
    host: &mut Host<L>,
    directions: &mut Directions,
    config: PhaseConfig,
) -> Result<BoundaryPhaseResult, BoundaryError> {
    let d = host.rig().trigger_distance();
    let step = host.limits().step_max;
    let t0 = host.tick();
    let mut objects: Vec<ClosedTrace> = Vec::new();
    let mut hulls: Vec<Polygon> = Vec::new();
    let mut used = Vec::new();
    for restart in 0..=config.max_restarts {
        if restart > 0 {
            host.event("restart", &restart.to_string());
        }
        let dir = match directions.next_scripted() {
            Some(t) => t,
            None => {
                let origin = host.estimate().position;
                let reach = reach_of(&objects, origin);
                let mut t = directions.draw();
                for _ in 1..config.max_draws {
                    if !aims_at(origin, t, &hulls, d, reach) {
                        break;
                    }
                    t = directions.draw();
                }
                t
            }
        };
        used.push(dir);
        seek_obstacle(host, dir)?;
        let trace = follow_contour(host, Side::Left)?;
        let class = classify_trace(&trace)?;
        host.event("classified", &format!("{class:?}"));
        match class {
            TraceClassification::ReachableBoundary => {
                return Ok(BoundaryPhaseResult {
                    boundary: trace,
                    pre_mapped_objects: objects,
                    seek_directions_used: used,
                    ticks: host.tick() - t0,
                });
            }
            TraceClassification::ExtrinsicObject => {
                if let Ok(h) = convex_hull(trace.points()) {
                    hulls.push(h);
                }
                objects.push(trace);
                back_off(host, 3.0 * d, step)?;
            }
        }
    }
    Err(BoundaryError::RestartsExhausted {
        restarts: config.max_restarts,
    })
}

/// Length of test rays: far enough to cross every traced object.
fn reach_of(objects: &[ClosedTrace], origin: Point2D) -> f64 {
    objects
        .iter()
        .flat_map(|t| t.points())
        .map(|p| p.distance(origin))
        .fold(1.0, f64::max)
        * 2.0
}

/// Turns to face away from an obstacle on the left and retreats by up to
/// `distance`, stopping early if anything comes into range ahead.
fn back_off<L: RobotLink>(host: &mut Host<L>, distance: f64, step: f64) -> Result<(), BoundaryError> {
    rotate_by(host, -FRAC_PI_2)?;
    let mut moved = 0.0;
    while moved < distance - 1e-12 && !host.frame().front() {
        let t = host.execute(Command::Forward(step.min(distance - moved)))?;
        if t.contact || t.delta.distance == 0.0 {
            break;
        }
        moved += t.delta.distance;
    }
    Ok(())
}
