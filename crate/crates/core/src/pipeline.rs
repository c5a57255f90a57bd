//! The full run: validate the world, trace the boundary, identify its
//! shape, plan paths and map objects.

use crate::boundary_mapper::{run_boundary_phase, BoundaryError, BoundaryPhaseResult, Directions, PhaseConfig};
use crate::config::{ConfigError, RunConfig};
use crate::geometry::{classify_polygon, Convexity, Region};
use crate::object_mapper::{run_mapping, MapResult, MappingConfig, MappingError};
use crate::planner::{build_path_plan, identify_shape, ArcSpan, PathPlan, PlanError, ShapeClass};
use crate::robot::{Host, SensorRig, SimRobot, TraceLog};
use crate::world::{validate_world, Violation, WorldSpec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("world fails validation: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("boundary phase: {0}")]
    Boundary(#[from] BoundaryError),
    #[error("planning: {0}")]
    Plan(#[from] PlanError),
    #[error("mapping: {0}")]
    Mapping(#[from] MappingError),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl PipelineError {
    pub fn is_timeout(&self) -> bool {
        match self {
            PipelineError::Boundary(e) => e.is_timeout(),
            PipelineError::Mapping(e) => e.is_timeout(),
            _ => false,
        }
    }

    pub fn is_validation(&self) -> bool {
        matches!(self, PipelineError::Invalid(_))
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub map: MapResult,
    pub boundary_phase: BoundaryPhaseResult,
    /// Command, odometry and event log of the whole run.
    pub log: TraceLog,
}

fn sim_host(world: &WorldSpec, cfg: &RunConfig) -> Host<SimRobot> {
    let sim = SimRobot::new(
        world,
        SensorRig::cardinal(cfg.sensor_distance),
        cfg.limits,
        cfg.noise,
        cfg.seed,
    );
    Host::new(sim, world.start, cfg.max_ticks).with_log()
}

/// Traces the boundary from the start pose. The first seek follows the
/// start heading; later ones are drawn from the seed.
pub fn trace_boundary(
    host: &mut Host<SimRobot>,
    world: &WorldSpec,
    cfg: &RunConfig,
) -> Result<BoundaryPhaseResult, PipelineError> {
    let mut dirs = Directions::scripted(vec![world.start.heading], cfg.seed);
    Ok(run_boundary_phase(host, &mut dirs, PhaseConfig::default())?)
}

/// Runs every phase on the simulator.
pub fn run_pipeline(world: &WorldSpec, cfg: &RunConfig) -> Result<PipelineOutput, PipelineError> {
    cfg.validate()?;
    let violations = validate_world(world, cfg.sensor_distance);
    if !violations.is_empty() {
        return Err(PipelineError::Invalid(violations));
    }
    let mut host = sim_host(world, cfg);
    let boundary = trace_boundary(&mut host, world, cfg)?;
    let shape = identify_shape(&boundary.boundary)?;
    host.event("shape", shape.name());
    let plan = build_path_plan(&shape, cfg.alpha)?;
    host.event("plan", &plan.len().to_string());
    let mapping = MappingConfig::for_rig(cfg.sensor_distance, cfg.limits.step_max);
    let map = run_mapping(&mut host, &shape, &plan, &boundary, mapping)?;
    let (_, log) = host.into_parts();
    Ok(PipelineOutput {
        map,
        boundary_phase: boundary,
        log: log.unwrap_or_else(|| TraceLog::new(world.start)),
    })
}

/// Shape of a known outline, without tracing: a polygon by its convexity,
/// a circle as a full circle.
pub fn shape_of_region(region: &Region) -> ShapeClass {
    match region {
        Region::Polygon(p) => match classify_polygon(p) {
            Convexity::Convex => ShapeClass::Convex(p.clone()),
            Convexity::Concave => ShapeClass::Concave(p.clone()),
        },
        Region::Circle(c) => ShapeClass::Circular(*c, ArcSpan::Full),
    }
}

/// Traces the boundary of `world` and plans it, without mapping objects.
pub fn plan_world(world: &WorldSpec, cfg: &RunConfig) -> Result<(ShapeClass, PathPlan), PipelineError> {
    cfg.validate()?;
    let violations = validate_world(world, cfg.sensor_distance);
    if !violations.is_empty() {
        return Err(PipelineError::Invalid(violations));
    }
    let mut host = sim_host(world, cfg);
    let boundary = trace_boundary(&mut host, world, cfg)?;
    let shape = identify_shape(&boundary.boundary)?;
    let plan = build_path_plan(&shape, cfg.alpha)?;
    Ok((shape, plan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Circle, Point2D, Polygon};
    use crate::world::Pose;

    fn square_world() -> WorldSpec {
        let sq = Polygon::rectangle(Point2D::new(0.0, 0.0), Point2D::new(6.0, 6.0)).unwrap();
        WorldSpec::new(Region::Polygon(sq), Pose::new(Point2D::new(3.0, 3.0), 0.0))
    }

    #[test]
    fn empty_room_runs_end_to_end() {
        let cfg = RunConfig {
            alpha: 1.0,
            ..RunConfig::default()
        };
        let out = run_pipeline(&square_world(), &cfg).unwrap();
        assert!(out.map.objects.is_empty());
        assert_eq!(out.map.stats.paths_traversed, out.map.plan.len());
        assert!(out.log.ticks() as u64 == out.map.stats.ticks);
        assert!(out.log.events().any(|e| e.name == "shape"));
    }

    #[test]
    fn invalid_world_is_rejected_before_running() {
        let w = square_world().with_extrinsic(Region::Circle(Circle::new(Point2D::new(0.3, 3.0), 0.2).unwrap()));
        let e = run_pipeline(&w, &RunConfig::default()).unwrap_err();
        assert!(e.is_validation(), "{e}");
    }

    #[test]
    fn tiny_tick_budget_times_out() {
        let cfg = RunConfig {
            max_ticks: 500,
            ..RunConfig::default()
        };
        let e = run_pipeline(&square_world(), &cfg).unwrap_err();
        assert!(e.is_timeout(), "{e}");
    }

    #[test]
    fn region_shapes() {
        let sq = Polygon::rectangle(Point2D::new(0.0, 0.0), Point2D::new(1.0, 1.0)).unwrap();
        assert_eq!(shape_of_region(&Region::Polygon(sq)).name(), "convex");
        let c = Circle::new(Point2D::new(0.0, 0.0), 1.0).unwrap();
        assert_eq!(shape_of_region(&Region::Circle(c)).name(), "circular");
    }
}
