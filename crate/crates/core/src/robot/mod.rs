//! Simulated point robot with binary proximity sensors, odometry and a
//! gyroscope, plus the host side of the command contract.

mod host;
mod log;
mod sensors;
mod sim;

use std::fmt;

use crate::geometry::Point2D;

pub use host::{Host, HostError, Timeout};
pub use log::{parse_trace_log, replay, LogEvent, LogParseError, TraceLog};
pub use sensors::{sense, Obstacles, SensorFrame, SensorLabel, SensorRig};
pub use sim::{integrate_odometry, MotionLimits, NoiseConfig, SimRobot};

/// One host-to-robot instruction, valid for a single tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Command {
    /// Signed distance along the current heading (meters).
    Forward(f64),
    /// Counterclockwise rotation (radians).
    Turn(f64),
    Stop,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Forward(s) => write!(f, "F{s}"),
            Command::Turn(a) => write!(f, "T{a}"),
            Command::Stop => write!(f, "S"),
        }
    }
}

/// Motion reported by the wheel encoders and gyroscope for one tick.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OdometryDelta {
    pub distance: f64,
    pub heading_change: f64,
    pub tick: u64,
}

/// Everything the robot sends back after a command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Telemetry {
    pub delta: OdometryDelta,
    pub frame: SensorFrame,
    /// The forward motion was cut short by an obstacle.
    pub contact: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RobotError {
    #[error("command {0} exceeds the per-tick limits")]
    CommandOutOfRange(Command),
    #[error("robot center reached an obstacle at {position}")]
    Collision { position: Point2D },
}

/// The robot as seen from the host: commands in, telemetry out.
pub trait RobotLink {
    fn execute(&mut self, cmd: Command) -> Result<Telemetry, RobotError>;

    /// Current reading without moving.
    fn sense(&self) -> SensorFrame;

    fn rig(&self) -> &SensorRig;

    fn limits(&self) -> MotionLimits;
}
