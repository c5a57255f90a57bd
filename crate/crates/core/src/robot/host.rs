use super::log::TraceLog;
use super::sim::apply_delta;
use super::{Command, MotionLimits, RobotError, RobotLink, SensorFrame, SensorRig, Telemetry};
use crate::world::Pose;

/// The tick budget ran out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("tick budget of {max_ticks} exhausted")]
pub struct Timeout {
    pub max_ticks: u64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HostError {
    #[error(transparent)]
    Timeout(#[from] Timeout),
    #[error(transparent)]
    Robot(#[from] RobotError),
}

/// Host side of the link: sends commands, dead-reckons the pose estimate
/// from odometry and enforces the tick budget.
#[derive(Debug)]
pub struct Host<L: RobotLink> {
    link: L,
    estimate: Pose,
    frame: SensorFrame,
    tick: u64,
    max_ticks: u64,
    travelled: f64,
    log: Option<TraceLog>,
}

impl<L: RobotLink> Host<L> {
    /// `start` is the pose the host believes the robot has at tick 0.
    pub fn new(link: L, start: Pose, max_ticks: u64) -> Self {
        let frame = link.sense();
        Self {
            link,
            estimate: start,
            frame,
            tick: 0,
            max_ticks,
            travelled: 0.0,
            log: None,
        }
    }

    /// Records every command and event from now on.
    pub fn with_log(mut self) -> Self {
        self.log = Some(TraceLog::new(self.estimate));
        self
    }

    pub fn execute(&mut self, cmd: Command) -> Result<Telemetry, HostError> {
        if self.tick >= self.max_ticks {
            return Err(Timeout {
                max_ticks: self.max_ticks,
            }
            .into());
        }
        let t = self.link.execute(cmd)?;
        self.tick += 1;
        self.estimate = apply_delta(self.estimate, &t.delta);
        self.travelled += t.delta.distance.abs();
        self.frame = t.frame;
        if let Some(log) = &mut self.log {
            log.push_motion(self.tick, cmd, t.delta, t.frame.mask());
        }
        Ok(t)
    }

    /// Appends a named phase event to the log, if logging.
    pub fn event(&mut self, name: &str, detail: &str) {
        if let Some(log) = &mut self.log {
            log.push_event(self.tick, name, detail);
        }
    }

    /// Dead-reckoned pose.
    pub fn estimate(&self) -> Pose {
        self.estimate
    }

    /// Latest sensor reading.
    pub fn frame(&self) -> SensorFrame {
        self.frame
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn max_ticks(&self) -> u64 {
        self.max_ticks
    }

    /// Total odometry distance (sum of absolute forward motion).
    pub fn travelled(&self) -> f64 {
        self.travelled
    }

    pub fn limits(&self) -> MotionLimits {
        self.link.limits()
    }

    pub fn rig(&self) -> &SensorRig {
        self.link.rig()
    }

    pub fn link(&self) -> &L {
        &self.link
    }

    pub fn log(&self) -> Option<&TraceLog> {
        self.log.as_ref()
    }

    pub fn into_parts(self) -> (L, Option<TraceLog>) {
        (self.link, self.log)
    }
}
