use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::sensors::{Obstacles, SensorFrame, SensorRig};
use super::{Command, OdometryDelta, RobotError, RobotLink, Telemetry};
use crate::geometry::{normalize_angle, Point2D};
use crate::world::{Pose, WorldSpec};

/// Per-tick motion limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionLimits {
    /// Longest forward step (meters).
    pub step_max: f64,
    /// Largest turn per tick (radians).
    pub turn_max: f64,
    /// Gap kept between the robot center and any obstacle when a forward
    /// step is truncated.
    pub contact_margin: f64,
}

impl Default for MotionLimits {
    fn default() -> Self {
        Self {
            step_max: 0.02,
            turn_max: 5f64.to_radians(),
            contact_margin: 0.02,
        }
    }
}

/// Zero-mean Gaussian noise, each σ proportional to the commanded amount.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseConfig {
    /// Distance error per meter travelled.
    pub sigma_dist: f64,
    /// Turn error per radian turned.
    pub sigma_head: f64,
    /// Gyroscope measurement error per radian turned.
    pub sigma_gyro: f64,
}

impl NoiseConfig {
    pub fn off() -> Self {
        Self::default()
    }

    /// 0.5 % distance, 0.2° per radian of turn, 0.001 rad/rad gyro.
    pub fn typical() -> Self {
        Self {
            sigma_dist: 0.005,
            sigma_head: 0.2f64.to_radians(),
            sigma_gyro: 0.001,
        }
    }

    pub fn is_off(&self) -> bool {
        self.sigma_dist == 0.0 && self.sigma_head == 0.0 && self.sigma_gyro == 0.0
    }
}

/// The simulated robot: owns the true pose and answers commands with
/// odometry and sensor readings.
#[derive(Debug, Clone)]
pub struct SimRobot {
    obstacles: Obstacles,
    rig: SensorRig,
    limits: MotionLimits,
    noise: NoiseConfig,
    rng: ChaCha8Rng,
    pose: Pose,
    tick: u64,
}

impl SimRobot {
    pub fn new(
        world: &WorldSpec,
        rig: SensorRig,
        limits: MotionLimits,
        noise: NoiseConfig,
        seed: u64,
    ) -> Self {
        Self {
            obstacles: Obstacles::from_world(world),
            rig,
            limits,
            noise,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pose: world.start,
            tick: 0,
        }
    }

    /// Ground-truth pose; not visible to the mapping algorithms.
    pub fn true_pose(&self) -> Pose {
        self.pose
    }

    pub fn obstacles(&self) -> &Obstacles {
        &self.obstacles
    }

    /// `amount` plus Gaussian noise of σ = `sigma·|amount|`.
    fn perturb(&mut self, amount: f64, sigma: f64) -> f64 {
        if sigma == 0.0 || amount == 0.0 {
            return amount;
        }
        let n = Normal::new(0.0, sigma * amount.abs()).expect("finite sigma");
        amount + n.sample(&mut self.rng)
    }
}

impl RobotLink for SimRobot {
    fn execute(&mut self, cmd: Command) -> Result<Telemetry, RobotError> {
        let lim = self.limits;
        let tol = 1e-12;
        let mut contact = false;
        let (distance, heading_change) = match cmd {
            Command::Forward(step) => {
                if !(step.abs() <= lim.step_max + tol) {
                    return Err(RobotError::CommandOutOfRange(cmd));
                }
                let actual = self.perturb(step, self.noise.sigma_dist);
                let dir = self.pose.direction() * actual.signum();
                let free = self.obstacles.ray_cast(self.pose.position, dir);
                let allowed = (free - lim.contact_margin).max(0.0);
                let moved = if actual.abs() > allowed {
                    contact = true;
                    allowed * actual.signum()
                } else {
                    actual
                };
                self.pose.position += self.pose.direction() * moved;
                if self.obstacles.clearance(self.pose.position) <= 0.0 {
                    return Err(RobotError::Collision {
                        position: self.pose.position,
                    });
                }
                (moved, 0.0)
            }
            Command::Turn(dtheta) => {
                if !(dtheta.abs() <= lim.turn_max + tol) {
                    return Err(RobotError::CommandOutOfRange(cmd));
                }
                let actual = self.perturb(dtheta, self.noise.sigma_head);
                self.pose.heading = normalize_angle(self.pose.heading + actual);
                let measured = self.perturb(actual, self.noise.sigma_gyro);
                (0.0, measured)
            }
            Command::Stop => (0.0, 0.0),
        };
        self.tick += 1;
        Ok(Telemetry {
            delta: OdometryDelta {
                distance,
                heading_change,
                tick: self.tick,
            },
            frame: self.sense(),
            contact,
        })
    }

    fn sense(&self) -> SensorFrame {
        self.obstacles.sense(self.pose, &self.rig, self.tick)
    }

    fn rig(&self) -> &SensorRig {
        &self.rig
    }

    fn limits(&self) -> MotionLimits {
        self.limits
    }
}

/// Dead-reckoned pose: each delta rotates, then translates along the new
/// heading.
pub fn integrate_odometry(deltas: &[OdometryDelta], start: Pose) -> Pose {
    deltas.iter().fold(start, |p, d| apply_delta(p, d))
}

pub(crate) fn apply_delta(p: Pose, d: &OdometryDelta) -> Pose {
    let heading = normalize_angle(p.heading + d.heading_change);
    Pose {
        position: p.position + Point2D::from_angle(heading) * d.distance,
        heading,
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::geometry::{Polygon, Region};

    fn room() -> WorldSpec {
        let outer = Polygon::rectangle(Point2D::new(0.0, 0.0), Point2D::new(10.0, 10.0)).unwrap();
        WorldSpec::new(Region::Polygon(outer), Pose::new(Point2D::new(5.0, 5.0), 0.0))
    }

    fn robot(w: &WorldSpec, noise: NoiseConfig, seed: u64) -> SimRobot {
        let limits = MotionLimits {
            step_max: 0.5,
            turn_max: FRAC_PI_2,
            ..MotionLimits::default()
        };
        SimRobot::new(w, SensorRig::cardinal(0.2), limits, noise, seed)
    }

    #[test]
    fn exact_motion_without_noise() {
        let mut r = robot(&room(), NoiseConfig::off(), 0);
        let t = r.execute(Command::Forward(0.01)).unwrap();
        assert_eq!(r.true_pose().position, Point2D::new(5.01, 5.0));
        assert_eq!(t.delta.distance, 0.01);
        let t = r.execute(Command::Turn(FRAC_PI_2)).unwrap();
        assert_eq!(r.true_pose().heading, FRAC_PI_2);
        assert_eq!(t.delta.distance, 0.0);
    }

    #[test]
    fn forward_into_wall_is_truncated() {
        let mut w = room();
        w.start = Pose::new(Point2D::new(9.7, 5.0), 0.0);
        let mut r = robot(&w, NoiseConfig::off(), 0);
        let t = r.execute(Command::Forward(0.5)).unwrap();
        assert!(t.contact);
        assert!((r.true_pose().position.x - 9.98).abs() < 1e-12);
        assert!(t.frame.front());
    }

    #[test]
    fn limits_are_enforced() {
        let mut r = SimRobot::new(
            &room(),
            SensorRig::cardinal(0.2),
            MotionLimits::default(),
            NoiseConfig::off(),
            0,
        );
        assert!(r.execute(Command::Forward(0.03)).is_err());
        assert!(r.execute(Command::Turn(0.1)).is_err());
    }

    #[test]
    fn same_seed_same_stream() {
        let run = |seed| {
            let mut r = robot(&room(), NoiseConfig::typical(), seed);
            (0..50)
                .map(|k| {
                    let cmd = if k % 3 == 0 { Command::Turn(0.05) } else { Command::Forward(0.02) };
                    r.execute(cmd).unwrap().delta
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7), run(8));
    }

    #[test]
    fn closed_square_of_odometry() {
        let deltas: Vec<OdometryDelta> = (0..4)
            .flat_map(|k| {
                [
                    OdometryDelta { distance: 1.0, heading_change: 0.0, tick: 2 * k },
                    OdometryDelta { distance: 0.0, heading_change: FRAC_PI_2, tick: 2 * k + 1 },
                ]
            })
            .collect();
        let start = Pose::new(Point2D::new(1.0, 1.0), 0.0);
        let end = integrate_odometry(&deltas, start);
        assert!(end.position.distance(start.position) < 1e-12);
        assert!(crate::geometry::angle_diff(end.heading, start.heading) < 1e-12);
        assert_eq!(integrate_odometry(&[], start), start);
    }
}
