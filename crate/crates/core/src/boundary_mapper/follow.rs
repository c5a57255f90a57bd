use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::BoundaryError;
use crate::geometry::{angle_diff, normalize_angle, ClosedTrace, Point2D};
use crate::robot::{Command, Host, RobotLink, SensorFrame};
use crate::world::Pose;

/// Side of the robot the followed obstacle is kept on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// +1 for left, -1 for right: the sign of a turn toward the obstacle.
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }

    pub fn sees(self, f: SensorFrame) -> bool {
        match self {
            Side::Left => f.left(),
            Side::Right => f.right(),
        }
    }
}

/// Contour follower built on a binary side sensor.
///
/// Turning in place sweeps the side ray. It fires over an arc of bearings
/// centered on the nearest obstacle point, with half-width `a` where the
/// range is `d·cos a`. Each cycle sweeps that arc, turns parallel to the
/// obstacle with a proportional correction toward the target range, and
/// advances a few steps: few enough that a convex corner passed on the way
/// stays within sensing range. The front firing rotates the robot away in
/// place first.
#[derive(Debug, Clone)]
pub(crate) struct ContourFollower {
    side: Side,
    d: f64,
    step: f64,
    turn: f64,
    /// Range to the obstacle the robot steers for.
    target: f64,
    /// Last sensed obstacle point, for recovery when the sweep finds nothing.
    last_wall: Option<Point2D>,
}

/// Bisection rounds when locating a reading flip between two coarse turns.
const REFINE: usize = 3;
/// Target range as a fraction of the trigger distance.
const TARGET: f64 = 0.9;
/// Distance over which a range error is steered out.
const LOOKAHEAD: f64 = 0.2;

impl ContourFollower {
    pub(crate) fn new(side: Side, d: f64, step: f64, turn: f64) -> Self {
        Self {
            side,
            d,
            step,
            turn,
            target: TARGET * d,
            last_wall: None,
        }
    }

    pub(crate) fn for_host<L: RobotLink>(side: Side, host: &Host<L>) -> Self {
        let lim = host.limits();
        Self::new(side, host.rig().trigger_distance(), lim.step_max, lim.turn_max)
    }

    /// Turns by `angle` toward the obstacle side (negative: away) and returns
    /// the measured rotation in the same sense.
    fn spin<L: RobotLink>(&self, host: &mut Host<L>, angle: f64) -> Result<f64, BoundaryError> {
        let s = self.side.sign();
        let mut done = 0.0;
        let mut left = angle;
        while left.abs() > 1e-12 {
            let t = left.clamp(-self.turn, self.turn);
            let r = host.execute(Command::Turn(s * t))?;
            done += s * r.delta.heading_change;
            left -= t;
        }
        Ok(done)
    }

    fn sees<L: RobotLink>(&self, host: &Host<L>) -> bool {
        self.side.sees(host.frame())
    }

    fn clear_front<L: RobotLink>(&self, host: &mut Host<L>) -> Result<(), BoundaryError> {
        let limit = (2.0 * PI / self.turn).ceil() as usize;
        for _ in 0..limit {
            if !host.frame().front() {
                break;
            }
            self.spin(host, -self.turn)?;
        }
        Ok(())
    }

    /// Turns in direction `dir` (±1) until the side reading flips, within
    /// `max` radians, and locates the flip by bisection. The robot is left
    /// on the flipped side if `cross`, else just before the flip. `off`
    /// tracks the rotation from the sweep start.
    fn edge<L: RobotLink>(
        &self,
        host: &mut Host<L>,
        off: &mut f64,
        dir: f64,
        max: f64,
        cross: bool,
    ) -> Result<Option<f64>, BoundaryError> {
        let r0 = self.sees(host);
        let start = *off;
        loop {
            if (*off - start).abs() >= max - 1e-9 {
                return Ok(None);
            }
            let prev = *off;
            *off += self.spin(host, dir * self.turn)?;
            if self.sees(host) == r0 {
                continue;
            }
            let (mut same, mut flipped) = (prev, *off);
            for _ in 0..REFINE {
                let mid = 0.5 * (same + flipped);
                *off += self.spin(host, mid - *off)?;
                if self.sees(host) == r0 {
                    same = mid;
                } else {
                    flipped = mid;
                }
            }
            let park = if cross { flipped } else { same };
            *off += self.spin(host, park - *off)?;
            return Ok(Some(0.5 * (same + flipped)));
        }
    }

    /// Sweeps the side ray and returns, as offsets from the starting
    /// heading, the arc where it fires, plus the current offset.
    fn sweep<L: RobotLink>(&self, host: &mut Host<L>) -> Result<Option<(f64, f64, f64)>, BoundaryError> {
        let mut off = 0.0;
        let bounds = if self.sees(host) {
            match self.edge(host, &mut off, 1.0, PI, false)? {
                Some(hi) => self.edge(host, &mut off, -1.0, 2.0 * PI, false)?.map(|lo| (lo, hi)),
                None => None,
            }
        } else {
            match self.edge(host, &mut off, 1.0, 2.0 * PI, true)? {
                Some(lo) => self.edge(host, &mut off, 1.0, 2.0 * PI, false)?.map(|hi| (lo, hi)),
                None => None,
            }
        };
        Ok(bounds.map(|(lo, hi)| (lo, hi, off)))
    }

    /// Sweeps and turns onto the steering heading. Returns the estimated
    /// range, or `None` when nothing is within sensing range.
    pub(crate) fn align<L: RobotLink>(&mut self, host: &mut Host<L>) -> Result<Option<f64>, BoundaryError> {
        self.clear_front(host)?;
        let Some((lo, hi, off)) = self.sweep(host)? else {
            return Ok(None);
        };
        let half = (0.5 * (hi - lo)).clamp(0.0, FRAC_PI_2);
        let range = self.d * half.cos();
        let center = 0.5 * (lo + hi);
        let s = self.side.sign();
        let here = host.estimate();
        // Heading at the arc center puts the side ray on the nearest point.
        let parallel = here.heading + s * (center - off);
        self.last_wall = Some(here.position + Point2D::from_angle(parallel + s * FRAC_PI_2) * range);
        let correction = ((range - self.target) / LOOKAHEAD).atan().clamp(-FRAC_PI_4, FRAC_PI_4);
        self.spin(host, center + correction - off)?;
        Ok(Some(range))
    }

    /// Forward steps per cycle at `range`: a point abeam at `range` stays
    /// within the trigger distance over the whole advance.
    fn advance_steps(&self, range: f64) -> usize {
        let room = (self.d * self.d - range * range).max(0.0).sqrt() * 0.8;
        ((room / self.step).floor() as usize).clamp(1, 5)
    }

    /// Follows until `stop`, checked after every forward move, returns true.
    pub(crate) fn run<L: RobotLink>(
        &mut self,
        host: &mut Host<L>,
        mut stop: impl FnMut(&Host<L>) -> bool,
    ) -> Result<(), BoundaryError> {
        loop {
            let steps = match self.align(host)? {
                Some(range) => {
                    // In a concave corner the arc spans both walls and the
                    // aligned heading can face the far one.
                    self.clear_front(host)?;
                    self.advance_steps(range)
                }
                None => {
                    self.approach(host)?;
                    usize::MAX
                }
            };
            for _ in 0..steps {
                if host.frame().front() {
                    break;
                }
                let t = host.execute(Command::Forward(self.step))?;
                if t.delta.distance == 0.0 {
                    break;
                }
                if stop(host) {
                    return Ok(());
                }
                if steps == usize::MAX && host.frame().any() {
                    break;
                }
            }
        }
    }

    /// Faces the last sensed obstacle point so the next advance closes in.
    fn approach<L: RobotLink>(&mut self, host: &mut Host<L>) -> Result<(), BoundaryError> {
        let target = self.last_wall.ok_or(BoundaryError::NoContact)?;
        let here = host.estimate();
        let bearing = (target - here.position).angle();
        rotate_by(host, normalize_angle(bearing - here.heading))?;
        Ok(())
    }
}

/// Turns in place by `angle`, in chunks of at most `turn_max`.
pub(crate) fn rotate_by<L: RobotLink>(host: &mut Host<L>, angle: f64) -> Result<(), BoundaryError> {
    let turn_max = host.limits().turn_max;
    let mut left = angle;
    while left.abs() > 1e-12 {
        let t = left.clamp(-turn_max, turn_max);
        host.execute(Command::Turn(t))?;
        left -= t;
    }
    Ok(())
}

/// Heads along `direction` and advances in full steps until any sensor
/// fires. Returns the estimated pose at first contact.
pub fn seek_obstacle<L: RobotLink>(host: &mut Host<L>, direction: f64) -> Result<Pose, BoundaryError> {
    if host.frame().any() {
        return Ok(host.estimate());
    }
    rotate_by(host, normalize_angle(direction - host.estimate().heading))?;
    let step = host.limits().step_max;
    while !host.frame().any() {
        host.execute(Command::Forward(step))?;
    }
    let p = host.estimate();
    host.event("contact", &format!("{} {}", p.position.x, p.position.y));
    Ok(p)
}

/// Loop-closure parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closure {
    /// Radius of the anchor disk.
    pub eps_close: f64,
    /// Distance the robot must get from the anchor before it can close.
    pub leave: f64,
    /// Ticks after the anchor during which closure is not checked.
    pub refractory: u64,
    /// Largest heading difference to the anchor heading at closure.
    pub heading_gate: f64,
}

impl Closure {
    pub fn for_step(step: f64) -> Self {
        Self {
            eps_close: 2.0 * step,
            leave: 6.0 * step,
            refractory: 20,
            heading_gate: 30f64.to_radians(),
        }
    }
}

/// Follows the contour in contact with the robot, obstacle kept on `side`,
/// until the robot returns to where it picked the obstacle up. The trace
/// holds the estimated position after every forward move, starting at the
/// anchor.
pub fn follow_contour<L: RobotLink>(host: &mut Host<L>, side: Side) -> Result<ClosedTrace, BoundaryError> {
    if !host.frame().any() {
        return Err(BoundaryError::NoContact);
    }
    let mut follower = ContourFollower::for_host(side, host);
    follower.align(host)?.ok_or(BoundaryError::NoContact)?;
    let closure = Closure::for_step(host.limits().step_max);
    // The anchor is placed once the range has settled onto its target, so
    // later laps pass through the anchor disk.
    let mut settle = SETTLE_STEPS;
    let mut anchor: Option<(Pose, u64)> = None;
    let mut points = Vec::new();
    let mut left_anchor = false;
    follower.run(host, |h| {
        let pose = h.estimate();
        let Some((a, t0)) = anchor else {
            settle -= 1;
            if settle == 0 {
                anchor = Some((pose, h.tick()));
                points.push(pose.position);
            }
            return false;
        };
        points.push(pose.position);
        let dist = pose.position.distance(a.position);
        left_anchor |= dist > closure.leave;
        left_anchor
            && h.tick() - t0 > closure.refractory
            && dist <= closure.eps_close
            && angle_diff(pose.heading, a.heading) < closure.heading_gate
    })?;
    host.execute(Command::Stop)?;
    host.event("loop-closed", &format!("{} points", points.len()));
    points.dedup_by(|a, b| a.distance(*b) < 1e-12);
    Ok(ClosedTrace::from_points(points)?)
}

/// Forward moves between first contact and the loop anchor.
const SETTLE_STEPS: usize = 25;
