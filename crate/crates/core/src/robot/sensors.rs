use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::geometry::{Circle, Point2D, Region, Segment};
use crate::world::{Pose, WorldSpec};

/// Mounting position of a proximity sensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SensorLabel {
    Front,
    Left,
    Rear,
    Right,
    DiagFrontLeft,
    DiagRearLeft,
    DiagRearRight,
    DiagFrontRight,
}

impl SensorLabel {
    /// Bit of this sensor in a [`SensorFrame::mask`].
    pub const fn bit(self) -> u8 {
        1 << self as u8
    }

    /// Bearing relative to the robot heading, counterclockwise.
    pub fn bearing(self) -> f64 {
        match self {
            SensorLabel::Front => 0.0,
            SensorLabel::Left => FRAC_PI_2,
            SensorLabel::Rear => PI,
            SensorLabel::Right => -FRAC_PI_2,
            SensorLabel::DiagFrontLeft => FRAC_PI_4,
            SensorLabel::DiagRearLeft => 3.0 * FRAC_PI_4,
            SensorLabel::DiagRearRight => -3.0 * FRAC_PI_4,
            SensorLabel::DiagFrontRight => -FRAC_PI_4,
        }
    }
}

/// Binary proximity sensors that fire at range `trigger_distance` or less.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorRig {
    trigger_distance: f64,
    sensors: Vec<SensorLabel>,
}

impl SensorRig {
    /// Front, left, rear and right sensors.
    pub fn cardinal(trigger_distance: f64) -> Self {
        assert!(trigger_distance > 0.0, "trigger distance must be positive");
        Self {
            trigger_distance,
            sensors: vec![
                SensorLabel::Front,
                SensorLabel::Left,
                SensorLabel::Rear,
                SensorLabel::Right,
            ],
        }
    }

    /// Cardinal sensors plus the four diagonals.
    pub fn with_diagonals(trigger_distance: f64) -> Self {
        let mut rig = Self::cardinal(trigger_distance);
        rig.sensors.extend([
            SensorLabel::DiagFrontLeft,
            SensorLabel::DiagRearLeft,
            SensorLabel::DiagRearRight,
            SensorLabel::DiagFrontRight,
        ]);
        rig
    }

    pub fn trigger_distance(&self) -> f64 {
        self.trigger_distance
    }

    pub fn sensors(&self) -> &[SensorLabel] {
        &self.sensors
    }
}

/// One reading of every rig sensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SensorFrame {
    mask: u8,
    pub tick: u64,
}

impl SensorFrame {
    pub fn from_mask(mask: u8, tick: u64) -> Self {
        Self { mask, tick }
    }

    pub fn mask(&self) -> u8 {
        self.mask
    }

    pub fn get(&self, label: SensorLabel) -> bool {
        self.mask & label.bit() != 0
    }

    pub fn front(&self) -> bool {
        self.get(SensorLabel::Front)
    }

    pub fn left(&self) -> bool {
        self.get(SensorLabel::Left)
    }

    pub fn right(&self) -> bool {
        self.get(SensorLabel::Right)
    }

    pub fn rear(&self) -> bool {
        self.get(SensorLabel::Rear)
    }

    pub fn any(&self) -> bool {
        self.mask != 0
    }
}

/// Every obstacle outline of a world in ray-castable form: polygon edges
/// plus analytic circles.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstacles {
    edges: Vec<Segment>,
    circles: Vec<Circle>,
}

impl Obstacles {
    pub fn from_world(w: &WorldSpec) -> Self {
        let mut obs = Self {
            edges: Vec::new(),
            circles: Vec::new(),
        };
        for r in std::iter::once(&w.outer).chain(&w.intrinsic).chain(&w.extrinsic) {
            match r {
                Region::Polygon(p) => obs.edges.extend(p.edges()),
                Region::Circle(c) => obs.circles.push(*c),
            }
        }
        obs
    }

    /// Distance along the unit ray `origin + t·dir` to the first outline,
    /// or infinity.
    pub fn ray_cast(&self, origin: Point2D, dir: Point2D) -> f64 {
        let mut best = f64::INFINITY;
        for e in &self.edges {
            let s = e.b - e.a;
            let denom = dir.cross(s);
            if denom.abs() < 1e-15 {
                continue;
            }
            let ao = e.a - origin;
            let t = ao.cross(s) / denom;
            let u = ao.cross(dir) / denom;
            if t >= 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u) && t < best {
                best = t;
            }
        }
        for c in &self.circles {
            // |origin + t·dir − center|² = r² with |dir| = 1.
            let oc = origin - c.center;
            let b = oc.dot(dir);
            let disc = b * b - (oc.norm_sq() - c.radius * c.radius);
            if disc < 0.0 {
                continue;
            }
            let root = disc.sqrt();
            for t in [-b - root, -b + root] {
                if t >= 0.0 {
                    best = best.min(t);
                    break;
                }
            }
        }
        best
    }

    /// Distance from `p` to the nearest outline.
    pub fn clearance(&self, p: Point2D) -> f64 {
        let e = self
            .edges
            .iter()
            .map(|e| e.distance_to_point(p))
            .fold(f64::INFINITY, f64::min);
        self.circles
            .iter()
            .map(|c| c.distance_to_boundary(p))
            .fold(e, f64::min)
    }

    /// Reads every sensor of `rig` at `pose`. Closed comparison: a hit at
    /// exactly the trigger distance fires.
    pub fn sense(&self, pose: Pose, rig: &SensorRig, tick: u64) -> SensorFrame {
        let mut mask = 0u8;
        for &label in rig.sensors() {
            let dir = Point2D::from_angle(pose.heading + label.bearing());
            if self.ray_cast(pose.position, dir) <= rig.trigger_distance() {
                mask |= label.bit();
            }
        }
        SensorFrame::from_mask(mask, tick)
    }
}

/// Sensor reading of a world at a pose.
pub fn sense(world: &WorldSpec, pose: Pose, rig: &SensorRig) -> SensorFrame {
    Obstacles::from_world(world).sense(pose, rig, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Polygon;

    fn room() -> WorldSpec {
        let outer = Polygon::rectangle(Point2D::new(0.0, 0.0), Point2D::new(10.0, 10.0)).unwrap();
        WorldSpec::new(Region::Polygon(outer), Pose::new(Point2D::new(5.0, 5.0), 0.0))
    }

    #[test]
    fn facing_a_close_wall() {
        let rig = SensorRig::cardinal(0.2);
        let f = sense(&room(), Pose::new(Point2D::new(9.9, 5.0), 0.0), &rig);
        assert!(f.front() && !f.left() && !f.right() && !f.rear());
        assert!(!sense(&room(), room().start, &rig).any());
    }

    #[test]
    fn exactly_at_trigger_distance_fires() {
        let rig = SensorRig::cardinal(0.25);
        let f = sense(&room(), Pose::new(Point2D::new(9.75, 5.0), 0.0), &rig);
        assert!(f.front());
    }

    #[test]
    fn circle_ray_cast_from_inside_and_outside() {
        let c = Circle::new(Point2D::new(0.0, 0.0), 1.0).unwrap();
        let obs = Obstacles {
            edges: Vec::new(),
            circles: vec![c],
        };
        let x = Point2D::new(1.0, 0.0);
        assert!((obs.ray_cast(Point2D::new(0.5, 0.0), x) - 0.5).abs() < 1e-12);
        assert!((obs.ray_cast(Point2D::new(-3.0, 0.0), x) - 2.0).abs() < 1e-12);
        assert!(obs.ray_cast(Point2D::new(-3.0, 2.0), x).is_infinite());
    }

    #[test]
    fn diagonal_bits_are_distinct() {
        let rig = SensorRig::with_diagonals(0.2);
        let bits: u8 = rig.sensors().iter().fold(0, |m, s| m | s.bit());
        assert_eq!(bits, 0xFF);
    }
}
