//! Shape identification on boundaries traced by the simulated robot.

use std::f64::consts::PI;

use pathmap::boundary_mapper::{follow_contour, seek_obstacle, Side};
use pathmap::geometry::{Circle, ClosedTrace, Point2D, Polygon, Region};
use pathmap::planner::{identify_shape, ShapeClass};
use pathmap::robot::{Host, MotionLimits, NoiseConfig, SensorRig, SimRobot};
use pathmap::world::{Pose, WorldSpec};

fn trace_room(outer: Region, start: Pose) -> ClosedTrace {
    let w = WorldSpec::new(outer, start);
    let sim = SimRobot::new(&w, SensorRig::cardinal(0.2), MotionLimits::default(), NoiseConfig::off(), 0);
    let mut host = Host::new(sim, w.start, 2_000_000);
    seek_obstacle(&mut host, start.heading).unwrap();
    follow_contour(&mut host, Side::Left).unwrap()
}

fn pose(x: f64, y: f64, h: f64) -> Pose {
    Pose::new(Point2D::new(x, y), h)
}

fn stadium(c: Point2D, half: f64, r: f64) -> Polygon {
    let mut v = Vec::new();
    for k in 0..=180 {
        let t = -PI / 2.0 + PI * k as f64 / 180.0;
        v.push(Point2D::new(c.x + half + r * t.cos(), c.y + r * t.sin()));
    }
    for k in 0..=180 {
        let t = PI / 2.0 + PI * k as f64 / 180.0;
        v.push(Point2D::new(c.x - half + r * t.cos(), c.y + r * t.sin()));
    }
    Polygon::new(v).unwrap()
}

#[test]
fn square_room_is_convex() {
    let sq = Polygon::rectangle(Point2D::new(0.0, 0.0), Point2D::new(10.0, 10.0)).unwrap();
    let t = trace_room(Region::Polygon(sq), pose(5.0, 5.0, 0.0));
    let shape = identify_shape(&t).unwrap();
    let ShapeClass::Convex(poly) = &shape else { panic!("{shape:?}") };
    assert_eq!(poly.len(), 4, "{poly:?}");
}

#[test]
fn l_room_is_concave() {
    let l = Polygon::new(
        [(0.0, 0.0), (10.0, 0.0), (10.0, 5.0), (5.0, 5.0), (5.0, 10.0), (0.0, 10.0)]
            .map(|(x, y)| Point2D::new(x, y))
            .to_vec(),
    )
    .unwrap();
    let t = trace_room(Region::Polygon(l), pose(2.0, 2.0, 0.3));
    let shape = identify_shape(&t).unwrap();
    let ShapeClass::Concave(poly) = &shape else { panic!("{shape:?}") };
    assert_eq!(poly.len(), 6, "{poly:?}");
}

#[test]
fn circle_room_is_circular() {
    let c = Circle::new(Point2D::new(0.0, 0.0), 5.0).unwrap();
    let t = trace_room(Region::Circle(c), pose(0.0, 0.0, 0.7));
    let shape = identify_shape(&t).unwrap();
    let ShapeClass::Circular(fit, _) = &shape else { panic!("{shape:?}") };
    assert!((fit.radius - 4.8).abs() < 0.05, "{fit:?}");
}

#[test]
fn stadium_room_is_complex() {
    let room = stadium(Point2D::new(5.0, 5.0), 2.5, 2.5);
    let t = trace_room(Region::Polygon(room), pose(5.0, 5.0, 0.4));
    let shape = identify_shape(&t).unwrap();
    let ShapeClass::Complex(parts) = &shape else { panic!("{shape:?}") };
    assert_eq!(parts.len(), 3, "{parts:?}");
}
