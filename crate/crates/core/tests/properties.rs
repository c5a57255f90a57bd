use pathmap_oracles as oracle;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pathmap::config::RunConfig;
use pathmap::geometry::{
    classify_polygon, convex_hull, point_in_region, segment_in_region, segment_on_boundary, Circle, Convexity,
    Location, Point2D, Polygon, Region,
};
use pathmap::pipeline::run_pipeline;
use pathmap::planner::{build_path_plan, ShapeClass};
use pathmap::render::map_json;
use pathmap::robot::{sense, NoiseConfig, SensorRig};
use pathmap::world::{Pose, WorldSpec};

type P = [f64; 2];

fn pt(p: P) -> Point2D {
    Point2D::new(p[0], p[1])
}

fn polygon(v: &[P]) -> Polygon {
    Polygon::new(v.iter().map(|&p| pt(p)).collect()).unwrap()
}

/// A random simple polygon, convex or star-shaped, drawn from `seed`.
fn random_shape(seed: u64, n: usize, star: bool) -> (Vec<P>, ShapeClass) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = if star {
        oracle::random_star_polygon(&mut rng, n)
    } else {
        oracle::random_convex_polygon(&mut rng, n)
    };
    let p = polygon(&v);
    let shape = match classify_polygon(&p) {
        Convexity::Convex => ShapeClass::Convex(p),
        Convexity::Concave => ShapeClass::Concave(p),
    };
    (v, shape)
}

fn outline(shape: &ShapeClass) -> Polygon {
    shape.outline().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_matches_brute_force(pts in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 3..40)) {
        let pts: Vec<P> = pts.into_iter().map(|(x, y)| [x, y]).collect();
        let expected = oracle::brute_force_hull(&pts);
        let ours = convex_hull(&pts.iter().map(|&p| pt(p)).collect::<Vec<_>>());
        match ours {
            Ok(h) => {
                prop_assert_eq!(h.vertices().len(), expected.len());
                for v in h.vertices() {
                    prop_assert!(expected.iter().any(|e| oracle::dist([v.x, v.y], *e) < 1e-9));
                }
            }
            Err(_) => prop_assert!(expected.len() < 3),
        }
    }

    #[test]
    fn point_location_matches_winding(seed: u64, n in 3usize..16, x in -2.0..2.0f64, y in -2.0..2.0f64) {
        let (v, shape) = random_shape(seed, n, true);
        let ours = match point_in_region(Point2D::new(x, y), &outline(&shape)) {
            Location::Outside => 0,
            Location::OnBoundary => 1,
            Location::Inside => 2,
        };
        prop_assert_eq!(ours, oracle::locate([x, y], &v, 1e-6));
    }

    #[test]
    fn plan_lines_are_interior_chords(seed: u64, n in 3usize..10, star: bool, alpha in 0.15..1.5f64) {
        let (_, shape) = random_shape(seed, n, star);
        let poly = outline(&shape);
        let plan = build_path_plan(&shape, alpha).unwrap();
        prop_assert!(!plan.is_empty());
        for e in &plan.entries {
            prop_assert!(poly.vertices().iter().any(|v| v.approx_eq(e.start_vertex, 1e-9)));
            prop_assert!(poly.distance_to_boundary(e.end_point) < 1e-6);
            prop_assert!(e.length() > 1e-6);
            prop_assert!(segment_in_region(e.start_vertex, e.end_point, &poly));
            prop_assert!(!segment_on_boundary(e.start_vertex, e.end_point, &poly));
        }
        for (i, a) in plan.entries.iter().enumerate() {
            prop_assert!(plan.entries[i + 1..].iter().all(|b| !a.same_segment(b)));
        }
    }

    #[test]
    fn halving_alpha_keeps_every_line(seed: u64, n in 3usize..10, star: bool, alpha in 0.2..1.5f64) {
        let (_, shape) = random_shape(seed, n, star);
        let coarse = build_path_plan(&shape, alpha).unwrap();
        let fine = build_path_plan(&shape, alpha / 2.0).unwrap();
        prop_assert!(fine.len() >= coarse.len());
        for e in &coarse.entries {
            prop_assert!(fine.entries.iter().any(|f| f.same_segment(e)), "line {} lost", e.line_id);
        }
    }

    #[test]
    fn planning_is_deterministic(seed: u64, n in 3usize..10, star: bool, alpha in 0.15..1.5f64) {
        let (_, shape) = random_shape(seed, n, star);
        let a = build_path_plan(&shape, alpha).unwrap();
        let b = build_path_plan(&shape, alpha).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn sensing_is_monotone_in_trigger_distance(
        x in 0.3..5.7f64, y in 0.3..5.7f64, heading in -3.2..3.2f64,
        d1 in 0.05..0.6f64, extra in 0.0..0.6f64,
    ) {
        let room = Polygon::rectangle(Point2D::new(0.0, 0.0), Point2D::new(6.0, 6.0)).unwrap();
        let disk = Circle::new(Point2D::new(3.0, 3.0), 0.5).unwrap();
        let w = WorldSpec::new(Region::Polygon(room), Pose::new(Point2D::new(1.0, 1.0), 0.0))
            .with_extrinsic(Region::Circle(disk));
        let pose = Pose::new(Point2D::new(x, y), heading);
        for (a, b) in [
            (SensorRig::cardinal(d1), SensorRig::cardinal(d1 + extra)),
            (SensorRig::with_diagonals(d1), SensorRig::with_diagonals(d1 + extra)),
        ] {
            let near = sense(&w, pose, &a).mask();
            let far = sense(&w, pose, &b).mask();
            prop_assert_eq!(near & !far, 0, "{:08b} fires but {:08b} does not", near, far);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn runs_repeat_exactly_for_a_seed(seed in 0u64..1000, noisy: bool) {
        let room = Polygon::rectangle(Point2D::new(0.0, 0.0), Point2D::new(4.0, 4.0)).unwrap();
        let w = WorldSpec::new(Region::Polygon(room), Pose::new(Point2D::new(2.0, 2.0), 0.3));
        let cfg = RunConfig {
            alpha: 1.0,
            seed,
            noise: if noisy { NoiseConfig::typical() } else { NoiseConfig::off() },
            ..RunConfig::default()
        };
        let a = run_pipeline(&w, &cfg).unwrap();
        let b = run_pipeline(&w, &cfg).unwrap();
        prop_assert_eq!(map_json(&a.map, &cfg), map_json(&b.map, &cfg));
        prop_assert_eq!(a.log.to_string(), b.log.to_string());
    }
}
