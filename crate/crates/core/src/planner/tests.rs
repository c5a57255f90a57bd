use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use pathmap_oracles as oracle;

use super::*;
use crate::geometry::{detect_arcs, ClosedTrace, HoughParams};

fn p(x: f64, y: f64) -> Point2D {
    Point2D::new(x, y)
}

fn poly(v: &[(f64, f64)]) -> Polygon {
    Polygon::new(v.iter().map(|&(x, y)| p(x, y)).collect()).unwrap()
}

fn ring(poly: &Polygon) -> Vec<[f64; 2]> {
    poly.vertices().iter().map(|v| [v.x, v.y]).collect()
}

fn trace(points: Vec<[f64; 2]>) -> ClosedTrace {
    ClosedTrace::from_points(points.into_iter().map(|[x, y]| p(x, y)).collect()).unwrap()
}

fn unit_square() -> Polygon {
    poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
}

fn l_shape() -> Polygon {
    poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)])
}

/// Every oracle line appears in the plan and nothing else does.
fn assert_matches_oracle(plan: &PathPlan, expected: &[([f64; 2], [f64; 2])]) {
    assert_eq!(plan.len(), expected.len());
    for (a, b) in expected {
        let probe = PathPlanEntry {
            line_id: 0,
            start_vertex: p(a[0], a[1]),
            end_point: p(b[0], b[1]),
            start_angle: 0.0,
            part_id: 0,
        };
        assert!(plan.entries.iter().any(|e| e.same_segment(&probe)), "missing {a:?}-{b:?}");
    }
}

#[test]
fn unit_square_has_ten_lines() {
    let sq = unit_square();
    let plan = plan_convex(&sq, 0.5).unwrap();
    assert_matches_oracle(&plan, &oracle::enumerate_fan_lines(&ring(&sq), 0.5));
    assert_eq!(plan.len(), 10);
    assert!(plan.warnings.is_empty());
    // Each vertex keeps its two edge midpoints; the diagonals go to the
    // lexicographically smaller ends.
    let from_origin: Vec<_> = plan.entries.iter().filter(|e| e.start_vertex == p(0.0, 0.0)).collect();
    assert_eq!(from_origin.len(), 3);
    let ids: Vec<u32> = plan.entries.iter().map(|e| e.line_id).collect();
    assert_eq!(ids, (1..=10).collect::<Vec<_>>());
}

#[test]
fn start_angles_are_anticlockwise_from_the_leaving_edge() {
    let plan = plan_convex(&unit_square(), 0.5).unwrap();
    let diag = plan
        .entries
        .iter()
        .find(|e| e.start_vertex == p(0.0, 0.0) && e.end_point == p(1.0, 1.0))
        .unwrap();
    assert!((diag.start_angle - FRAC_PI_4).abs() < 1e-12);
    let mid = plan
        .entries
        .iter()
        .find(|e| e.start_vertex == p(0.0, 0.0) && e.end_point == p(1.0, 0.5))
        .unwrap();
    assert!((mid.start_angle - 0.5f64.atan()).abs() < 1e-12);
    assert!(plan.entries.iter().all(|e| e.start_angle > 0.0 && e.start_angle < PI));
}

#[test]
fn wide_alpha_on_a_triangle_leaves_only_edges() {
    let tri = poly(&[(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)]);
    let plan = plan_convex(&tri, 5.0).unwrap();
    assert!(plan.is_empty());
    assert!(plan.warnings.contains(&PlanWarning::AlphaExceedsLongestEdge {
        part_id: 0,
        alpha: 5.0,
        longest: 5.0
    }));
    assert!(plan.warnings.contains(&PlanWarning::NoInteriorLines { part_id: 0 }));
}

#[test]
fn bad_alpha_is_rejected() {
    for a in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        assert!(matches!(plan_convex(&unit_square(), a), Err(PlanError::BadAlpha(_))));
    }
}

#[test]
fn l_shape_matches_dense_sampling() {
    let l = l_shape();
    let plan = plan_concave(&l, 0.5).unwrap();
    let expected = oracle::enumerate_fan_lines(&ring(&l), 0.5);
    assert_matches_oracle(&plan, &expected);
    // The notch cuts off lines from (2,0) to the upper arm.
    assert!(!plan
        .entries
        .iter()
        .any(|e| e.segment().distance_to_point(p(1.5, 1.5)) < 0.2 && e.start_vertex.x > 1.9));
    for e in &plan.entries {
        assert!(segment_in_region(e.start_vertex, e.end_point, &l));
    }
}

#[test]
fn concave_planner_on_convex_input_is_the_convex_plan() {
    let hex = poly(&[(0.0, 0.0), (2.0, -0.5), (3.0, 1.0), (2.5, 2.5), (0.5, 3.0), (-0.7, 1.5)]);
    assert_eq!(plan_concave(&hex, 0.3).unwrap(), plan_convex(&hex, 0.3).unwrap());
}

#[test]
fn fan_endpoints_are_alpha_spaced() {
    let stops = fan::edge_stops(p(0.0, 0.0), p(1.1, 0.0), 0.25);
    let xs: Vec<f64> = stops.iter().map(|q| q.x).collect();
    assert_eq!(xs.len(), 6);
    for w in xs.windows(2) {
        assert!(w[1] - w[0] <= 0.25 + 1e-12);
    }
    assert!((xs[5] - xs[4] - 0.1).abs() < 1e-12);
}

#[test]
fn circle_plans_match_stepping_oracle() {
    let c = Circle::new(p(0.0, 0.0), 1.0).unwrap();
    for (alpha, want) in [(FRAC_PI_2, 2), (TAU / 7.0, 7), (0.3, 21)] {
        let plan = plan_circular(&c, ArcSpan::Full, alpha).unwrap();
        // 0.3 m never revisits a point: stepping stops after one lap.
        if alpha != 0.3 {
            let bearings = oracle::circle_stepping(1.0, alpha);
            assert_eq!(plan.len(), oracle::count_diameters(&bearings), "alpha {alpha}");
        }
        assert_eq!(plan.len(), want, "alpha {alpha}");
        for e in &plan.entries {
            assert!((e.length() - 2.0).abs() < 1e-9);
            assert_eq!(e.start_angle, FRAC_PI_2);
        }
    }
    // The first line leaves from bearing 0.
    let plan = plan_circular(&c, ArcSpan::Full, FRAC_PI_2).unwrap();
    assert!(plan.entries[0].start_vertex.approx_eq(p(1.0, 0.0), 1e-12));
}

#[test]
fn semicircle_gets_radii_to_the_center() {
    let c = Circle::new(p(0.0, 0.0), 1.0).unwrap();
    let upper = ArcSpan::Partial { start: PI, end: 0.0 };
    let plan = plan_circular(&c, upper, FRAC_PI_4).unwrap();
    assert_eq!(plan.len(), 5, "{:?}", plan.entries);
    for e in &plan.entries {
        assert!(e.end_point.approx_eq(c.center, 1e-12));
        assert!(e.start_vertex.y >= -1e-12);
        let shape = ShapeClass::Circular(c, upper);
        assert!(shape.contains_segment(e.start_vertex, e.end_point));
    }
}

#[test]
fn minor_arc_radii_stop_at_the_chord() {
    let c = Circle::new(p(0.0, 0.0), 1.0).unwrap();
    let cap = ArcSpan::Partial {
        start: FRAC_PI_2 + 0.8,
        end: FRAC_PI_2 - 0.8,
    };
    let plan = plan_circular(&c, cap, 0.1).unwrap();
    let chord_y = (FRAC_PI_2 + 0.8).sin();
    assert!(!plan.is_empty());
    for e in &plan.entries {
        assert!((e.end_point.y - chord_y).abs() < 1e-9);
        assert!(ShapeClass::Circular(c, cap).contains_segment(e.start_vertex, e.end_point));
    }
}

#[test]
fn alpha_longer_than_the_arc_is_rejected() {
    let c = Circle::new(p(0.0, 0.0), 1.0).unwrap();
    assert!(matches!(
        plan_circular(&c, ArcSpan::Full, 7.0),
        Err(PlanError::AlphaExceedsArc { .. })
    ));
}

fn square_trace() -> ClosedTrace {
    trace(oracle::densify_ring(&[[0.0, 0.0], [0.0, 4.0], [4.0, 4.0], [4.0, 0.0]], 0.02))
}

fn l_trace() -> ClosedTrace {
    let l = [[0.0, 0.0], [0.0, 6.0], [3.0, 6.0], [3.0, 3.0], [6.0, 3.0], [6.0, 0.0]];
    trace(oracle::densify_ring(&l, 0.02))
}

#[test]
fn shapes_of_synthetic_traces() {
    assert!(matches!(identify_shape(&square_trace()).unwrap(), ShapeClass::Convex(_)));
    match identify_shape(&l_trace()).unwrap() {
        ShapeClass::Concave(poly) => assert!((poly.area() - 27.0).abs() < 0.05),
        other => panic!("{other:?}"),
    }
    let circle = trace(oracle::circle_trace([1.0, 1.0], 3.0, 900, true));
    match identify_shape(&circle).unwrap() {
        ShapeClass::Circular(c, ArcSpan::Full) => {
            assert!((c.radius - 3.0).abs() < 0.01);
            assert!(c.center.approx_eq(p(1.0, 1.0), 0.01));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn stadium_splits_into_rectangle_and_two_caps() {
    let (pts, _) = oracle::stadium_trace([0.0, 0.0], 2.0, 1.5, 0.02);
    let t = trace(pts);
    let shape = identify_shape(&t).unwrap();
    let ShapeClass::Complex(parts) = &shape else {
        panic!("{shape:?}");
    };
    assert_eq!(parts.len(), 3);
    assert_eq!(parts.iter().filter(|s| matches!(s, ShapeClass::Convex(_))).count(), 1);
    assert_eq!(parts.iter().filter(|s| matches!(s, ShapeClass::Circular(..))).count(), 2);
    let truth = 4.0 * 3.0 + PI * 1.5 * 1.5;
    assert!((shape.area() - truth).abs() <= 0.01 * truth, "{}", shape.area());
    for part in parts {
        if let ShapeClass::Circular(c, span) = part {
            // Straight points within the fit band next to a tangent joint
            // join the arc, so the caps run slightly past 180°.
            assert!((span.sweep() - PI).abs() < 0.25, "{span:?}");
            assert!((c.radius - 1.5).abs() < 0.02);
        }
    }
}

#[test]
fn rounded_corner_square_has_one_arc_part() {
    // Square 0..4 with the top-right corner replaced by a quarter circle of
    // radius 2 centered at (2, 2).
    let mut pts = Vec::new();
    let line = |pts: &mut Vec<[f64; 2]>, a: [f64; 2], b: [f64; 2]| {
        let n = (oracle::dist(a, b) / 0.02).round() as usize;
        for k in 0..n {
            let t = k as f64 / n as f64;
            pts.push([a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]);
        }
    };
    line(&mut pts, [0.0, 0.0], [4.0, 0.0]);
    line(&mut pts, [4.0, 0.0], [4.0, 2.0]);
    let arc = (PI * 2.0 / 2.0 / 0.02).round() as usize;
    for k in 0..arc {
        let th = FRAC_PI_2 * k as f64 / arc as f64;
        pts.push([2.0 + 2.0 * th.cos(), 2.0 + 2.0 * th.sin()]);
    }
    line(&mut pts, [2.0, 4.0], [0.0, 4.0]);
    line(&mut pts, [0.0, 4.0], [0.0, 0.0]);
    let t = trace(pts);
    let arcs = detect_arcs(&t, &HoughParams::default());
    let parts = decompose_complex(&t, &arcs).unwrap();
    assert_eq!(parts.len(), 2, "{parts:?}");
    assert_eq!(parts.iter().filter(|s| matches!(s, ShapeClass::Circular(..))).count(), 1);
    let total: f64 = parts.iter().map(ShapeClass::area).sum();
    let truth = 16.0 - 4.0 + PI;
    assert!((total - truth).abs() <= 0.01 * truth, "{total}");
}

#[test]
fn full_circle_passes_through_decomposition() {
    let t = trace(oracle::circle_trace([0.0, 0.0], 2.0, 600, false));
    let arcs = detect_arcs(&t, &HoughParams::default());
    let parts = decompose_complex(&t, &arcs).unwrap();
    assert!(matches!(parts.as_slice(), [ShapeClass::Circular(_, ArcSpan::Full)]));
}

#[test]
fn complex_plans_keep_parts_apart() {
    let (pts, _) = oracle::stadium_trace([0.0, 0.0], 2.0, 1.5, 0.02);
    let shape = identify_shape(&trace(pts)).unwrap();
    let plan = build_path_plan(&shape, 0.5).unwrap();
    for (k, part) in shape.parts().iter().enumerate() {
        let own: Vec<_> = plan.entries.iter().filter(|e| e.part_id == k as u32).collect();
        assert!(!own.is_empty());
        for e in own {
            assert!(part.contains_segment(e.start_vertex, e.end_point), "part {k}: {e:?}");
        }
    }
    let ids: Vec<u32> = plan.entries.iter().map(|e| e.line_id).collect();
    assert_eq!(ids, (1..=plan.len() as u32).collect::<Vec<_>>());
}

#[test]
fn plans_are_deterministic_and_export_as_json() {
    let shape = identify_shape(&l_trace()).unwrap();
    let a = build_path_plan(&shape, 0.7).unwrap();
    let b = build_path_plan(&shape, 0.7).unwrap();
    assert_eq!(a, b);
    let json = a.to_json();
    let first = &json.as_array().unwrap()[0];
    assert_eq!(first["line_id"], "L1");
    assert_eq!(first["part_id"], 0);
    assert!(first["start"].as_array().unwrap().len() == 2);
    assert!(first["angle_rad"].as_f64().unwrap() > 0.0);
    assert_eq!(json.to_string(), b.to_json().to_string());
}

#[test]
fn vertex_index_groups_entries() {
    let plan = plan_convex(&unit_square(), 0.5).unwrap();
    let total: usize = plan.per_vertex_index.iter().map(|(_, v)| v.len()).sum();
    assert_eq!(total, plan.len());
    for (v, list) in &plan.per_vertex_index {
        for &i in list {
            assert_eq!(plan.entries[i].start_vertex, *v);
        }
    }
}
