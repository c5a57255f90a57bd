//! Map and plan export: JSON with coordinates rounded to the micrometer,
//! SVG at 100 px per meter with the y axis pointing up.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::geometry::{bounding_box, Point2D, Polygon};
use crate::object_mapper::MapResult;
use crate::planner::{round6, PathPlan, ShapeClass};
use crate::robot::{replay, TraceLog};

pub const PX_PER_M: f64 = 100.0;
/// Blank border around the drawing (meters).
const MARGIN: f64 = 0.5;

fn ring_json(poly: &Polygon) -> Value {
    Value::Array(poly.vertices().iter().map(|v| json!([round6(v.x), round6(v.y)])).collect())
}

fn finish(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// `map.json`: boundary ring, shape name, object outlines, run statistics
/// and the configuration that produced them.
pub fn map_json(map: &MapResult, cfg: &RunConfig) -> String {
    let objects: Vec<Value> = map
        .objects
        .iter()
        .map(|o| json!({"id": o.id, "outline": ring_json(&o.outline)}))
        .collect();
    finish(&json!({
        "boundary": ring_json(&map.boundary),
        "shape": map.shape.name(),
        "objects": objects,
        "stats": {
            "ticks": map.stats.ticks,
            "paths_traversed": map.stats.paths_traversed,
            "distance": round6(map.stats.distance),
            "restarts": map.stats.restarts,
        },
        "config": cfg.to_json(),
    }))
}

/// Plan document: shape name, α, lines and planner warnings.
pub fn plan_json(shape: &ShapeClass, plan: &PathPlan) -> String {
    let warnings: Vec<String> = plan.warnings.iter().map(ToString::to_string).collect();
    finish(&json!({
        "shape": shape.name(),
        "alpha": plan.alpha,
        "lines": plan.to_json(),
        "warnings": warnings,
    }))
}

/// Maps world coordinates to pixels over a fixed frame.
struct Canvas {
    min: Point2D,
    max: Point2D,
    body: String,
}

impl Canvas {
    fn new(points: &[Point2D]) -> Self {
        let (lo, hi) = if points.is_empty() {
            (Point2D::new(0.0, 0.0), Point2D::new(1.0, 1.0))
        } else {
            bounding_box(points)
        };
        Self {
            min: Point2D::new(lo.x - MARGIN, lo.y - MARGIN),
            max: Point2D::new(hi.x + MARGIN, hi.y + MARGIN),
            body: String::new(),
        }
    }

    fn px(&self, p: Point2D) -> (f64, f64) {
        ((p.x - self.min.x) * PX_PER_M, (self.max.y - p.y) * PX_PER_M)
    }

    fn coords(&self, pts: &[Point2D]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn ring_path(&self, pts: &[Point2D]) -> String {
        let mut d = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = self.px(p);
            let _ = write!(d, "{}{x:.2},{y:.2} ", if i == 0 { 'M' } else { 'L' });
        }
        d.push('Z');
        d
    }

    fn line(&mut self, a: Point2D, b: Point2D) {
        let ((x1, y1), (x2, y2)) = (self.px(a), self.px(b));
        let _ = writeln!(self.body, r#"    <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
    }

    fn finish(self) -> String {
        let w = (self.max.x - self.min.x) * PX_PER_M;
        let h = (self.max.y - self.min.y) * PX_PER_M;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n{}</svg>\n",
            self.body
        )
    }
}

fn plan_group(c: &mut Canvas, plan: &PathPlan) {
    c.body.push_str("  <g id=\"plan\" stroke=\"gray\" stroke-width=\"1\">\n");
    for e in &plan.entries {
        c.line(e.start_vertex, e.end_point);
    }
    c.body.push_str("  </g>\n");
}

/// `map.svg`: one boundary path, one plan group and one polygon per
/// mapped object.
pub fn map_svg(map: &MapResult) -> String {
    let mut pts = map.boundary.vertices().to_vec();
    pts.extend(map.objects.iter().flat_map(|o| o.outline.vertices().iter().copied()));
    let mut c = Canvas::new(&pts);
    let d = c.ring_path(map.boundary.vertices());
    let _ = writeln!(c.body, r#"  <path id="boundary" d="{d}" fill="none" stroke="black" stroke-width="2"/>"#);
    plan_group(&mut c, &map.plan);
    for o in &map.objects {
        let points = c.coords(o.outline.vertices());
        let _ = writeln!(
            c.body,
            r#"  <polygon class="object" data-id="{}" points="{points}" fill="none" stroke="red" stroke-width="2"/>"#,
            o.id
        );
    }
    c.finish()
}

/// Plan drawing: each part's outline as one boundary path, then the plan
/// lines.
pub fn plan_svg(shape: &ShapeClass, plan: &PathPlan) -> String {
    let outlines: Vec<Polygon> = shape.parts().iter().filter_map(ShapeClass::outline).collect();
    let pts: Vec<Point2D> = outlines.iter().flat_map(|p| p.vertices().iter().copied()).collect();
    let mut c = Canvas::new(&pts);
    let d: Vec<String> = outlines.iter().map(|p| c.ring_path(p.vertices())).collect();
    let _ = writeln!(
        c.body,
        r#"  <path id="boundary" d="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        d.join(" ")
    );
    plan_group(&mut c, plan);
    c.finish()
}

/// Dead-reckoned path after every `every` motion records, and after the
/// last one. An empty log gives no frames.
pub fn replay_frames(log: &TraceLog, every: usize) -> Vec<String> {
    let every = every.max(1);
    let mut poses = vec![log.start()];
    poses.extend(replay(log));
    let n = poses.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let pts: Vec<Point2D> = poses.iter().map(|p| p.position).collect();
    let mut stops: Vec<usize> = (every..=n).step_by(every).collect();
    if stops.last() != Some(&n) {
        stops.push(n);
    }
    stops
        .into_iter()
        .map(|k| {
            let mut c = Canvas::new(&pts);
            let path = c.coords(&pts[..=k]);
            let (x, y) = c.px(pts[k]);
            let _ = writeln!(c.body, r#"  <polyline id="path" points="{path}" fill="none" stroke="black"/>"#);
            let _ = writeln!(c.body, r#"  <circle id="robot" cx="{x:.2}" cy="{y:.2}" r="5" fill="blue"/>"#);
            let _ = writeln!(c.body, r#"  <text x="4" y="14">tick {k}</text>"#);
            c.finish()
        })
        .collect()
}
