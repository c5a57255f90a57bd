//! World file reading and writing.
//!
//! ```json
//! {
//!   "units": "meters",
//!   "outer": {"polygon": [[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [0.0, 10.0]]},
//!   "intrinsic": [],
//!   "extrinsic": [{"circle": {"center": [5.0, 5.0], "radius": 0.3}}],
//!   "start": {"position": [2.0, 2.0], "heading_deg": 0.0}
//! }
//! ```
//!
//! Syntax is checked by `serde_json`; the schema is walked by hand so that
//! every error names the offending field path.

use serde_json::{Map, Value};

use super::{validate_world, Pose, WorldError, WorldSpec, DEFAULT_SENSOR_DISTANCE};
use crate::geometry::{normalize_angle, Circle, Point2D, Polygon, Region};

/// Parses and validates a world file, checking clearances against the
/// default sensor distance.
pub fn load_world(text: &str) -> Result<WorldSpec, WorldError> {
    let world = parse_world(text)?;
    let violations = validate_world(&world, DEFAULT_SENSOR_DISTANCE);
    if let Some(first) = violations.first() {
        let constraint = violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        return Err(WorldError::Schema {
            field: first.field(),
            constraint,
        });
    }
    Ok(world)
}

/// Structural parse only; no geometric validation beyond well-formed
/// polygons and circles.
pub fn parse_world(text: &str) -> Result<WorldSpec, WorldError> {
    let root = parse_json(text)?;
    let obj = as_object(&root, "$")?;
    for key in obj.keys() {
        if !matches!(
            key.as_str(),
            "units" | "outer" | "intrinsic" | "extrinsic" | "start"
        ) {
            return Err(schema(key, "unknown field"));
        }
    }
    match obj.get("units") {
        Some(Value::String(u)) if u == "meters" => {}
        Some(_) => return Err(schema("units", "must be \"meters\"")),
        None => return Err(schema("units", "required")),
    }
    let outer = shape(required(obj, "outer", "outer")?, "outer")?;
    let intrinsic = shape_list(obj.get("intrinsic"), "intrinsic")?;
    let extrinsic = shape_list(obj.get("extrinsic"), "extrinsic")?;
    let start = start_pose(required(obj, "start", "start")?)?;
    Ok(WorldSpec {
        outer,
        intrinsic,
        extrinsic,
        start,
    })
}

/// Parses a standalone shape document such as `{"circle": {...}}`.
pub fn parse_shape(text: &str) -> Result<Region, WorldError> {
    shape(&parse_json(text)?, "$")
}

fn parse_json(text: &str) -> Result<Value, WorldError> {
    serde_json::from_str(text).map_err(|e| WorldError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn schema(field: &str, constraint: impl Into<String>) -> WorldError {
    WorldError::Schema {
        field: field.to_string(),
        constraint: constraint.into(),
    }
}

fn as_object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>, WorldError> {
    v.as_object().ok_or_else(|| schema(field, "must be an object"))
}

fn required<'a>(
    obj: &'a Map<String, Value>,
    key: &str,
    field: &str,
) -> Result<&'a Value, WorldError> {
    obj.get(key).ok_or_else(|| schema(field, "required"))
}

fn number(v: &Value, field: &str) -> Result<f64, WorldError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema(field, "must be a finite number"))
}

fn point(v: &Value, field: &str) -> Result<Point2D, WorldError> {
    match v.as_array().map(Vec::as_slice) {
        Some([x, y]) => Ok(Point2D::new(number(x, field)?, number(y, field)?)),
        _ => Err(schema(field, "must be an [x, y] pair")),
    }
}

fn shape(v: &Value, field: &str) -> Result<Region, WorldError> {
    let obj = as_object(v, field)?;
    if obj.len() != 1 {
        return Err(schema(field, "must have exactly one of `polygon` or `circle`"));
    }
    let (kind, body) = obj.iter().next().expect("one entry");
    let path = format!("{field}.{kind}");
    match kind.as_str() {
        "polygon" => {
            let arr = body
                .as_array()
                .ok_or_else(|| schema(&path, "must be an array of points"))?;
            let pts = arr
                .iter()
                .enumerate()
                .map(|(i, p)| point(p, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Polygon::new(pts)
                .map(Region::Polygon)
                .map_err(|e| schema(&path, e.to_string()))
        }
        "circle" => {
            let c = as_object(body, &path)?;
            for key in c.keys() {
                if key != "center" && key != "radius" {
                    return Err(schema(&format!("{path}.{key}"), "unknown field"));
                }
            }
            let center = point(required(c, "center", &format!("{path}.center"))?, &format!("{path}.center"))?;
            let radius = number(required(c, "radius", &format!("{path}.radius"))?, &format!("{path}.radius"))?;
            Circle::new(center, radius)
                .map(Region::Circle)
                .map_err(|_| schema(&format!("{path}.radius"), "must be positive"))
        }
        other => Err(schema(&format!("{field}.{other}"), "unknown shape kind")),
    }
}

fn shape_list(v: Option<&Value>, field: &str) -> Result<Vec<Region>, WorldError> {
    let Some(v) = v else {
        return Ok(Vec::new());
    };
    let arr = v
        .as_array()
        .ok_or_else(|| schema(field, "must be an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, s)| shape(s, &format!("{field}[{i}]")))
        .collect()
}

fn start_pose(v: &Value) -> Result<Pose, WorldError> {
    let obj = as_object(v, "start")?;
    for key in obj.keys() {
        if key != "position" && key != "heading_deg" {
            return Err(schema(&format!("start.{key}"), "unknown field"));
        }
    }
    let position = point(required(obj, "position", "start.position")?, "start.position")?;
    let heading_deg = number(required(obj, "heading_deg", "start.heading_deg")?, "start.heading_deg")?;
    Ok(Pose::new(position, heading_deg.to_radians()))
}

/// Canonical text of a world. `parse_world(world_to_json(w)) == w` holds
/// bit for bit.
pub fn world_to_json(w: &WorldSpec) -> String {
    let mut out = String::from("{\n  \"units\": \"meters\",\n");
    out.push_str(&format!("  \"outer\": {},\n", shape_json(&w.outer)));
    for (name, list) in [("intrinsic", &w.intrinsic), ("extrinsic", &w.extrinsic)] {
        if list.is_empty() {
            out.push_str(&format!("  \"{name}\": [],\n"));
        } else {
            let items: Vec<String> = list.iter().map(|s| format!("    {}", shape_json(s))).collect();
            out.push_str(&format!("  \"{name}\": [\n{}\n  ],\n", items.join(",\n")));
        }
    }
    out.push_str(&format!(
        "  \"start\": {{\"position\": {}, \"heading_deg\": {}}}\n}}\n",
        point_json(w.start.position),
        num(heading_degrees(w.start.heading))
    ));
    out
}

fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite number")
}

fn point_json(p: Point2D) -> String {
    format!("[{}, {}]", num(p.x), num(p.y))
}

fn shape_json(r: &Region) -> String {
    match r {
        Region::Polygon(p) => {
            let pts: Vec<String> = p.vertices().iter().map(|v| point_json(*v)).collect();
            format!("{{\"polygon\": [{}]}}", pts.join(", "))
        }
        Region::Circle(c) => format!(
            "{{\"circle\": {{\"center\": {}, \"radius\": {}}}}}",
            point_json(c.center),
            num(c.radius)
        ),
    }
}

/// Shortest decimal degree value that converts back to exactly `heading`.
fn heading_degrees(heading: f64) -> f64 {
    let deg = heading.to_degrees();
    for digits in 0..=17 {
        let candidate: f64 = format!("{deg:.digits$}").parse().expect("formatted float");
        if normalize_angle(candidate.to_radians()) == heading {
            return candidate;
        }
    }
    deg
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROOM: &str = r#"{"units":"meters","outer":{"polygon":[[0,0],[10,0],[10,10],[0,10]]},
        "intrinsic":[],"extrinsic":[],"start":{"position":[5,5],"heading_deg":90}}"#;

    #[test]
    fn parses_and_round_trips() {
        let w = load_world(ROOM).unwrap();
        assert_eq!(w.start.heading, std::f64::consts::FRAC_PI_2);
        let text = world_to_json(&w);
        assert_eq!(parse_world(&text).unwrap(), w);
        assert_eq!(world_to_json(&parse_world(&text).unwrap()), text);
        assert!(text.contains("\"heading_deg\": 90.0"));
    }

    #[test]
    fn errors_carry_location_and_field() {
        match parse_world("{\n  \"units\": \"meters\",\n  oops }") {
            Err(WorldError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let unknown = ROOM.replace("\"intrinsic\"", "\"colour\":1,\"intrinsic\"");
        assert_eq!(
            parse_world(&unknown),
            Err(WorldError::Schema {
                field: "colour".into(),
                constraint: "unknown field".into()
            })
        );
        let feet = ROOM.replace("meters", "feet");
        assert!(matches!(parse_world(&feet), Err(WorldError::Schema { field, .. }) if field == "units"));
        let bad_radius = ROOM.replace(
            "\"extrinsic\":[]",
            "\"extrinsic\":[{\"circle\":{\"center\":[5,5],\"radius\":-1}}]",
        );
        assert!(matches!(parse_world(&bad_radius),
            Err(WorldError::Schema { field, .. }) if field == "extrinsic[0].circle.radius"));
    }

    #[test]
    fn start_inside_object_is_rejected() {
        let text = ROOM.replace(
            "\"extrinsic\":[]",
            "\"extrinsic\":[{\"polygon\":[[4.5,4.5],[5.5,4.5],[5.5,5.5],[4.5,5.5]]}]",
        );
        assert!(parse_world(&text).is_ok());
        match load_world(&text) {
            Err(WorldError::Schema { field, constraint }) => {
                assert_eq!(field, "start");
                assert!(constraint.contains("inside extrinsic object 0"), "{constraint}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn odd_headings_round_trip() {
        for deg in [0.1, -179.99, 180.0, 33.333333, 1e-7] {
            let mut w = load_world(ROOM).unwrap();
            w.start = Pose::new(w.start.position, f64::to_radians(deg));
            let again = parse_world(&world_to_json(&w)).unwrap();
            assert_eq!(again.start.heading.to_bits(), w.start.heading.to_bits());
        }
    }
}
