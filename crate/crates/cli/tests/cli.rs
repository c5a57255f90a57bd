//! Runs the `pathmap` binary on the fixture files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pathmap_oracles as oracle;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn pathmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathmap")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn map(world: &str, out: &Path, extra: &[&str]) -> Output {
    let w = fixture(world);
    let mut args = vec!["map", w.to_str().unwrap(), "--out-dir", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    pathmap(&args)
}

fn stat(line: &str, key: &str) -> f64 {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("no {key} in {line:?}"))
}

#[test]
fn empty_room_maps_without_objects() {
    let dir = tempfile::tempdir().unwrap();
    let o = map("worlds/square_room.json", dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o);
    assert!(line.starts_with("paths="), "{line}");
    assert_eq!(stat(&line, "objects"), 0.0);
    assert!(stat(&line, "paths") > 0.0);
    for f in ["map.json", "map.svg", "trace.log"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let svg = fs::read_to_string(dir.path().join("map.svg")).unwrap();
    assert_eq!(svg.matches("id=\"boundary\"").count(), 1);
    assert_eq!(svg.matches("id=\"plan\"").count(), 1);
    assert_eq!(svg.matches("class=\"object\"").count(), 0);
}

#[test]
fn furnished_room_has_notch_and_one_object() {
    let dir = tempfile::tempdir().unwrap();
    let o = map("worlds/furnished_room.json", dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stat(&stdout(&o), "objects"), 1.0);
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("map.json")).unwrap()).unwrap();
    // The intrinsic block is part of the boundary: some boundary vertex
    // lies below the block's lower face, between its sides.
    assert_eq!(m["shape"], "concave");
    let notch = m["boundary"].as_array().unwrap().iter().any(|v| {
        let (x, y) = (v[0].as_f64().unwrap(), v[1].as_f64().unwrap());
        (2.5..=5.5).contains(&x) && (4.6..=5.0).contains(&y)
    });
    assert!(notch, "{}", m["boundary"]);
    let svg = fs::read_to_string(dir.path().join("map.svg")).unwrap();
    assert_eq!(svg.matches("class=\"object\"").count(), 1);
}

#[test]
fn clearance_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = map("worlds/too_close.json", dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("clearance"), "{}", stderr(&o));
    assert!(!dir.path().join("map.json").exists());
}

#[test]
fn tick_budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = map("worlds/square_room.json", dir.path(), &["--max-ticks", "1000"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn bad_flag_value_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = map("worlds/square_room.json", dir.path(), &["--alpha=-1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let o = map("worlds/square_room.json", dir.path(), &["--noise", "1,2"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn same_seed_gives_identical_map_json() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["--seed", "7", "--noise", "typical", "--alpha", "1"];
    assert_eq!(map("worlds/disk_object.json", a.path(), &args).status.code(), Some(0));
    assert_eq!(map("worlds/disk_object.json", b.path(), &args).status.code(), Some(0));
    let ja = fs::read(a.path().join("map.json")).unwrap();
    let jb = fs::read(b.path().join("map.json")).unwrap();
    assert_eq!(ja, jb);
}

#[test]
fn batch_maps_each_world() {
    let worlds = tempfile::tempdir().unwrap();
    for w in ["square_room", "disk_object"] {
        fs::copy(fixture(&format!("worlds/{w}.json")), worlds.path().join(format!("{w}.json"))).unwrap();
    }
    let out = tempfile::tempdir().unwrap();
    let o = pathmap(&[
        "map",
        worlds.path().to_str().unwrap(),
        "--batch",
        "--alpha",
        "1",
        "--out-dir",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("disk_object: ") && lines[1].starts_with("square_room: "));
    assert_eq!(stat(lines[0], "objects"), 1.0);
    assert!(out.path().join("square_room/map.json").exists());
}

fn plan(shape: &str, alpha: &str, out: &Path) -> (Output, serde_json::Value) {
    let s = fixture(shape);
    let o = pathmap(&["plan", s.to_str().unwrap(), "--alpha", alpha, "--out-dir", out.to_str().unwrap()]);
    let json = fs::read_to_string(out.join("plan.json")).map(|t| serde_json::from_str(&t).unwrap());
    (o, json.unwrap_or(serde_json::Value::Null))
}

#[test]
fn unit_square_plan_has_ten_lines() {
    let dir = tempfile::tempdir().unwrap();
    let (o, j) = plan("shapes/unit_square.json", "0.5", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(j["lines"].as_array().unwrap().len(), 10);
    let svg = fs::read_to_string(dir.path().join("plan.svg")).unwrap();
    assert_eq!(svg.matches("<line ").count(), 10);
}

#[test]
fn l_shape_plan_matches_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let (o, j) = plan("shapes/l_shape.json", "0.5", dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let l = [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]];
    let expected = oracle::enumerate_fan_lines(&l, 0.5).len();
    assert_eq!(j["lines"].as_array().unwrap().len(), expected);
    let svg = fs::read_to_string(dir.path().join("plan.svg")).unwrap();
    assert_eq!(svg.matches("<line ").count(), expected);
}

#[test]
fn circle_plan_quarter_turn_has_two_diameters() {
    let dir = tempfile::tempdir().unwrap();
    let (o, j) = plan("shapes/unit_circle.json", &std::f64::consts::FRAC_PI_2.to_string(), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(j["shape"], "circular");
    assert_eq!(j["lines"].as_array().unwrap().len(), 2);
}

#[test]
fn replay_renders_frames_of_a_run() {
    let run = tempfile::tempdir().unwrap();
    assert_eq!(map("worlds/square_room.json", run.path(), &["--alpha", "2"]).status.code(), Some(0));
    let frames = tempfile::tempdir().unwrap();
    let log = run.path().join("trace.log");
    let o = pathmap(&[
        "replay",
        log.to_str().unwrap(),
        "--every",
        "20000",
        "--out-dir",
        frames.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let n = stat(&stdout(&o), "frames") as usize;
    assert!(n > 1);
    assert!(frames.path().join(format!("frame_{:05}.svg", n - 1)).exists());
}

#[test]
fn replay_of_header_only_log_has_no_frames() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("empty.log");
    fs::write(&log, "# start 0 0 0\n").unwrap();
    let o = pathmap(&["replay", log.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "frames=0");
}

#[test]
fn truncated_log_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("cut.log");
    fs::write(&log, "# start 0 0 0\n1,F0.02,0.02,0,0\n2,F0.02,0.0").unwrap();
    let o = pathmap(&["replay", log.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}
