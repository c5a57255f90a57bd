use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use pathmap::config::RunConfig;
use pathmap::pipeline::{plan_world, run_pipeline, shape_of_region, PipelineError};
use pathmap::planner::build_path_plan;
use pathmap::render::{map_json, map_svg, plan_json, plan_svg, replay_frames};
use pathmap::robot::{parse_trace_log, NoiseConfig};
use pathmap::world::{parse_shape, parse_world, WorldError};

#[derive(Parser)]
#[command(name = "pathmap", version, about = "Map an indoor area with binary proximity sensors")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Trace the boundary, plan paths and map objects; writes map.json,
    /// map.svg and trace.log.
    Map {
        /// World file, or with --batch a directory of world files.
        world: PathBuf,
        /// Map every *.json world in the directory concurrently, each into
        /// its own subdirectory of --out-dir.
        #[arg(long)]
        batch: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Plan paths over a shape file or a traced world; writes plan.json and
    /// plan.svg.
    Plan {
        /// Shape document ({"polygon": ...} or {"circle": ...}) or world file.
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Render the dead-reckoned path of a trace log as numbered SVG frames.
    Replay {
        log: PathBuf,
        /// Motion records between frames.
        #[arg(long, default_value_t = 500)]
        every: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Spacing of plan lines (meters).
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Sensor trigger distance (meters).
    #[arg(long, default_value_t = pathmap::world::DEFAULT_SENSOR_DISTANCE)]
    sensor_distance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `off`, `typical`, or `SIGMA_DIST,SIGMA_HEAD,SIGMA_GYRO`.
    #[arg(long, default_value = "off", value_parser = parse_noise)]
    noise: NoiseConfig,
    #[arg(long, default_value_t = 20_000_000)]
    max_ticks: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            alpha: self.alpha,
            sensor_distance: self.sensor_distance,
            seed: self.seed,
            noise: self.noise,
            max_ticks: self.max_ticks,
            ..RunConfig::default()
        }
    }
}

fn parse_noise(s: &str) -> Result<NoiseConfig, String> {
    match s {
        "off" => Ok(NoiseConfig::off()),
        "typical" => Ok(NoiseConfig::typical()),
        _ => {
            let v: Vec<f64> = s
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
                .collect::<Result<_, _>>()?;
            match v[..] {
                [sigma_dist, sigma_head, sigma_gyro] => Ok(NoiseConfig {
                    sigma_dist,
                    sigma_head,
                    sigma_gyro,
                }),
                _ => Err("expected off, typical or three comma-separated sigmas".into()),
            }
        }
    }
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn other(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = if e.is_validation() {
            2
        } else if e.is_timeout() {
            3
        } else {
            1
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<WorldError> for Failure {
    fn from(e: WorldError) -> Self {
        Self {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::other(format!("{}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::other(format!("{}: {e}", dir.display())))?;
    let p = dir.join(name);
    fs::write(&p, text).map_err(|e| Failure::other(format!("{}: {e}", p.display())))
}

/// Runs one world and writes its outputs; returns the stats line.
fn map_one(world: &Path, cfg: &RunConfig, out: &Path) -> Result<String, Failure> {
    let w = parse_world(&read(world)?)?;
    let run = run_pipeline(&w, cfg)?;
    write(out, "map.json", &map_json(&run.map, cfg))?;
    write(out, "map.svg", &map_svg(&run.map))?;
    write(out, "trace.log", &run.log.to_string())?;
    for warning in &run.map.warnings {
        eprintln!("warning: {warning}");
    }
    let s = run.map.stats;
    Ok(format!(
        "paths={} objects={} ticks={} distance={:.3}",
        s.paths_traversed,
        run.map.objects.len(),
        s.ticks,
        s.distance
    ))
}

fn cmd_map(world: &Path, batch: bool, run: &RunArgs) -> Result<(), Failure> {
    let cfg = run.config();
    if !batch {
        println!("{}", map_one(world, &cfg, &run.out_dir)?);
        return Ok(());
    }
    let mut files: Vec<PathBuf> = fs::read_dir(world)
        .map_err(|e| Failure::other(format!("{}: {e}", world.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let results: Vec<(String, Result<String, Failure>)> = files
        .par_iter()
        .map(|f| {
            let name = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let r = map_one(f, &cfg, &run.out_dir.join(&name));
            (name, r)
        })
        .collect();
    let mut worst = 0u8;
    for (name, r) in results {
        match r {
            Ok(line) => println!("{name}: {line}"),
            Err(f) => {
                eprintln!("{name}: error: {}", f.message);
                worst = worst.max(f.code);
            }
        }
    }
    if worst == 0 {
        Ok(())
    } else {
        Err(Failure {
            code: worst,
            message: "some worlds failed".into(),
        })
    }
}

fn cmd_plan(input: &Path, run: &RunArgs) -> Result<(), Failure> {
    let text = read(input)?;
    let cfg = run.config();
    let is_world = serde_json::from_str::<serde_json::Value>(&text)
        .map(|v| v.get("outer").is_some())
        .unwrap_or(false);
    let (shape, plan) = if is_world {
        plan_world(&parse_world(&text)?, &cfg)?
    } else {
        let shape = shape_of_region(&parse_shape(&text)?);
        let plan = build_path_plan(&shape, cfg.alpha).map_err(|e| Failure::from(PipelineError::from(e)))?;
        (shape, plan)
    };
    for w in &plan.warnings {
        eprintln!("warning: {w}");
    }
    write(&run.out_dir, "plan.json", &plan_json(&shape, &plan))?;
    write(&run.out_dir, "plan.svg", &plan_svg(&shape, &plan))?;
    println!("shape={} lines={}", shape.name(), plan.len());
    Ok(())
}

fn cmd_replay(log: &Path, every: usize, out_dir: &Path) -> Result<(), Failure> {
    let log = parse_trace_log(&read(log)?).map_err(|e| Failure::other(e.to_string()))?;
    let frames = replay_frames(&log, every);
    for (i, f) in frames.iter().enumerate() {
        write(out_dir, &format!("frame_{i:05}.svg"), f)?;
    }
    println!("frames={}", frames.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Cmd::Map { world, batch, run } => cmd_map(world, *batch, run),
        Cmd::Plan { input, run } => cmd_plan(input, run),
        Cmd::Replay { log, every, out_dir } => cmd_replay(log, *every, out_dir),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
