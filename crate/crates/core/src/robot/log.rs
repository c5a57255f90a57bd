//! Append-only text log of a run.
//!
//! ```text
//! # start <x> <y> <heading>
//! <tick>,<cmd>,<distance>,<heading change>,<sensor mask>
//! @<tick> <event> <detail>
//! ```
//!
//! `cmd` is `F<step>`, `T<angle>` or `S`. Floats are written in shortest
//! round-trip form, so replay reproduces the estimate bit for bit.

use std::fmt::{self, Write as _};

use super::sim::apply_delta;
use super::{Command, OdometryDelta};
use crate::geometry::Point2D;
use crate::world::Pose;

/// A named phase event such as `contact` or `loop-closed`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEvent {
    pub tick: u64,
    pub name: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Record {
    Motion {
        cmd: Command,
        delta: OdometryDelta,
        mask: u8,
    },
    Event(LogEvent),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceLog {
    start: Pose,
    records: Vec<Record>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("trace log line {line}: {message}")]
pub struct LogParseError {
    pub line: usize,
    pub message: String,
}

impl TraceLog {
    pub fn new(start: Pose) -> Self {
        Self {
            start,
            records: Vec::new(),
        }
    }

    pub fn start(&self) -> Pose {
        self.start
    }

    pub(crate) fn push_motion(&mut self, tick: u64, cmd: Command, delta: OdometryDelta, mask: u8) {
        let delta = OdometryDelta { tick, ..delta };
        self.records.push(Record::Motion { cmd, delta, mask });
    }

    pub(crate) fn push_event(&mut self, tick: u64, name: &str, detail: &str) {
        self.records.push(Record::Event(LogEvent {
            tick,
            name: name.to_owned(),
            detail: detail.to_owned(),
        }));
    }

    pub fn deltas(&self) -> impl Iterator<Item = &OdometryDelta> {
        self.records.iter().filter_map(|r| match r {
            Record::Motion { delta, .. } => Some(delta),
            Record::Event(_) => None,
        })
    }

    pub fn commands(&self) -> impl Iterator<Item = Command> + '_ {
        self.records.iter().filter_map(|r| match r {
            Record::Motion { cmd, .. } => Some(*cmd),
            Record::Event(_) => None,
        })
    }

    pub fn events(&self) -> impl Iterator<Item = &LogEvent> {
        self.records.iter().filter_map(|r| match r {
            Record::Event(e) => Some(e),
            Record::Motion { .. } => None,
        })
    }

    /// Number of motion records.
    pub fn ticks(&self) -> usize {
        self.deltas().count()
    }
}

impl fmt::Display for TraceLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.start;
        writeln!(f, "# start {} {} {}", s.position.x, s.position.y, s.heading)?;
        let mut line = String::new();
        for r in &self.records {
            line.clear();
            match r {
                Record::Motion { cmd, delta, mask } => write!(
                    line,
                    "{},{},{},{},{}",
                    delta.tick, cmd, delta.distance, delta.heading_change, mask
                )?,
                Record::Event(e) => write!(line, "@{} {} {}", e.tick, e.name, e.detail)?,
            }
            writeln!(f, "{}", line.trim_end())?;
        }
        Ok(())
    }
}

fn float(s: &str, what: &str, line: usize) -> Result<f64, LogParseError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| LogParseError {
            line,
            message: format!("bad {what} {s:?}"),
        })
}

fn command(s: &str, line: usize) -> Result<Command, LogParseError> {
    let s = s.trim();
    match s.split_at_checked(1) {
        Some(("F", v)) => Ok(Command::Forward(float(v, "step", line)?)),
        Some(("T", v)) => Ok(Command::Turn(float(v, "turn", line)?)),
        Some(("S", "")) => Ok(Command::Stop),
        _ => Err(LogParseError {
            line,
            message: format!("unknown command {s:?}"),
        }),
    }
}

/// Parses the text form written by `TraceLog`'s `Display`.
pub fn parse_trace_log(text: &str) -> Result<TraceLog, LogParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let err = |line, message: &str| LogParseError {
        line,
        message: message.to_owned(),
    };
    let (n, header) = lines.next().ok_or_else(|| err(1, "empty log"))?;
    let fields: Vec<&str> = header
        .strip_prefix("# start")
        .ok_or_else(|| err(n, "missing start header"))?
        .split_whitespace()
        .collect();
    let [x, y, h] = fields.as_slice() else {
        return Err(err(n, "start header needs x y heading"));
    };
    let start = Pose {
        position: Point2D::new(float(x, "x", n)?, float(y, "y", n)?),
        heading: float(h, "heading", n)?,
    };
    let mut log = TraceLog::new(start);
    for (n, l) in lines {
        if l.trim().is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix('@') {
            let mut parts = rest.splitn(3, ' ');
            let tick = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err(n, "bad event tick"))?;
            let name = parts.next().filter(|s| !s.is_empty()).ok_or_else(|| err(n, "missing event name"))?;
            log.push_event(tick, name, parts.next().unwrap_or(""));
            continue;
        }
        let f: Vec<&str> = l.split(',').collect();
        let [tick, cmd, dx, dth, mask] = f.as_slice() else {
            return Err(err(n, &format!("expected 5 fields, found {}", f.len())));
        };
        let tick = tick.trim().parse().map_err(|_| err(n, "bad tick"))?;
        let mask = mask.trim().parse().map_err(|_| err(n, "bad sensor mask"))?;
        let delta = OdometryDelta {
            distance: float(dx, "distance", n)?,
            heading_change: float(dth, "heading change", n)?,
            tick,
        };
        log.push_motion(tick, command(cmd, n)?, delta, mask);
    }
    Ok(log)
}

/// Dead-reckoned pose after every motion record.
pub fn replay(log: &TraceLog) -> Vec<Pose> {
    log.deltas()
        .scan(log.start, |p, d| {
            *p = apply_delta(*p, d);
            Some(*p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TraceLog {
        let mut log = TraceLog::new(Pose::new(Point2D::new(1.5, 2.0), 0.1));
        let d = |distance, heading_change| OdometryDelta {
            distance,
            heading_change,
            tick: 0,
        };
        log.push_motion(1, Command::Forward(0.02), d(0.019999, 0.0), 0);
        log.push_event(1, "contact", "x=1.52");
        log.push_motion(2, Command::Turn(-0.0872), d(0.0, -0.08721234), 2);
        log.push_motion(3, Command::Stop, d(0.0, 0.0), 0);
        log
    }

    #[test]
    fn text_round_trip() {
        let log = sample();
        let text = log.to_string();
        assert!(text.starts_with("# start 1.5 2 0.1\n1,F0.02,0.019999,0,0\n@1 contact x=1.52\n"));
        assert_eq!(parse_trace_log(&text).unwrap(), log);
    }

    #[test]
    fn truncated_line_reports_its_number() {
        let text = sample().to_string();
        let cut = &text[..text.rfind(",0").unwrap()];
        let e = parse_trace_log(cut).unwrap_err();
        assert_eq!(e.line, 5);
    }

    #[test]
    fn replay_follows_the_deltas() {
        let poses = replay(&sample());
        assert_eq!(poses.len(), 3);
        assert!((poses[0].position.x - (1.5 + 0.019999 * 0.1f64.cos())).abs() < 1e-15);
        assert!((poses[2].heading - (0.1 - 0.08721234)).abs() < 1e-15);
    }
}
