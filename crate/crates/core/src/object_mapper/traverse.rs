use std::collections::VecDeque;

use super::{
    fuse_object_traces, handle_obstacle, order_traversal, Direction, KnownObject, MapResult, MapStats, MappedObject,
    MappingConfig, MappingError, ObstacleAction, ObstacleEvent, Rotation,
};
use crate::boundary_mapper::{rotate_by, BoundaryError, BoundaryPhaseResult, ContourFollower, Side};
use crate::geometry::{
    convex_hull, douglas_peucker_closed, prune_redundant, normalize_angle, point_in_region, simplify_trace, Location, Point2D, Polygon,
};
use crate::planner::{PathPlan, ShapeClass};
use crate::robot::{Command, Host, RobotLink, SensorLabel};

/// Heading error (radians) above which the robot turns back toward its
/// target before the next step.
const AIM_TOL: f64 = 0.2 * std::f64::consts::PI / 180.0;
/// Sample spacing and boundary slack when checking a straight transit.
const TRANSIT_SAMPLE: f64 = 0.05;
const TRANSIT_SLACK: f64 = 0.1;

/// Traverses every plan entry once, plus the reversed second passes over
/// entries on which new objects were met. Objects traced during the
/// boundary search are known from the start and returned with the rest.
pub fn run_mapping<L: RobotLink>(
    host: &mut Host<L>,
    shape: &ShapeClass,
    plan: &PathPlan,
    boundary: &BoundaryPhaseResult,
    cfg: MappingConfig,
) -> Result<MapResult, MappingError> {
    let boundary_poly = simplify_trace(&boundary.boundary, cfg.eps_simplify)?.polygon;
    let mut objects = Vec::new();
    for (k, trace) in boundary.pre_mapped_objects.iter().enumerate() {
        objects.push(MappedObject {
            id: k as u32 + 1,
            outline: simplify_trace(trace, cfg.eps_simplify)?.polygon,
            source_traces: vec![trace.points().to_vec()],
            first_seen: (None, 0),
        });
    }
    let travelled0 = host.travelled();
    let mut engine = Engine {
        d: host.rig().trigger_distance(),
        step: host.limits().step_max,
        host,
        cfg,
        boundary: boundary_poly,
        next_id: objects.len() as u32 + 1,
        objects,
        pending: Vec::new(),
        ignore: None,
        warnings: Vec::new(),
    };

    let mut queue: VecDeque<(usize, Direction)> = order_traversal(plan, engine.host.estimate().position).into();
    let mut traversed = vec![false; plan.len()];
    while let Some((i, dir)) = queue.pop_front() {
        let e = plan.entries[i];
        let (from, to) = match dir {
            Direction::VertexToEdge => (e.start_vertex, e.end_point),
            Direction::EdgeToVertex => (e.end_point, e.start_vertex),
        };
        engine.transit(from)?;
        engine.host.event("path", &format!("L{} {dir:?}", e.line_id));
        engine.drive(from, to, Some(Leg { entry: i, line_id: e.line_id, dir }))?;
        traversed[i] = true;
        engine.close_unmatched(i, dir)?;
        if engine.pending.iter().any(|p| p.entry == i && p.dir == dir) {
            queue.push_front((i, dir.reversed()));
        }
    }
    let leftovers: Vec<Pending> = std::mem::take(&mut engine.pending);
    for p in leftovers {
        engine.close_alone(p)?;
    }

    let stats = MapStats {
        ticks: engine.host.tick(),
        paths_traversed: traversed.iter().filter(|&&t| t).count(),
        distance: engine.host.travelled() - travelled0,
        restarts: boundary.seek_directions_used.len().saturating_sub(1),
    };
    Ok(MapResult {
        boundary: engine.boundary,
        shape: shape.clone(),
        plan: plan.clone(),
        objects: engine.objects,
        stats,
        warnings: engine.warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Leg {
    entry: usize,
    line_id: u32,
    dir: Direction,
}

/// An object met on a first pass, waiting for the reversed second pass.
#[derive(Debug, Clone)]
struct Pending {
    id: u32,
    entry: usize,
    /// Direction of the first pass.
    dir: Direction,
    side: Side,
    half1: Vec<Point2D>,
    first_seen: (Option<u32>, u64),
}

struct Engine<'h, L: RobotLink> {
    host: &'h mut Host<L>,
    cfg: MappingConfig,
    d: f64,
    step: f64,
    boundary: Polygon,
    objects: Vec<MappedObject>,
    pending: Vec<Pending>,
    next_id: u32,
    /// Object just followed; its readings are ignored until all sensors
    /// clear.
    ignore: Option<u32>,
    warnings: Vec<String>,
}

impl<L: RobotLink> Engine<'_, L> {
    fn known(&self) -> Vec<KnownObject> {
        let mut out: Vec<KnownObject> = self
            .objects
            .iter()
            .map(|o| KnownObject {
                id: o.id,
                points: o.outline.vertices().to_vec(),
                closed: true,
            })
            .collect();
        out.extend(self.pending.iter().map(|p| KnownObject {
            id: p.id,
            points: p.half1.clone(),
            closed: false,
        }));
        out
    }

    /// Drives straight from `from` to `to`, reacting to obstacles. On a
    /// plan entry (`leg`) new objects are mapped; in transit they are only
    /// skirted.
    fn drive(&mut self, from: Point2D, to: Point2D, leg: Option<Leg>) -> Result<(), MappingError> {
        let len = from.distance(to);
        if len < 1e-9 {
            return Ok(());
        }
        let u = (to - from) * (1.0 / len);
        let mut prev_mask = 0u8;
        loop {
            let pose = self.host.estimate();
            let rem = pose.position.distance(to);
            if rem <= 1e-9 || (pose.position - from).dot(u) >= len - 1e-9 {
                return Ok(());
            }
            let err = normalize_angle((to - pose.position).angle() - pose.heading);
            if err.abs() > AIM_TOL {
                rotate_by(self.host, err)?;
            }
            let t = self.host.execute(Command::Forward(self.step.min(rem)))?;
            let mask = t.frame.mask();
            if mask == 0 {
                self.ignore = None;
            }
            let mut newly = mask & !prev_mask;
            if t.contact {
                newly |= SensorLabel::Front.bit();
            }
            prev_mask = mask;
            if newly == 0 {
                continue;
            }
            let est = self.host.estimate();
            let event = ObstacleEvent {
                position: est.position,
                heading: est.heading,
                fired: self.host.rig().sensors().iter().copied().filter(|l| newly & l.bit() != 0).collect(),
                range: self.d,
            };
            let action = handle_obstacle(&event, &self.boundary, &self.known(), &self.cfg);
            let side = side_for(&event.fired);
            match action {
                ObstacleAction::ContinuePath => {
                    if t.contact {
                        // Against the boundary short of the target.
                        return Ok(());
                    }
                    continue;
                }
                ObstacleAction::SkirtKnownObject(id) => {
                    if self.ignore == Some(id) && !t.contact {
                        continue;
                    }
                    let second = leg.and_then(|l| {
                        self.pending
                            .iter()
                            .position(|p| p.id == id && p.entry == l.entry && p.dir == l.dir.reversed())
                    });
                    match second {
                        Some(k) => self.second_pass(k, from, u)?,
                        None => {
                            self.host.event("skirt", &id.to_string());
                            self.follow_to_line(side, from, u, None, false)?;
                        }
                    }
                    self.ignore = Some(id);
                }
                ObstacleAction::MapNewObject(rot) => match leg {
                    Some(l) => self.first_pass(l, rot, from, u)?,
                    None => {
                        self.host.event("skirt", "unknown");
                        self.follow_to_line(rot.side(), from, u, None, false)?;
                    }
                },
            }
            prev_mask = self.host.frame().mask();
        }
    }

    fn first_pass(&mut self, leg: Leg, rot: Rotation, from: Point2D, u: Point2D) -> Result<(), MappingError> {
        let id = self.next_id;
        self.next_id += 1;
        let tick = self.host.tick();
        self.host.event("object", &format!("{id} new L{} {rot:?}", leg.line_id));
        let half1 = self.follow_to_line(rot.side(), from, u, Some(id), true)?;
        self.pending.push(Pending {
            id,
            entry: leg.entry,
            dir: leg.dir,
            side: rot.side(),
            half1,
            first_seen: (Some(leg.line_id), tick),
        });
        self.ignore = Some(id);
        Ok(())
    }

    fn second_pass(&mut self, k: usize, from: Point2D, u: Point2D) -> Result<(), MappingError> {
        let p = self.pending.remove(k);
        self.host.event("object", &format!("{} second pass", p.id));
        let half2 = self.follow_to_line(p.side, from, u, Some(p.id), true)?;
        let outline = match fuse_object_traces(&p.half1, &half2, self.cfg.eps_close, self.cfg.eps_simplify) {
            Ok(o) => o,
            Err(e) => {
                self.warnings.push(format!("object {}: {e}; outline is the hull of both passes", p.id));
                let all: Vec<Point2D> = p.half1.iter().chain(&half2).copied().collect();
                convex_hull(&all)?
            }
        };
        self.objects.push(MappedObject {
            id: p.id,
            outline,
            source_traces: vec![p.half1, half2],
            first_seen: p.first_seen,
        });
        Ok(())
    }

    /// Objects whose second pass (the leg just driven) never met them.
    fn close_unmatched(&mut self, entry: usize, dir: Direction) -> Result<(), MappingError> {
        let (alone, rest): (Vec<Pending>, Vec<Pending>) = std::mem::take(&mut self.pending)
            .into_iter()
            .partition(|p| p.entry == entry && p.dir == dir.reversed());
        self.pending = rest;
        for p in alone {
            self.close_alone(p)?;
        }
        Ok(())
    }

    /// Closes a single half-loop: as is when it went all round, else with
    /// its chord, or as its hull when the chord would cross it.
    fn close_alone(&mut self, p: Pending) -> Result<(), MappingError> {
        if let Ok(outline) = fuse_object_traces(&p.half1, &[], self.cfg.eps_close, self.cfg.eps_simplify) {
            // The first pass already went all round.
            self.objects.push(MappedObject {
                id: p.id,
                outline,
                source_traces: vec![p.half1],
                first_seen: p.first_seen,
            });
            return Ok(());
        }
        self.warnings
            .push(format!("object {}: second pass never met it; outline closed from one pass", p.id));
        let mut kept = douglas_peucker_closed(&p.half1, self.cfg.eps_simplify);
        prune_redundant(&p.half1, &mut kept, self.cfg.eps_simplify);
        let outline = match Polygon::new(kept.into_iter().map(|i| p.half1[i]).collect()) {
            Ok(o) => o,
            Err(_) => convex_hull(&p.half1)?,
        };
        self.objects.push(MappedObject {
            id: p.id,
            outline,
            source_traces: vec![p.half1],
            first_seen: p.first_seen,
        });
        Ok(())
    }

    /// Follows the obstacle in contact on `side` until the robot, having
    /// left the line through `from` along `u`, is back within `eps_line`
    /// of it (or across it) farther along than where it started. Returns
    /// the positions visited when `record`.
    fn follow_to_line(
        &mut self,
        side: Side,
        from: Point2D,
        u: Point2D,
        id: Option<u32>,
        record: bool,
    ) -> Result<Vec<Point2D>, MappingError> {
        let start = self.host.estimate().position;
        let s_hit = (start - from).dot(u);
        let eps_line = self.cfg.eps_line;
        let max_ticks = self.cfg.max_object_ticks;
        let t0 = self.host.tick();
        let mut pts = if record { vec![start] } else { Vec::new() };
        let mut departed: Option<f64> = None;
        let mut lost = false;
        let mut follower = ContourFollower::for_host(side, self.host);
        let res = follower.run(self.host, |h| {
            let p = h.estimate().position;
            if record {
                pts.push(p);
            }
            if h.tick() - t0 > max_ticks {
                lost = true;
                return true;
            }
            let rel = p - from;
            let sd = u.cross(rel);
            match departed {
                None => {
                    if sd.abs() > 2.0 * eps_line {
                        departed = Some(sd.signum());
                    }
                    false
                }
                Some(sign) => (sd.abs() <= eps_line || sd.signum() != sign) && rel.dot(u) > s_hit,
            }
        });
        match res {
            Ok(()) => {}
            // Nothing left in range to follow.
            Err(BoundaryError::NoContact) => return Ok(pts),
            Err(e) => return Err(e.into()),
        }
        if lost {
            return Err(MappingError::LostObject {
                id: id.unwrap_or(0),
                ticks: self.host.tick() - t0,
            });
        }
        pts.dedup_by(|a, b| a.distance(*b) < 1e-12);
        Ok(pts)
    }

    /// Moves to `target`, straight when the segment stays inside the
    /// boundary, otherwise along the boundary ring the shorter way.
    fn transit(&mut self, target: Point2D) -> Result<(), MappingError> {
        let here = self.host.estimate().position;
        if here.distance(target) <= 1e-6 {
            return Ok(());
        }
        for w in self.route(here, target) {
            let from = self.host.estimate().position;
            self.drive(from, w, None)?;
        }
        Ok(())
    }

    fn route(&self, from: Point2D, to: Point2D) -> Vec<Point2D> {
        if self.straight_ok(from, to) {
            return vec![to];
        }
        let ring = self.boundary.vertices();
        let n = ring.len();
        let nearest = |p: Point2D| {
            (0..n)
                .min_by(|&a, &b| ring[a].distance(p).total_cmp(&ring[b].distance(p)))
                .unwrap_or(0)
        };
        let (ia, ib) = (nearest(from), nearest(to));
        let walk = |step: usize| {
            let mut out = vec![ring[ia]];
            let mut i = ia;
            while i != ib {
                i = (i + step) % n;
                out.push(ring[i]);
            }
            out
        };
        let length = |w: &[Point2D]| {
            from.distance(w[0]) + w.windows(2).map(|s| s[0].distance(s[1])).sum::<f64>() + w[w.len() - 1].distance(to)
        };
        let (fwd, back) = (walk(1), walk(n - 1));
        let mut best = if length(&fwd) <= length(&back) { fwd } else { back };
        best.push(to);
        best
    }

    fn straight_ok(&self, a: Point2D, b: Point2D) -> bool {
        let k = (a.distance(b) / TRANSIT_SAMPLE).ceil().max(1.0) as usize;
        (0..=k).all(|i| {
            let p = a.lerp(b, i as f64 / k as f64);
            point_in_region(p, &self.boundary) != Location::Outside
                || self.boundary.distance_to_boundary(p) <= TRANSIT_SLACK
        })
    }
}

/// Side to keep a skirted object on: the right when the front or right
/// sensor saw it.
fn side_for(fired: &[SensorLabel]) -> Side {
    let right_or_front = fired
        .iter()
        .any(|l| matches!(l, SensorLabel::Front | SensorLabel::Right | SensorLabel::DiagFrontRight));
    if right_or_front {
        Rotation::Ccw.side()
    } else {
        Rotation::Cw.side()
    }
}
