use crate::geometry::Point2D;
use crate::planner::PathPlan;

/// Travel direction along a plan entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    VertexToEdge,
    EdgeToVertex,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::VertexToEdge => Direction::EdgeToVertex,
            Direction::EdgeToVertex => Direction::VertexToEdge,
        }
    }
}

/// Boustrophedon order over the plan, opened at the start vertex nearest
/// `robot_pos`. From a vertex the remaining entry
/// with the smallest start angle runs vertex to edge; from the edge the
/// entry of the same vertex ending nearest runs back. When a vertex has no
/// entries left, the nearest end of any remaining entry is next: a start
/// vertex opens its group, an edge point runs that entry back to its
/// vertex. Every entry appears once.
pub fn order_traversal(plan: &PathPlan, robot_pos: Point2D) -> Vec<(usize, Direction)> {
    let n = plan.len();
    let mut group_of = vec![0usize; n];
    for (g, (_, list)) in plan.per_vertex_index.iter().enumerate() {
        for &i in list {
            group_of[i] = g;
        }
    }
    let mut done = vec![false; n];
    let mut out = Vec::with_capacity(n);
    let mut pos = robot_pos;
    let mut current: Option<usize> = None;
    let mut at_vertex = false;
    while out.len() < n {
        let remaining: Vec<usize> = current
            .map(|g| plan.per_vertex_index[g].1.iter().copied().filter(|&i| !done[i]).collect())
            .unwrap_or_default();
        let pick = if remaining.is_empty() {
            None
        } else if at_vertex {
            remaining
                .iter()
                .copied()
                .min_by(|&a, &b| plan.entries[a].start_angle.total_cmp(&plan.entries[b].start_angle))
                .map(|i| (i, Direction::VertexToEdge))
        } else {
            remaining
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    pos.distance(plan.entries[a].end_point)
                        .total_cmp(&pos.distance(plan.entries[b].end_point))
                })
                .map(|i| (i, Direction::EdgeToVertex))
        };
        let (i, dir) = match pick {
            Some(p) => p,
            None => {
                let (i, from_start) = if out.is_empty() {
                    (nearest_start(plan, pos), true)
                } else {
                    nearest_end(plan, &done, pos)
                };
                if from_start {
                    // Open the group at its vertex and take its first entry.
                    current = Some(group_of[i]);
                    at_vertex = true;
                    pos = plan.entries[i].start_vertex;
                    continue;
                }
                (i, Direction::EdgeToVertex)
            }
        };
        done[i] = true;
        out.push((i, dir));
        let e = &plan.entries[i];
        current = Some(group_of[i]);
        match dir {
            Direction::VertexToEdge => {
                pos = e.end_point;
                at_vertex = false;
            }
            Direction::EdgeToVertex => {
                pos = e.start_vertex;
                at_vertex = true;
            }
        }
    }
    out
}

/// Entry whose start vertex is nearest `pos`.
fn nearest_start(plan: &PathPlan, pos: Point2D) -> usize {
    (0..plan.len())
        .min_by(|&a, &b| {
            pos.distance(plan.entries[a].start_vertex)
                .total_cmp(&pos.distance(plan.entries[b].start_vertex))
        })
        .unwrap_or(0)
}

/// Remaining entry with an end nearest `pos`, and whether that end is its
/// start vertex. Start vertices win ties.
fn nearest_end(plan: &PathPlan, done: &[bool], pos: Point2D) -> (usize, bool) {
    let mut best = (usize::MAX, true, f64::INFINITY);
    for (i, e) in plan.entries.iter().enumerate() {
        if done[i] {
            continue;
        }
        let ds = pos.distance(e.start_vertex);
        let de = pos.distance(e.end_point);
        if ds < best.2 {
            best = (i, true, ds);
        }
        if de < best.2 {
            best = (i, false, de);
        }
    }
    (best.0, best.1)
}
