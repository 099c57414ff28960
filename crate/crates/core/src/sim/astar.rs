//! 8-connected A* on an occupancy grid, used to produce waypoint legs between goals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::grid::OccupancyGrid;
use crate::error::{Error, Result};

pub type Cell = (usize, usize);

// Fixed expansion order keeps equal-cost paths deterministic.
const MOVES: [(i64, i64); 8] = [
    (1, 0),
    (0, 1),
    (-1, 0),
    (0, -1),
    (1, 1),
    (-1, 1),
    (-1, -1),
    (1, -1),
];

#[derive(Debug, Clone, Copy, PartialEq)]
struct Open {
    f: f64,
    order: u64,
    cell: usize,
}

impl Eq for Open {}

impl Ord for Open {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on f, then first-inserted.
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.order.cmp(&self.order))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Free neighbors of `cell` with step costs in cells. Diagonal moves may not cut
/// an occupied corner.
pub fn neighbors(grid: &OccupancyGrid, cell: Cell) -> impl Iterator<Item = (Cell, f64)> + '_ {
    let (c, r) = (cell.0 as i64, cell.1 as i64);
    MOVES.iter().filter_map(move |&(dc, dr)| {
        let (nc, nr) = (c + dc, r + dr);
        if grid.is_occupied(nc, nr) {
            return None;
        }
        if dc != 0 && dr != 0 && (grid.is_occupied(c + dc, r) || grid.is_occupied(c, r + dr)) {
            return None;
        }
        let cost = if dc != 0 && dr != 0 {
            std::f64::consts::SQRT_2
        } else {
            1.0
        };
        Some(((nc as usize, nr as usize), cost))
    })
}

fn octile(a: Cell, b: Cell) -> f64 {
    let dx = a.0.abs_diff(b.0) as f64;
    let dy = a.1.abs_diff(b.1) as f64;
    dx.max(dy) + (std::f64::consts::SQRT_2 - 1.0) * dx.min(dy)
}

/// Shortest cell path and its length in cells, or `None` when unreachable.
pub fn astar_cells(grid: &OccupancyGrid, start: Cell, goal: Cell) -> Option<(Vec<Cell>, f64)> {
    let w = grid.width();
    let idx = |c: Cell| c.1 * w + c.0;
    let occupied = |c: Cell| grid.is_occupied(c.0 as i64, c.1 as i64);
    if occupied(start) || occupied(goal) {
        return None;
    }
    let n = w * grid.height();
    let mut g = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut order = 0u64;
    g[idx(start)] = 0.0;
    heap.push(Open {
        f: octile(start, goal),
        order,
        cell: idx(start),
    });
    while let Some(Open { cell, .. }) = heap.pop() {
        if closed[cell] {
            continue;
        }
        closed[cell] = true;
        let here = (cell % w, cell / w);
        if here == goal {
            let mut path = vec![here];
            let mut k = cell;
            while parent[k] != usize::MAX {
                k = parent[k];
                path.push((k % w, k / w));
            }
            path.reverse();
            return Some((path, g[cell]));
        }
        for (next, step) in neighbors(grid, here) {
            let j = idx(next);
            let cand = g[cell] + step;
            if !closed[j] && cand < g[j] - 1e-12 {
                g[j] = cand;
                parent[j] = cell;
                order += 1;
                heap.push(Open {
                    f: cand + octile(next, goal),
                    order,
                    cell: j,
                });
            }
        }
    }
    None
}

/// World-frame waypoints from `start` to `goal`: every `decimation`-th cell
/// center of the A* path, with the exact start and goal points at the ends.
pub fn plan_waypoints(
    grid: &OccupancyGrid,
    start: [f64; 2],
    goal: [f64; 2],
    decimation: usize,
) -> Result<Vec<[f64; 2]>> {
    let to_cell = |p: [f64; 2]| -> Result<Cell> {
        let (c, r) = grid.cell_of(p[0], p[1]);
        if grid.is_occupied(c, r) {
            return Err(Error::Planning(format!(
                "point ({:.3}, {:.3}) is occupied or outside the map",
                p[0], p[1]
            )));
        }
        Ok((c as usize, r as usize))
    };
    let (s, t) = (to_cell(start)?, to_cell(goal)?);
    let (cells, _) = astar_cells(grid, s, t).ok_or_else(|| {
        Error::Planning(format!(
            "no path from ({:.3}, {:.3}) to ({:.3}, {:.3})",
            start[0], start[1], goal[0], goal[1]
        ))
    })?;
    let step = decimation.max(1);
    let mut out = vec![start];
    for k in (step..cells.len().saturating_sub(1)).step_by(step) {
        out.push(grid.cell_center(cells[k].0, cells[k].1));
    }
    if goal != start {
        out.push(goal);
    }
    Ok(out)
}
