//! Exhaustive oracles: colorability, exact minimum box counts, obstruction
//! sets, and a resampling colorer.

mod cells;
mod columns;
mod minimum;
mod obstruction;
mod resample;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cert::{Certificate, Method};
use crate::coloring::Coloring;
use crate::grid::Grid;

pub use minimum::{min_mono_boxes_exact, MinOutcome};
pub use obstruction::{obstruction_set, ObstructionEntry, ObstructionSet};
pub use resample::{moser_tardos_color, ResampleOutcome};

pub(crate) use columns::{run_shards, ColumnSpace};

/// Limits for one search. Running out yields an unknown verdict, never a wrong one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_seconds: u64,
    pub parallel_shards: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 20_000_000_000,
            max_seconds: 600,
            parallel_shards: 1,
        }
    }
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_seconds: u64) -> Self {
        SearchBudget {
            max_nodes: max_nodes.max(1),
            max_seconds: max_seconds.max(1),
            parallel_shards: 1,
        }
    }

    pub fn with_shards(mut self, shards: usize) -> Self {
        self.parallel_shards = shards.max(1);
        self
    }

    pub(crate) fn meter(&self) -> Meter {
        Meter::new(self)
    }
}

/// Shared node counter and deadline for a search and all its shards.
#[derive(Debug)]
pub(crate) struct Meter {
    nodes: AtomicU64,
    max_nodes: u64,
    deadline: Instant,
    stopped: AtomicBool,
}

impl Meter {
    fn new(budget: &SearchBudget) -> Self {
        Meter {
            nodes: AtomicU64::new(0),
            max_nodes: budget.max_nodes,
            deadline: Instant::now() + Duration::from_secs(budget.max_seconds),
            stopped: AtomicBool::new(false),
        }
    }

    /// Counts one node; false once the budget is spent.
    #[inline]
    pub(crate) fn tick(&self) -> bool {
        if self.stopped.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed);
        if n >= self.max_nodes || (n & 0x3ff == 0 && Instant::now() >= self.deadline) {
            self.stopped.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

/// Result of a colorability search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FindOutcome {
    /// A verified box-free coloring.
    Colorable(Coloring),
    /// The search space was exhausted: every coloring has a monochromatic box.
    Guaranteed,
    Unknown,
}

/// Searches for a box-free `c`-coloring of `grid`.
///
/// Grids with a side of length at most `c` are colored by that coordinate.
/// Two-dimensional grids search sets of pairwise compatible column types;
/// everything else backtracks over cells in row-major order.
pub fn find_coloring(c: usize, grid: &Grid, budget: &SearchBudget) -> FindOutcome {
    if c == 0 {
        return FindOutcome::Guaranteed;
    }
    let shape = match grid.shape() {
        Ok(shape) => shape,
        Err(_) => return FindOutcome::Unknown,
    };
    if let Some(col) = trivial_coloring(c, grid, &shape) {
        return FindOutcome::Colorable(col);
    }
    if c == 1 || shape.len() == 1 {
        return FindOutcome::Guaranteed;
    }
    let meter = budget.meter();
    let outcome = if shape.len() == 2 {
        match ColumnSpace::for_grid(c, &shape) {
            Some(space) => space.find(grid, &meter, budget.parallel_shards),
            None => cells::find(c, grid, &shape, &meter),
        }
    } else {
        cells::find(c, grid, &shape, &meter)
    };
    if let FindOutcome::Colorable(col) = &outcome {
        assert!(col.is_box_free(), "search returned a coloring with a monochromatic box");
    }
    outcome
}

/// Box-free colorings that need no search: some side below 2 (no boxes), or
/// some side of length at most `c` (color by that coordinate).
pub(crate) fn trivial_coloring(c: usize, grid: &Grid, shape: &[usize]) -> Option<Coloring> {
    if shape.iter().any(|&a| a < 2) {
        return Coloring::new(grid.clone(), c, vec![0; shape.iter().product()]).ok();
    }
    let axis = (0..shape.len()).find(|&i| shape[i] <= c)?;
    Coloring::from_fn(grid.clone(), c, |p| p[axis] as u32).ok()
}

/// Wraps [`find_coloring`] in a certificate.
pub fn is_guaranteed_exact(c: usize, grid: &Grid, budget: &SearchBudget) -> Certificate {
    match find_coloring(c, grid, budget) {
        FindOutcome::Colorable(col) => {
            let shape = col.shape().to_vec();
            let method = if shape.iter().any(|&a| a <= c) {
                Method::Coordinate
            } else {
                Method::Exhaustive
            };
            Certificate::colorable(method, col)
        }
        FindOutcome::Guaranteed => {
            let method = if grid.dim() == 1 { Method::Pigeonhole } else { Method::Exhaustive };
            Certificate::guaranteed(method, grid.clone(), c as u64)
        }
        FindOutcome::Unknown => Certificate::unknown(Method::Exhaustive, grid.clone(), c as u64),
    }
}
