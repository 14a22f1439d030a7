//! Cell-by-cell backtracking for grids of any dimension.
//!
//! Cells are assigned in row-major order. A box is decided exactly when its
//! largest corner is assigned, so each cell only checks the boxes it closes.
//! A cell may use at most one color beyond those already used, which removes
//! color permutations from the search.

use crate::coloring::Coloring;
use crate::grid::{unflatten, Grid};

use super::{FindOutcome, Meter};

/// Largest number of stored partner indices (boxes times `2^d - 1`).
const MAX_PARTNERS: usize = 1 << 26;

/// For every cell, the other corners of the boxes it closes.
pub(crate) struct ClosingBoxes {
    group: usize,
    start: Vec<usize>,
    partners: Vec<u32>,
}

impl ClosingBoxes {
    pub(crate) fn new(shape: &[usize]) -> Option<Self> {
        let d = shape.len();
        let volume: usize = shape.iter().product();
        let group = (1usize << d) - 1;
        let strides = crate::grid::strides(shape);
        let mut start = Vec::with_capacity(volume + 1);
        let mut partners = Vec::new();
        for cell in 0..volume {
            start.push(partners.len());
            let x = unflatten(shape, cell);
            if x.iter().any(|&xi| xi == 0) {
                continue;
            }
            let mut y = vec![0usize; d];
            'boxes: loop {
                for mask in 0..group {
                    let idx: usize = (0..d)
                        .map(|i| strides[i] * if mask >> i & 1 == 1 { x[i] } else { y[i] })
                        .sum();
                    partners.push(idx as u32);
                }
                if partners.len() > MAX_PARTNERS {
                    return None;
                }
                let mut axis = d;
                loop {
                    if axis == 0 {
                        break 'boxes;
                    }
                    axis -= 1;
                    y[axis] += 1;
                    if y[axis] < x[axis] {
                        break;
                    }
                    y[axis] = 0;
                }
            }
        }
        start.push(partners.len());
        Some(ClosingBoxes {
            group,
            start,
            partners,
        })
    }

    /// Number of boxes closed at `cell` that are monochromatic in color `k`.
    #[inline]
    fn closed(&self, cell: usize, k: u32, colors: &[u32], stop_at: u64) -> u64 {
        let mut n = 0;
        for grp in self.partners[self.start[cell]..self.start[cell + 1]].chunks_exact(self.group) {
            if grp.iter().all(|&p| colors[p as usize] == k) {
                n += 1;
                if n >= stop_at {
                    break;
                }
            }
        }
        n
    }
}

pub(crate) fn find(c: usize, grid: &Grid, shape: &[usize], meter: &Meter) -> FindOutcome {
    let Some(closing) = ClosingBoxes::new(shape) else {
        return FindOutcome::Unknown;
    };
    let volume = closing.start.len() - 1;
    let mut colors = vec![u32::MAX; volume];
    let mut next_try = vec![0u32; volume + 1];
    let mut max_before = vec![0u32; volume + 1];
    let mut i = 0usize;
    loop {
        if i == volume {
            let col = Coloring::new(grid.clone(), c, colors).expect("complete assignment");
            return FindOutcome::Colorable(col);
        }
        if !meter.tick() {
            return FindOutcome::Unknown;
        }
        let limit = (c as u32 - 1).min(if i == 0 { 0 } else { max_before[i] + 1 });
        let mut placed = false;
        let mut k = next_try[i];
        while k <= limit {
            if closing.closed(i, k, &colors, 1) == 0 {
                colors[i] = k;
                next_try[i] = k + 1;
                max_before[i + 1] = if i == 0 { k } else { max_before[i].max(k) };
                next_try[i + 1] = 0;
                placed = true;
                break;
            }
            k += 1;
        }
        if placed {
            i += 1;
            continue;
        }
        colors[i] = u32::MAX;
        if i == 0 {
            return FindOutcome::Guaranteed;
        }
        i -= 1;
    }
}

/// Minimum number of monochromatic boxes, by branch and bound on the running
/// count. Returns the best count found, a coloring attaining it, and whether
/// the search completed.
pub(crate) fn minimize(c: usize, grid: &Grid, shape: &[usize], meter: &Meter) -> Option<(u64, Coloring, bool)> {
    let closing = ClosingBoxes::new(shape)?;
    let volume = closing.start.len() - 1;

    // Greedy start: each cell takes the color closing the fewest monochromatic boxes.
    let mut colors = vec![u32::MAX; volume];
    let mut best = 0u64;
    for i in 0..volume {
        let (k, n) = (0..c as u32)
            .map(|k| (k, closing.closed(i, k, &colors, u64::MAX)))
            .min_by_key(|&(_, n)| n)
            .unwrap();
        colors[i] = k;
        best += n;
    }
    let mut best_cells = colors.clone();

    let mut colors = vec![u32::MAX; volume];
    let mut partial = vec![0u64; volume + 1];
    let mut next_try = vec![0u32; volume + 1];
    let mut max_before = vec![0u32; volume + 1];
    let mut complete = true;
    let mut i = 0usize;
    'search: loop {
        if i == volume {
            if partial[volume] < best {
                best = partial[volume];
                best_cells = colors.clone();
            }
            if best == 0 {
                break;
            }
            i -= 1;
            continue;
        }
        if !meter.tick() {
            complete = false;
            break;
        }
        let limit = (c as u32 - 1).min(if i == 0 { 0 } else { max_before[i] + 1 });
        let mut k = next_try[i];
        while k <= limit {
            let room = best - partial[i];
            let n = closing.closed(i, k, &colors, room);
            k += 1;
            if n < room {
                colors[i] = k - 1;
                next_try[i] = k;
                partial[i + 1] = partial[i] + n;
                max_before[i + 1] = if i == 0 { k - 1 } else { max_before[i].max(k - 1) };
                next_try[i + 1] = 0;
                i += 1;
                continue 'search;
            }
        }
        colors[i] = u32::MAX;
        if i == 0 {
            break;
        }
        i -= 1;
    }
    let col = Coloring::new(grid.clone(), c, best_cells).expect("complete assignment");
    Some((best, col, complete))
}
