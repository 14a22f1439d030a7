//! Two-dimensional grids as multisets of column types.
//!
//! A column of length `rows` is a map `[rows] -> [colors]`, indexed in base
//! `colors` with row `k` as digit `k`. Two columns of types `i` and `j` form
//! `cost(i, j) = sum_k C(#{rows where both read k}, 2)` monochromatic
//! rectangles; two copies of one type form `cost(i, i)`.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::coloring::Coloring;
use crate::grid::Grid;

use super::{FindOutcome, Meter};

/// Largest number of column types materialized (the cost table is quadratic).
pub(crate) const MAX_TYPES: usize = 2048;

#[derive(Clone, Debug)]
pub(crate) struct ColumnSpace {
    rows: usize,
    colors: usize,
    count: usize,
    cost: Vec<u32>,
    /// One type per orbit under row permutations and color permutations.
    reps: Vec<usize>,
}

impl ColumnSpace {
    pub(crate) fn new(rows: usize, colors: usize) -> Option<Self> {
        let count = colors.checked_pow(rows as u32).filter(|&t| t <= MAX_TYPES)?;
        let digits: Vec<Vec<u32>> = (0..count).map(|t| digits_of(t, rows, colors)).collect();
        let mut cost = vec![0u32; count * count];
        let mut same = vec![0u32; colors];
        for i in 0..count {
            for j in i..count {
                same.iter_mut().for_each(|x| *x = 0);
                for k in 0..rows {
                    if digits[i][k] == digits[j][k] {
                        same[digits[i][k] as usize] += 1;
                    }
                }
                let v = same.iter().map(|&n| n * n.saturating_sub(1) / 2).sum();
                cost[i * count + j] = v;
                cost[j * count + i] = v;
            }
        }
        let mut reps: Vec<usize> = digits
            .iter()
            .map(|d| orbit_representative(d, colors))
            .collect();
        reps.sort_unstable();
        reps.dedup();
        Some(ColumnSpace {
            rows,
            colors,
            count,
            cost,
            reps,
        })
    }

    /// Columns run along the shorter axis.
    pub(crate) fn for_grid(colors: usize, shape: &[usize]) -> Option<Self> {
        debug_assert_eq!(shape.len(), 2);
        ColumnSpace::new(shape[0].min(shape[1]), colors)
    }

    #[inline]
    pub(crate) fn cost(&self, i: usize, j: usize) -> u32 {
        self.cost[i * self.count + j]
    }

    pub(crate) fn digit(&self, t: usize, row: usize) -> u32 {
        ((t / self.colors.pow(row as u32)) % self.colors) as u32
    }

    /// Total rectangles of a multiset of columns.
    #[cfg(test)]
    pub(crate) fn total_cost(&self, cols: &[usize]) -> u64 {
        let mut total = 0u64;
        for (a, &i) in cols.iter().enumerate() {
            for &j in &cols[a + 1..] {
                total += u64::from(self.cost(i, j));
            }
        }
        total
    }

    /// Lays the columns out on `grid`, whose shorter side has length `rows`.
    pub(crate) fn assemble(&self, grid: &Grid, cols: &[usize]) -> Coloring {
        let shape = grid.shape().expect("grid fits in memory");
        let row_axis = if shape[0] == self.rows { 0 } else { 1 };
        debug_assert_eq!(shape[1 - row_axis], cols.len());
        Coloring::from_fn(grid.clone(), self.colors, |p| {
            self.digit(cols[p[1 - row_axis]], p[row_axis])
        })
        .expect("assembled coloring is valid")
    }

    fn adjacency(&self) -> Vec<Vec<u64>> {
        let words = self.count.div_ceil(64);
        (0..self.count)
            .map(|v| {
                let mut row = vec![0u64; words];
                for u in 0..self.count {
                    if u != v && self.cost(u, v) == 0 {
                        row[u / 64] |= 1 << (u % 64);
                    }
                }
                row
            })
            .collect()
    }

    /// Box-free colorings of a grid whose shorter side exceeds the color count
    /// use pairwise compatible, pairwise distinct column types: a clique search.
    pub(crate) fn find(&self, grid: &Grid, meter: &Meter, shards: usize) -> FindOutcome {
        let shape = grid.shape().expect("grid fits in memory");
        let s = shape[0].max(shape[1]);
        if (0..self.count).any(|t| self.cost(t, t) == 0) {
            // Some column has no repeated color, so copies of it never conflict.
            let t = (0..self.count).find(|&t| self.cost(t, t) == 0).unwrap();
            return FindOutcome::Colorable(self.assemble(grid, &vec![t; s]));
        }
        if s > self.count {
            return FindOutcome::Guaranteed;
        }
        let adj = self.adjacency();
        let found = AtomicBool::new(false);
        let aborted = AtomicBool::new(false);
        let result: Mutex<Option<Vec<usize>>> = Mutex::new(None);
        let next = AtomicUsize::new(0);
        let work = || loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            if i >= self.reps.len() || found.load(Ordering::Relaxed) {
                break;
            }
            let v = self.reps[i];
            let mut chosen = vec![v];
            let mut cand = adj[v].clone();
            match expand_clique(&adj, &mut cand, s - 1, &mut chosen, meter, &found) {
                Step::Found => {
                    let mut slot = result.lock().unwrap();
                    if slot.is_none() {
                        *slot = Some(chosen);
                    }
                    found.store(true, Ordering::Relaxed);
                }
                Step::Aborted => {
                    if !found.load(Ordering::Relaxed) {
                        aborted.store(true, Ordering::Relaxed);
                    }
                    break;
                }
                Step::Exhausted => {}
            }
        };
        run_shards(shards, &work);
        if let Some(mut cols) = result.into_inner().unwrap() {
            cols.sort_unstable();
            return FindOutcome::Colorable(self.assemble(grid, &cols));
        }
        if aborted.load(Ordering::Relaxed) {
            FindOutcome::Unknown
        } else {
            FindOutcome::Guaranteed
        }
    }

    /// Greedy multiset: start from each orbit representative and repeatedly add
    /// the cheapest column.
    fn greedy(&self, s: usize) -> (u64, Vec<usize>) {
        let mut best = (u64::MAX, Vec::new());
        for &r in &self.reps {
            let mut cols = vec![r];
            let mut cross: Vec<u64> = (0..self.count).map(|x| u64::from(self.cost(r, x))).collect();
            let mut total = 0u64;
            while cols.len() < s {
                let (x, &c) = cross.iter().enumerate().min_by_key(|&(_, &c)| c).unwrap();
                total += c;
                cols.push(x);
                for (y, cy) in cross.iter_mut().enumerate() {
                    *cy += u64::from(self.cost(x, y));
                }
            }
            if total < best.0 {
                cols.sort_unstable();
                best = (total, cols);
            }
        }
        best
    }

    /// Minimum rectangle count over multisets of `s` columns, by branch and bound.
    ///
    /// Returns the best value found, a multiset attaining it, and whether the
    /// search completed (the value is then exact).
    pub(crate) fn minimize(&self, s: usize, meter: &Meter, shards: usize) -> (u64, Vec<usize>, bool) {
        if s <= 1 {
            return (0, vec![self.reps[0]; s], true);
        }
        let mut lower = vec![0u64; s + 1];
        for k in 2..s {
            let (v, _, done) = self.minimize_with(k, &lower, meter, shards);
            if !done {
                break;
            }
            lower[k] = v;
        }
        self.minimize_with(s, &lower, meter, shards)
    }

    fn minimize_with(
        &self,
        s: usize,
        lower: &[u64],
        meter: &Meter,
        shards: usize,
    ) -> (u64, Vec<usize>, bool) {
        let (greedy_value, greedy_cols) = self.greedy(s);
        let best = AtomicU64::new(greedy_value);
        let best_cols = Mutex::new(greedy_cols);
        let aborted = AtomicBool::new(false);
        let tasks: Vec<(usize, usize)> = self
            .reps
            .iter()
            .flat_map(|&r| (0..self.count).map(move |j| (r, j)))
            .collect();
        let next = AtomicUsize::new(0);
        let work = || {
            let mut bnb = Bnb {
                space: self,
                s,
                lower,
                best: &best,
                best_cols: &best_cols,
                meter,
                chosen: Vec::with_capacity(s),
                cross: vec![vec![0u64; self.count]; s + 1],
                suffix: vec![vec![0u64; self.count + 1]; s + 1],
            };
            loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let (r, j) = tasks[i];
                if !bnb.root(r, j) {
                    aborted.store(true, Ordering::Relaxed);
                    break;
                }
            }
        };
        run_shards(shards, &work);
        let value = best.load(Ordering::Relaxed);
        let mut cols = best_cols.into_inner().unwrap();
        cols.sort_unstable();
        (value, cols, !aborted.load(Ordering::Relaxed))
    }
}

struct Bnb<'a> {
    space: &'a ColumnSpace,
    s: usize,
    lower: &'a [u64],
    best: &'a AtomicU64,
    best_cols: &'a Mutex<Vec<usize>>,
    meter: &'a Meter,
    chosen: Vec<usize>,
    cross: Vec<Vec<u64>>,
    suffix: Vec<Vec<u64>>,
}

impl Bnb<'_> {
    /// Subtree with first column `r` (an orbit representative) and second column `j`.
    fn root(&mut self, r: usize, j: usize) -> bool {
        let sp = self.space;
        let partial = u64::from(sp.cost(r, j));
        self.chosen.clear();
        self.chosen.push(r);
        self.chosen.push(j);
        if self.s == 2 {
            self.offer(partial);
            return true;
        }
        let k = (self.s - 2) as u64;
        let bound_cross = (j..sp.count)
            .map(|x| u64::from(sp.cost(r, x)) + u64::from(sp.cost(j, x)))
            .min()
            .unwrap();
        if partial + k * bound_cross + self.lower[self.s - 2] >= self.best.load(Ordering::Relaxed) {
            return true;
        }
        for x in 0..sp.count {
            self.cross[2][x] = u64::from(sp.cost(r, x)) + u64::from(sp.cost(j, x));
        }
        self.dfs(2, j, partial)
    }

    fn offer(&mut self, value: u64) {
        if value < self.best.fetch_min(value, Ordering::Relaxed) {
            let mut slot = self.best_cols.lock().unwrap();
            if self.best.load(Ordering::Relaxed) == value {
                *slot = self.chosen.clone();
            }
        }
    }

    fn dfs(&mut self, depth: usize, start: usize, partial: u64) -> bool {
        if !self.meter.tick() {
            return false;
        }
        let sp = self.space;
        let t = sp.count;
        let k = self.s - depth;
        {
            let (cross, suffix) = (&self.cross[depth], &mut self.suffix[depth]);
            suffix[t] = u64::MAX;
            for x in (start..t).rev() {
                suffix[x] = suffix[x + 1].min(cross[x]);
            }
        }
        for j in start..t {
            let cj = self.cross[depth][j];
            let rest = (k as u64 - 1) * self.suffix[depth][j];
            if partial + cj + rest + self.lower[k] >= self.best.load(Ordering::Relaxed) {
                continue;
            }
            self.chosen.push(j);
            if k == 1 {
                self.offer(partial + cj);
            } else {
                let (lo, hi) = self.cross.split_at_mut(depth + 1);
                let (cur, nxt) = (&lo[depth], &mut hi[0]);
                let row = &sp.cost[j * t..(j + 1) * t];
                for x in j..t {
                    nxt[x] = cur[x] + u64::from(row[x]);
                }
                if !self.dfs(depth + 1, j, partial + cj) {
                    return false;
                }
            }
            self.chosen.pop();
        }
        true
    }
}

enum Step {
    Found,
    Exhausted,
    Aborted,
}

/// Extends `chosen` by `need` vertices of `cand` forming a clique, pruning with
/// a greedy coloring bound.
fn expand_clique(
    adj: &[Vec<u64>],
    cand: &mut [u64],
    need: usize,
    chosen: &mut Vec<usize>,
    meter: &Meter,
    stop: &AtomicBool,
) -> Step {
    if need == 0 {
        return Step::Found;
    }
    if !meter.tick() || stop.load(Ordering::Relaxed) {
        return Step::Aborted;
    }
    let (order, bounds) = greedy_color_order(adj, cand);
    for idx in (0..order.len()).rev() {
        if bounds[idx] < need {
            return Step::Exhausted;
        }
        let v = order[idx];
        let mut next: Vec<u64> = cand.iter().zip(&adj[v]).map(|(a, b)| a & b).collect();
        chosen.push(v);
        match expand_clique(adj, &mut next, need - 1, chosen, meter, stop) {
            Step::Exhausted => {}
            other => return other,
        }
        chosen.pop();
        cand[v / 64] &= !(1 << (v % 64));
    }
    Step::Exhausted
}

/// Vertices of `cand` in greedy-coloring order with their color numbers; a
/// clique inside the first `i + 1` vertices has at most `bounds[i]` members.
fn greedy_color_order(adj: &[Vec<u64>], cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let mut uncolored = cand.to_vec();
    let mut order = Vec::new();
    let mut bounds = Vec::new();
    let mut color = 0;
    while uncolored.iter().any(|&w| w != 0) {
        color += 1;
        let mut q = uncolored.clone();
        while let Some(v) = first_bit(&q) {
            q[v / 64] &= !(1 << (v % 64));
            for (w, a) in q.iter_mut().zip(&adj[v]) {
                *w &= !a;
            }
            uncolored[v / 64] &= !(1 << (v % 64));
            order.push(v);
            bounds.push(color);
        }
    }
    (order, bounds)
}

fn first_bit(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

fn digits_of(mut t: usize, rows: usize, colors: usize) -> Vec<u32> {
    (0..rows)
        .map(|_| {
            let d = (t % colors) as u32;
            t /= colors;
            d
        })
        .collect()
}

/// Sorts the color classes by size (largest first) and writes them out as
/// consecutive blocks of rows, color 0 first.
fn orbit_representative(digits: &[u32], colors: usize) -> usize {
    let mut sizes = vec![0usize; colors];
    for &d in digits {
        sizes[d as usize] += 1;
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let mut t = 0usize;
    let mut row = 0;
    let mut weight = 1usize;
    for (color, &n) in sizes.iter().enumerate() {
        for _ in 0..n {
            t += color * weight;
            weight *= colors;
            row += 1;
        }
    }
    debug_assert_eq!(row, digits.len());
    t
}

pub(crate) fn run_shards<F: Fn() + Sync>(shards: usize, work: &F) {
    if shards <= 1 {
        work();
        return;
    }
    std::thread::scope(|scope| {
        for _ in 0..shards {
            scope.spawn(work);
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::SearchBudget;

    #[test]
    fn cost_table() {
        let sp = ColumnSpace::new(3, 2).unwrap();
        let diag: Vec<u32> = (0..8).map(|i| sp.cost(i, i)).collect();
        assert_eq!(diag, vec![3, 1, 1, 1, 1, 1, 1, 3]);
        // (1,1,1) against (1,1,2): two shared rows of color 1.
        assert_eq!(sp.cost(0, 4), 1);
        assert_eq!(sp.reps, vec![0, 4]);
    }

    #[test]
    fn representatives_three_colors() {
        let sp = ColumnSpace::new(4, 3).unwrap();
        // Partitions of 4 into at most 3 parts: 4, 3+1, 2+2, 2+1+1.
        assert_eq!(sp.reps.len(), 4);
    }

    #[test]
    fn small_minima() {
        let meter = SearchBudget::default().meter();
        let sp = ColumnSpace::new(3, 2).unwrap();
        assert_eq!(sp.minimize(7, &meter, 1).0, 1);
        assert_eq!(sp.minimize(6, &meter, 1).0, 0);
        assert_eq!(sp.minimize(8, &meter, 2).0, 2);
        let sp5 = ColumnSpace::new(5, 2).unwrap();
        let (v, cols, done) = sp5.minimize(5, &meter, 1);
        assert!(done);
        assert_eq!(v, 2);
        assert_eq!(sp5.total_cost(&cols), 2);
        assert_eq!(sp5.minimize(6, &meter, 1).0, 4);
    }
}
