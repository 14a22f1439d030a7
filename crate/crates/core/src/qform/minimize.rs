//! Exact minimization of the rectangle count `(v^T M_r v - v . delta_r) / 2`
//! over nonnegative integer vectors with `sum v = s`.
//!
//! Vectors are enumerated type by type: pick the next type with a positive
//! entry, then its multiplicity. Some column lies in the orbit of a weight
//! class representative `2^w - 1` (`w <= r/2`) under row permutations and the
//! color swap, so the search forces one column of a representative first.
//!
//! Pruning: the remaining `k` columns each add at least the smallest cross
//! term still available, and among themselves at least the optimum for `k`
//! columns, which is solved first.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::search::{run_shards, Meter, SearchBudget};

use super::{pairs, build_matrix, QFormInstance};

/// Largest `r` the enumeration accepts.
pub const MAX_MIN_ROWS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum QMinOutcome {
    /// Minimum rectangle count `t` and a vector attaining it.
    Exact { t: u64, v: Vec<u64> },
    /// Budget ran out; `upper` is attained by `v`.
    Unknown { upper: u64, v: Vec<u64> },
}

impl QMinOutcome {
    pub fn exact(&self) -> Option<u64> {
        match self {
            QMinOutcome::Exact { t, .. } => Some(*t),
            QMinOutcome::Unknown { .. } => None,
        }
    }

    pub fn vector(&self) -> &[u64] {
        match self {
            QMinOutcome::Exact { v, .. } | QMinOutcome::Unknown { v, .. } => v,
        }
    }
}

/// Least number of monochromatic rectangles in a 2-coloring of `[r] x [s]`.
pub fn min_rectangles(r: usize, s: usize, budget: &SearchBudget) -> Result<QMinOutcome> {
    if r == 0 || r > MAX_MIN_ROWS {
        return Err(Error::OutOfRange(format!("r must be in 1..={MAX_MIN_ROWS}, got {r}")));
    }
    let inst = build_matrix(r)?;
    let meter = budget.meter();
    let n = inst.size();
    if s == 0 {
        return Ok(QMinOutcome::Exact { t: 0, v: vec![0; n] });
    }
    let mut lower = vec![0u64; s + 1];
    for k in 2..s {
        let (value, _, done) = solve(&inst, k, &lower, &meter, budget.parallel_shards);
        if !done {
            break;
        }
        lower[k] = value;
    }
    let (value, v, done) = solve(&inst, s, &lower, &meter, budget.parallel_shards);
    Ok(if done {
        QMinOutcome::Exact { t: value, v }
    } else {
        QMinOutcome::Unknown { upper: value, v }
    })
}

fn representatives(r: usize) -> Vec<usize> {
    (0..=r / 2).map(|w| (1usize << w) - 1).collect()
}

/// Greedy vector: one representative column, then repeatedly the cheapest column.
fn greedy(inst: &QFormInstance, s: usize) -> (u64, Vec<u64>) {
    let n = inst.size();
    let mut best = (u64::MAX, Vec::new());
    for rep in representatives(inst.r()) {
        let mut v = vec![0u64; n];
        v[rep] = 1;
        let mut cross: Vec<u64> = (0..n).map(|j| inst.entry(rep, j)).collect();
        let mut total = 0;
        for _ in 1..s {
            let (j, &c) = cross.iter().enumerate().min_by_key(|&(_, &c)| c).unwrap();
            total += c;
            v[j] += 1;
            for (x, cx) in cross.iter_mut().enumerate() {
                *cx += inst.entry(j, x);
            }
        }
        if total < best.0 {
            best = (total, v);
        }
    }
    best
}

fn solve(
    inst: &QFormInstance,
    s: usize,
    lower: &[u64],
    meter: &Meter,
    shards: usize,
) -> (u64, Vec<u64>, bool) {
    let n = inst.size();
    let (g_value, g_vec) = greedy(inst, s);
    if s == 1 || g_value == 0 {
        return (g_value, g_vec, true);
    }
    let best = AtomicU64::new(g_value);
    let best_vec = Mutex::new(g_vec);
    let aborted = AtomicBool::new(false);
    let tasks: Vec<(usize, usize)> = representatives(inst.r())
        .into_iter()
        .flat_map(|rep| (0..n).map(move |j| (rep, j)))
        .collect();
    let next = AtomicUsize::new(0);
    let work = || {
        let mut search = Search {
            inst,
            n,
            lower,
            best: &best,
            best_vec: &best_vec,
            meter,
            v: vec![0; n],
            cross: vec![vec![0; n]; s + 1],
            suffix: vec![vec![0; n + 1]; s + 1],
        };
        loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            if i >= tasks.len() {
                break;
            }
            let (rep, j) = tasks[i];
            search.v.iter_mut().for_each(|x| *x = 0);
            search.v[rep] = 1;
            for x in 0..n {
                search.cross[0][x] = inst.entry(rep, x);
            }
            search.fill_suffix(0, j);
            let rem = (s - 1) as u64;
            let c0 = search.cross[0][j];
            if c0 + (rem - 1) * search.suffix[0][j] + lower[s - 1] >= best.load(Ordering::Relaxed) {
                continue;
            }
            if !search.place(0, j, rem, 0) {
                aborted.store(true, Ordering::Relaxed);
                break;
            }
        }
    };
    run_shards(shards, &work);
    let value = best.load(Ordering::Relaxed);
    (value, best_vec.into_inner().unwrap(), !aborted.load(Ordering::Relaxed))
}

struct Search<'a> {
    inst: &'a QFormInstance,
    n: usize,
    lower: &'a [u64],
    best: &'a AtomicU64,
    best_vec: &'a Mutex<Vec<u64>>,
    meter: &'a Meter,
    v: Vec<u64>,
    cross: Vec<Vec<u64>>,
    suffix: Vec<Vec<u64>>,
}

impl Search<'_> {
    fn fill_suffix(&mut self, level: usize, start: usize) {
        let (cross, suffix) = (&self.cross[level], &mut self.suffix[level]);
        suffix[self.n] = u64::MAX;
        for x in (start..self.n).rev() {
            suffix[x] = suffix[x + 1].min(cross[x]);
        }
    }

    fn offer(&self, value: u64) {
        if value < self.best.fetch_min(value, Ordering::Relaxed) {
            let mut slot = self.best_vec.lock().unwrap();
            if self.best.load(Ordering::Relaxed) == value {
                slot.clone_from(&self.v);
            }
        }
    }

    /// Chooses the multiplicity of type `j` (at least one) out of `rem` columns.
    fn place(&mut self, level: usize, j: usize, rem: u64, partial: u64) -> bool {
        let cj = self.cross[level][j];
        let mjj = self.inst.diag()[j];
        let after = if j + 1 < self.n { self.suffix[level][j + 1] } else { u64::MAX };
        for x in 1..=rem {
            let p = partial + x * cj + pairs(x as u32) * mjj;
            let left = rem - x;
            if left == 0 {
                if p < self.best.load(Ordering::Relaxed) {
                    self.v[j] += x;
                    self.offer(p);
                    self.v[j] -= x;
                }
                break;
            }
            if after == u64::MAX {
                // No later type can take the remaining columns.
                continue;
            }
            let lb = p + left * after + self.lower[left as usize];
            if lb >= self.best.load(Ordering::Relaxed) {
                if p >= self.best.load(Ordering::Relaxed) {
                    break;
                }
                continue;
            }
            {
                let (lo, hi) = self.cross.split_at_mut(level + 1);
                let (cur, nxt) = (&lo[level], &mut hi[0]);
                for y in j + 1..self.n {
                    nxt[y] = cur[y] + x * self.inst.entry(j, y);
                }
            }
            self.v[j] += x;
            let ok = self.next(level + 1, j + 1, left, p);
            self.v[j] -= x;
            if !ok {
                return false;
            }
        }
        true
    }

    /// Chooses the next type with a positive entry, at index `start` or later.
    fn next(&mut self, level: usize, start: usize, rem: u64, partial: u64) -> bool {
        if !self.meter.tick() {
            return false;
        }
        self.fill_suffix(level, start);
        for j in start..self.n {
            let cj = self.cross[level][j];
            let lb = partial + cj + (rem - 1) * self.suffix[level][j] + self.lower[rem as usize];
            if lb >= self.best.load(Ordering::Relaxed) {
                continue;
            }
            if !self.place(level, j, rem, partial) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qform::{coloring_from_vector, qform_penalized};

    fn t(r: usize, s: usize) -> u64 {
        let out = min_rectangles(r, s, &SearchBudget::default()).unwrap();
        let v = out.vector().to_vec();
        assert_eq!(v.iter().sum::<u64>(), s as u64);
        let inst = build_matrix(r).unwrap();
        let twice = qform_penalized(&inst, &v).unwrap();
        let t = out.exact().expect("within budget");
        assert_eq!(twice, (2 * t).into());
        assert_eq!(coloring_from_vector(r, &v).unwrap().count_monochromatic_boxes(), t.into());
        t
    }

    #[test]
    fn examples() {
        assert_eq!(t(3, 7), 1);
        assert_eq!(t(3, 6), 0);
        assert_eq!(t(5, 5), 2);
        assert_eq!(t(5, 6), 4);
        assert_eq!(t(3, 8), 2);
        assert_eq!(t(1, 5), 0);
        assert_eq!(t(2, 9), 0);
    }

    #[test]
    fn out_of_range() {
        assert!(min_rectangles(0, 3, &SearchBudget::default()).is_err());
        assert!(min_rectangles(13, 3, &SearchBudget::default()).is_err());
    }
}
