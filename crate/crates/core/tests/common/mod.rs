//! Independent reference implementations used only by tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use gridramsey::{Coloring, Grid};

pub type NaiveBox = BTreeSet<Vec<usize>>;

/// Every box of the grid as its set of corner points, built straight from
/// the definition: one pair `x_i < y_i` per axis, all `2^d` corner choices.
pub fn naive_boxes(shape: &[usize]) -> HashSet<NaiveBox> {
    let mut pair_lists: Vec<Vec<(usize, usize)>> = Vec::new();
    for &a in shape {
        let mut pairs = Vec::new();
        for x in 0..a {
            for y in x + 1..a {
                pairs.push((x, y));
            }
        }
        pair_lists.push(pairs);
    }
    let mut out = HashSet::new();
    let mut choice = vec![0usize; shape.len()];
    if pair_lists.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let mut corners = BTreeSet::new();
        for mask in 0..1usize << shape.len() {
            let p: Vec<usize> = (0..shape.len())
                .map(|i| {
                    let (x, y) = pair_lists[i][choice[i]];
                    if mask >> i & 1 == 1 { y } else { x }
                })
                .collect();
            corners.insert(p);
        }
        out.insert(corners);
        let mut i = shape.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < pair_lists[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

pub fn naive_mono_count(col: &Coloring) -> usize {
    naive_boxes(col.shape())
        .iter()
        .filter(|b| {
            let colors: HashSet<u32> = b.iter().map(|p| col.get(p)).collect();
            colors.len() == 1
        })
        .count()
}

/// Rectangles of a 2-colored `r x s` grid given as column bitmasks.
fn rectangles(cols: &[u32], r: usize) -> u64 {
    let mask = (1u32 << r) - 1;
    let pairs = |n: u32| u64::from(n * n.saturating_sub(1) / 2);
    let mut total = 0;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            total += pairs((cols[i] & cols[j]).count_ones());
            total += pairs((!cols[i] & !cols[j] & mask).count_ones());
        }
    }
    total
}

/// Least rectangle count over all `2^(r s)` colorings.
pub fn brute_min_rectangles(r: usize, s: usize) -> u64 {
    let mut cols = vec![0u32; s];
    let mut best = u64::MAX;
    loop {
        best = best.min(rectangles(&cols, r));
        let mut k = 0;
        loop {
            if k == s {
                return best;
            }
            cols[k] += 1;
            if cols[k] < 1 << r {
                break;
            }
            cols[k] = 0;
            k += 1;
        }
    }
}

/// Least monochromatic-pair count of `[a]` over all `c^a` colorings.
pub fn brute_min_line(a: usize, c: usize) -> u64 {
    let mut cells = vec![0usize; a];
    let mut best = u64::MAX;
    loop {
        let mut count = 0;
        for i in 0..a {
            for j in i + 1..a {
                count += u64::from(cells[i] == cells[j]);
            }
        }
        best = best.min(count);
        let mut k = 0;
        loop {
            if k == a {
                return best;
            }
            cells[k] += 1;
            if cells[k] < c {
                break;
            }
            cells[k] = 0;
            k += 1;
        }
    }
}

/// All grids `[a_1, ..., a_d]` with sides `>= 2` and volume `<= max`, in every side order.
pub fn grids_up_to(d: usize, max_volume: u64) -> Vec<Grid> {
    fn rec(d: usize, vol: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Grid>) {
        if cur.len() == d {
            out.push(Grid::from_sides(cur).unwrap());
            return;
        }
        let mut a = 2;
        while vol * a <= max {
            cur.push(a);
            rec(d, vol * a, max, cur, out);
            cur.pop();
            a += 1;
        }
    }
    let mut out = Vec::new();
    rec(d, 1, max_volume, &mut Vec::new(), &mut out);
    out
}
