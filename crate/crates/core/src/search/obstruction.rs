use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::cert::{Certificate, Verdict};
use crate::error::{Error, Result};
use crate::grid::Grid;

use super::{is_guaranteed_exact, SearchBudget};

/// A minimal guaranteed grid with both halves of its certificate.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionEntry {
    pub grid: Grid,
    pub guarantee: Certificate,
    /// One colorable certificate per distinct single-side decrement.
    pub decrements: Vec<Certificate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionSet {
    pub c: usize,
    pub d: usize,
    pub caps: Grid,
    pub grids: Vec<Grid>,
    pub entries: Vec<ObstructionEntry>,
    /// No grid within the caps was left undecided.
    pub frontier_complete: bool,
    pub undecided: Vec<Grid>,
    /// Every monotone obstruction has `a_1` at most this, since its `R^-`
    /// is colorable and so cannot have `eps_c < 1`.
    #[serde(with = "crate::cert::decimal")]
    pub first_side_bound: BigUint,
    pub caps_cover_first_side: bool,
    /// Grids decided by search rather than by dominance.
    pub searched: usize,
}

#[derive(Clone, Debug)]
enum Status {
    Guaranteed,
    Colorable(Certificate),
    Unknown,
}

/// All minimal `c`-guaranteed monotone grids `a_1 <= ... <= a_d` with
/// `a_i <= caps_i`.
///
/// Grids are decided in order of increasing volume. A grid with a guaranteed
/// decrement is guaranteed by dominance; every other grid is searched. A
/// searched guaranteed grid whose decrements are all colorable is minimal.
pub fn obstruction_set(c: usize, d: usize, caps: &Grid, budget: &SearchBudget) -> Result<ObstructionSet> {
    if d == 0 || caps.dim() != d {
        return Err(Error::DimensionMismatch {
            left: caps.dim(),
            right: d,
        });
    }
    if c == 0 {
        return Err(Error::OutOfRange("need at least one color".into()));
    }
    let caps = caps.canonicalize();
    let cap: Vec<u64> = caps
        .dims()
        .iter()
        .map(|a| a.to_u64().ok_or_else(|| Error::TooLarge(format!("cap {a}"))))
        .collect::<Result<_>>()?;

    let mut all: Vec<Vec<u64>> = Vec::new();
    monotone_grids(&cap, &mut Vec::with_capacity(d), &mut all);
    all.sort_by_key(|g| (g.iter().map(|&a| u128::from(a)).product::<u128>(), g.clone()));

    let mut status: HashMap<Vec<u64>, Status> = HashMap::new();
    let mut entries = Vec::new();
    let mut undecided = Vec::new();
    let mut searched = 0;
    for sides in &all {
        let grid = Grid::from_sides(sides)?;
        let decs: Vec<Vec<u64>> = grid
            .decrements()
            .iter()
            .map(|g| g.dims().iter().map(|a| a.to_u64().unwrap()).collect())
            .collect();
        let dominated = decs
            .iter()
            .any(|g| matches!(status.get(g), Some(Status::Guaranteed)));
        if dominated {
            status.insert(sides.clone(), Status::Guaranteed);
            continue;
        }
        searched += 1;
        let cert = is_guaranteed_exact(c, &grid, budget);
        match cert.verdict {
            Verdict::Colorable => {
                status.insert(sides.clone(), Status::Colorable(cert));
            }
            Verdict::Unknown => {
                undecided.push(grid);
                status.insert(sides.clone(), Status::Unknown);
            }
            Verdict::Guaranteed => {
                let dec_certs: Option<Vec<Certificate>> = decs
                    .iter()
                    .map(|g| match status.get(g) {
                        Some(Status::Colorable(cc)) => Some(cc.clone()),
                        _ => None,
                    })
                    .collect();
                if let Some(decrements) = dec_certs {
                    entries.push(ObstructionEntry {
                        grid: grid.clone(),
                        guarantee: cert,
                        decrements,
                    });
                }
                status.insert(sides.clone(), Status::Guaranteed);
            }
        }
    }

    entries.sort_by(|a, b| a.grid.cmp(&b.grid));
    let first_side_bound = first_side_bound(c, d);
    Ok(ObstructionSet {
        c,
        d,
        caps: caps.clone(),
        grids: entries.iter().map(|e| e.grid.clone()).collect(),
        entries,
        frontier_complete: undecided.is_empty(),
        undecided,
        caps_cover_first_side: caps.dims()[0] >= first_side_bound,
        first_side_bound,
        searched,
    })
}

fn monotone_grids(cap: &[u64], prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    let i = prefix.len();
    if i == cap.len() {
        out.push(prefix.clone());
        return;
    }
    let lo = prefix.last().copied().unwrap_or(1);
    for a in lo..=cap[i] {
        prefix.push(a);
        monotone_grids(cap, prefix, out);
        prefix.pop();
    }
}

/// `2 + sum_i 2^(d-i) c^(2^(i-1))`: with every side of `R^-` at least
/// `a_1 - 1` and only one side decremented, `eps_c(R^-) >= 1` forces `a_1 - 2`
/// below this sum.
fn first_side_bound(c: usize, d: usize) -> BigUint {
    let mut total = BigUint::from(2u32);
    let mut power = BigUint::from(c);
    for i in 1..=d {
        total += (BigUint::one() << (d - i)) * &power;
        power = &power * &power;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &[u64]) -> Grid {
        Grid::from_sides(s).unwrap()
    }

    #[test]
    fn one_dimensional() {
        let b = SearchBudget::default();
        assert_eq!(obstruction_set(2, 1, &g(&[10]), &b).unwrap().grids, vec![g(&[3])]);
        assert_eq!(obstruction_set(3, 1, &g(&[10]), &b).unwrap().grids, vec![g(&[4])]);
    }

    #[test]
    fn two_colors_two_dimensions() {
        let set = obstruction_set(2, 2, &g(&[8, 30]), &SearchBudget::default()).unwrap();
        assert_eq!(set.grids, vec![g(&[3, 7]), g(&[5, 5])]);
        assert!(set.frontier_complete);
        assert_eq!(set.first_side_bound, BigUint::from(10u32));
        assert!(!set.caps_cover_first_side);
        let counts: Vec<usize> = set.entries.iter().map(|e| e.decrements.len()).collect();
        assert_eq!(counts, vec![2, 1]);
        for e in &set.entries {
            for dec in &e.decrements {
                assert!(dec.witness.as_ref().unwrap().is_box_free());
            }
        }
    }
}
