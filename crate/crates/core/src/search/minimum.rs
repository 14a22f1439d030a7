use num_bigint::BigUint;

use crate::coloring::Coloring;
use crate::grid::Grid;

use super::{cells, columns::ColumnSpace, find_coloring, FindOutcome, SearchBudget};

/// Result of an exact minimization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinOutcome {
    /// The minimum number of monochromatic boxes, with a coloring attaining it
    /// when the grid is small enough to materialize.
    Exact { t: BigUint, witness: Option<Coloring> },
    /// Budget ran out; `upper` is the best count seen (if any).
    Unknown { upper: Option<BigUint> },
}

impl MinOutcome {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            MinOutcome::Exact { t, .. } => Some(t),
            MinOutcome::Unknown { .. } => None,
        }
    }
}

/// Least number of monochromatic boxes over all `c`-colorings of `grid`.
///
/// One-dimensional grids use the balanced color distribution; two-dimensional
/// grids run a branch and bound over column multisets; other grids run it
/// over cells.
pub fn min_mono_boxes_exact(c: usize, grid: &Grid, budget: &SearchBudget) -> MinOutcome {
    let exact = |t: u64, witness: Option<Coloring>| MinOutcome::Exact {
        t: BigUint::from(t),
        witness,
    };
    if c == 0 {
        return MinOutcome::Unknown { upper: None };
    }
    if c == 1 {
        let witness = grid
            .shape()
            .ok()
            .filter(|s| s.iter().product::<usize>() <= 1 << 24)
            .and_then(|s| Coloring::new(grid.clone(), 1, vec![0; s.iter().product()]).ok());
        return MinOutcome::Exact {
            t: grid.box_count(),
            witness,
        };
    }
    let shape = match grid.shape() {
        Ok(s) => s,
        Err(_) => return MinOutcome::Unknown { upper: None },
    };
    if shape.len() == 1 {
        let a = shape[0];
        let witness = Coloring::from_fn(grid.clone(), c, |p| (p[0] % c) as u32).ok();
        return exact(balanced_pairs(a, c), witness);
    }
    match find_coloring(c, grid, budget) {
        FindOutcome::Colorable(col) => return exact(0, Some(col)),
        FindOutcome::Unknown => return MinOutcome::Unknown { upper: None },
        FindOutcome::Guaranteed => {}
    }
    let meter = budget.meter();
    if shape.len() == 2 {
        if let Some(space) = ColumnSpace::for_grid(c, &shape) {
            let s = shape[0].max(shape[1]);
            let (value, cols, done) = space.minimize(s, &meter, budget.parallel_shards);
            let witness = space.assemble(grid, &cols);
            debug_assert_eq!(witness.count_u128(), u128::from(value));
            return if done {
                exact(value, Some(witness))
            } else {
                MinOutcome::Unknown {
                    upper: Some(BigUint::from(value)),
                }
            };
        }
    }
    match cells::minimize(c, grid, &shape, &meter) {
        Some((value, witness, true)) => exact(value, Some(witness)),
        Some((value, _, false)) => MinOutcome::Unknown {
            upper: Some(BigUint::from(value)),
        },
        None => MinOutcome::Unknown { upper: None },
    }
}

/// `sum_k C(n_k, 2)` for the most even split of `a` cells into `c` colors.
fn balanced_pairs(a: usize, c: usize) -> u64 {
    let (q, rem) = ((a / c) as u64, (a % c) as u64);
    let pairs = |n: u64| n * n.saturating_sub(1) / 2;
    rem * pairs(q + 1) + (c as u64 - rem) * pairs(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(c: usize, s: &[u64]) -> u64 {
        let g = Grid::from_sides(s).unwrap();
        match min_mono_boxes_exact(c, &g, &SearchBudget::default()) {
            MinOutcome::Exact { t, witness } => {
                if let Some(w) = witness {
                    assert_eq!(w.count_monochromatic_boxes(), t);
                }
                t.try_into().unwrap()
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn examples() {
        assert_eq!(t(2, &[4]), 2);
        assert_eq!(t(2, &[3, 7]), 1);
        assert_eq!(t(2, &[5, 5]), 2);
        assert_eq!(t(2, &[3, 8]), 2);
        assert_eq!(t(2, &[4, 6]), 0);
        assert_eq!(t(1, &[3, 3]), 9);
        assert_eq!(t(3, &[7]), 5);
        assert_eq!(t(2, &[2, 2, 3]), 0);
    }

    #[test]
    fn cells_agree_with_columns() {
        let budget = SearchBudget::default();
        for s in [[3u64, 7], [4, 7], [5, 5], [3, 9]] {
            let g = Grid::from_sides(&s).unwrap();
            let shape = g.shape().unwrap();
            let (v, _, done) = cells::minimize(2, &g, &shape, &budget.meter()).unwrap();
            assert!(done);
            assert_eq!(v, t(2, &s), "{s:?}");
        }
    }
}
