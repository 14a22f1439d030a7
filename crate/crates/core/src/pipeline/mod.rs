//! Combining methods into certified bounds: the product extension, the best
//! known `t` for two-dimensional grids, and the `a_3` table.

mod exponent;
mod table;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::bounds::guaranteed_count_lower_bound;
use crate::cert::{Certificate, Method};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::qform::{coloring_from_vector, min_rectangles, QMinOutcome, MAX_MIN_ROWS};
use crate::search::SearchBudget;

pub use exponent::{inner_max_argmax, obstruction_count_exponent, ObstructionExponent};
pub use table::{a3_table, published_a3, A3Table, BoundTableEntry, CellMethod};

/// Largest `a_3` the Delta scan will consider.
pub const A3_CAP: u64 = 1_000_000;

/// `floor(c M / t) + 1` with `M = prod C(a_j, 2)`.
pub fn product_bound(c: u64, grid: &Grid, t: &BigUint) -> Result<BigUint> {
    if t.is_zero() {
        return Err(Error::OutOfRange("product extension needs t >= 1".into()));
    }
    Ok((BigUint::from(c) * grid.box_count()).div_floor(t) + 1u32)
}

/// From a `(c, t)`-guarantee of `R`, the guarantee of `R x [floor(cM/t) + 1]`.
pub fn product_extension(base: &Certificate) -> Result<(BigUint, Certificate)> {
    let t = base
        .guaranteed_count()
        .ok_or_else(|| Error::Premise("product extension needs a guarantee certificate".into()))?;
    let c = base
        .colors
        .to_u64()
        .ok_or_else(|| Error::OutOfRange("color count".into()))?;
    let k = product_bound(c, &base.grid, &t)?;
    let grid = base.grid.product(&Grid::new(vec![k.clone()])?);
    let cert = Certificate::guaranteed(Method::Product, grid, c)
        .with_param("t", t.to_string())
        .with_param("m", base.grid.box_count().to_string())
        .with_param("k", k.to_string())
        .with_sub(base.clone());
    Ok((k, cert))
}

/// Where a value of `t` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TSource {
    /// Exact minimum over all 2-colorings.
    Qform,
    /// Ceiling-improved count bound.
    CeilingDelta,
    /// A box-free 2-coloring exists.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestT {
    pub t: u64,
    pub source: TSource,
    /// Exact minimum when the enumeration finished.
    pub exact: Option<u64>,
    /// Best ceiling-improved bound over both axis orders.
    pub ceiling: Option<u64>,
    pub certificate: Certificate,
}

/// Largest `t` for which the 2-D grid is known to be `(2, t)`-guaranteed.
pub fn best_t(grid: &Grid, budget: &SearchBudget) -> Result<BestT> {
    let shape = grid.shape()?;
    if shape.len() != 2 {
        return Err(Error::DimensionMismatch { left: shape.len(), right: 2 });
    }
    let (r, s) = (shape[0].min(shape[1]), shape[0].max(shape[1]));
    let ceiling = ceiling_t(2, grid)?;
    let exact = if r >= 1 && r <= MAX_MIN_ROWS {
        match min_rectangles(r, s, budget)? {
            QMinOutcome::Exact { t, v } => Some((t, v)),
            QMinOutcome::Unknown { .. } => None,
        }
    } else {
        None
    };
    let ceiling_cert = |t: u64| {
        Certificate::guaranteed(Method::Delta, grid.clone(), 2u32)
            .with_param("t", t.to_string())
            .with_param("ceiling", true)
    };
    Ok(match exact {
        Some((0, v)) => {
            let mut witness = coloring_from_vector(r, &v)?;
            if shape[0] != r {
                witness = transpose(&witness, grid)?;
            }
            BestT {
                t: 0,
                source: TSource::Exhaustive,
                exact: Some(0),
                ceiling,
                certificate: Certificate::colorable(Method::Exhaustive, witness),
            }
        }
        Some((t, _)) if ceiling.map_or(true, |c| c <= t) => BestT {
            t,
            source: TSource::Qform,
            exact: Some(t),
            ceiling,
            certificate: Certificate::guaranteed(Method::Exhaustive, grid.clone(), 2u32)
                .with_param("t", t.to_string())
                .with_param("engine", "column-type enumeration"),
        },
        Some((t, _)) => {
            // A rigorous lower bound can never exceed the exact minimum.
            return Err(Error::Premise(format!(
                "ceiling bound {ceiling:?} exceeds the exact minimum {t} on {grid}"
            )));
        }
        None => match ceiling {
            Some(t) => BestT {
                t,
                source: TSource::CeilingDelta,
                exact: None,
                ceiling,
                certificate: ceiling_cert(t),
            },
            None => BestT {
                t: 0,
                source: TSource::CeilingDelta,
                exact: None,
                ceiling,
                certificate: Certificate::unknown(Method::Delta, grid.clone(), 2u32),
            },
        },
    })
}

/// `[a1, a2]` colored as the transpose of a coloring of `[a2, a1]`.
fn transpose(col: &crate::coloring::Coloring, grid: &Grid) -> Result<crate::coloring::Coloring> {
    crate::coloring::Coloring::from_fn(grid.clone(), col.colors(), |p| col.get(&[p[1], p[0]]))
}

/// Largest ceiling-improved count bound over every ordering of the sides.
pub(crate) fn ceiling_t(c: u64, grid: &Grid) -> Result<Option<u64>> {
    let mut best: Option<u64> = None;
    // All orders for small d; beyond that only the given one.
    let orders = if grid.dim() <= 6 { orderings(grid.dim()) } else { vec![(0..grid.dim()).collect()] };
    for order in orders {
        let g = Grid::new(order.iter().map(|&i| grid.dims()[i].clone()).collect())?;
        if let Some(t) = guaranteed_count_lower_bound(c, &g, true)? {
            let t = t.to_integer().to_u64().ok_or(Error::Overflow("ceiling bound"))?;
            best = Some(best.map_or(t, |b| b.max(t)));
        }
    }
    Ok(best)
}

fn orderings(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in orderings(d - 1) {
        for pos in 0..=rest.len() {
            let mut o = rest.clone();
            o.insert(pos, d - 1);
            out.push(o);
        }
    }
    out.sort();
    out
}

/// Least `a3 <= A3_CAP` for which the ceiling-improved count bound certifies
/// `[a1, a2, a3]` (either order of `a1, a2`), with its certificate.
pub fn least_a3_delta(c: u64, a1: u64, a2: u64) -> Result<Option<(u64, Certificate)>> {
    if a1 < 2 || a2 < 2 {
        return Err(Error::OutOfRange(format!("need a1, a2 >= 2, got {a1}, {a2}")));
    }
    let holds = |x: u64, y: u64, a3: u64| -> Result<bool> {
        Ok(guaranteed_count_lower_bound(c, &Grid::from_sides(&[x, y, a3])?, true)?.is_some())
    };
    let mut best: Option<(u64, u64, u64)> = None;
    for (x, y) in [(a1, a2), (a2, a1)] {
        if !holds(x, y, A3_CAP)? {
            continue;
        }
        // The bound is monotone in a3, so the least value is found by bisection.
        let (mut lo, mut hi) = (1u64, A3_CAP);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if holds(x, y, mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if best.map_or(true, |(b, _, _)| hi < b) {
            best = Some((hi, x, y));
        }
    }
    let Some((a3, x, y)) = best else {
        return Ok(None);
    };
    let grid = Grid::from_sides(&[x, y, a3])?;
    let t = guaranteed_count_lower_bound(c, &grid, true)?.expect("checked above");
    let cert = Certificate::guaranteed(Method::Delta, grid, c)
        .with_param("t", t.to_integer().to_string())
        .with_param("ceiling", true);
    Ok(Some((a3, cert)))
}
