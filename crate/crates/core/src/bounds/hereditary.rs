//! Prefix-volume criteria, virtual colors and pinch points.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::bounds::recurrence::epsilon;
use crate::cert::{Certificate, Method};
use crate::error::{Error, Result};
use crate::grid::Grid;

/// `C_j = (d 2^d)^(3 (3^(j-1) - 1) / 2)`; the exponent is always an integer.
pub fn hereditary_constant(d: usize, j: usize) -> BigUint {
    assert!(j >= 1);
    let exponent = 3 * (pow3(j - 1) - 1) / 2;
    num_traits::pow(BigUint::from(d) << d, exponent)
}

fn pow3(k: usize) -> usize {
    3usize.checked_pow(k as u32).expect("3^k fits in usize")
}

/// True iff `a_1 ... a_j > C_j c^((3^j - 1)/2)` for every `j` (sides sorted first).
pub fn hereditary_check(c: impl Into<BigUint>, grid: &Grid) -> bool {
    let c = c.into();
    let grid = grid.canonicalize();
    let d = grid.dim();
    let mut volume = BigUint::one();
    for (j, a) in grid.dims().iter().enumerate().map(|(i, a)| (i + 1, a)) {
        volume *= a;
        let rhs = hereditary_constant(d, j) * num_traits::pow(c.clone(), (pow3(j) - 1) / 2);
        if volume <= rhs {
            return false;
        }
    }
    true
}

pub fn hereditary_certificate(c: impl Into<BigUint>, grid: &Grid) -> Option<Certificate> {
    let c = c.into();
    hereditary_check(c.clone(), grid)
        .then(|| Certificate::guaranteed(Method::Hereditary, grid.canonicalize(), c))
}

/// `c' = c * prod_{i<=j} C(a_i, 2)`, the number of (box, color) pairs of `R_j`.
pub fn virtual_color_count(c: impl Into<BigUint>, grid: &Grid, j: usize) -> Result<BigUint> {
    if j == 0 || j >= grid.dim() {
        return Err(Error::OutOfRange(format!(
            "virtual colors need 1 <= j < d, got j = {j}, d = {}",
            grid.dim()
        )));
    }
    Ok(c.into() * grid.prefix(j)?.box_count())
}

/// `[a]` is `c`-guaranteed iff `a > c`.
pub fn pigeonhole_certificate(c: impl Into<BigUint>, a: impl Into<BigUint>) -> Option<Certificate> {
    let (c, a) = (c.into(), a.into());
    (a > c).then(|| {
        Certificate::guaranteed(Method::Pigeonhole, Grid::new(vec![a]).expect("a > c >= 0"), c)
    })
}

/// Combines a `c`-guarantee of `R_j` with a `c'`-guarantee of the suffix into
/// a `c`-guarantee of `R = R_j x suffix`.
pub fn compose_guarantee(low: &Certificate, high: &Certificate) -> Result<Certificate> {
    if !low.is_guaranteed() || !high.is_guaranteed() {
        return Err(Error::Premise("both parts must be guaranteed".into()));
    }
    let grid = low.grid.product(&high.grid);
    let j = low.grid.dim();
    let expected = virtual_color_count(low.colors.clone(), &grid, j)?;
    if expected != high.colors {
        return Err(Error::VirtualColorMismatch {
            expected: expected.to_string(),
            found: high.colors.to_string(),
        });
    }
    Ok(
        Certificate::guaranteed(Method::ProductComposition, grid, low.colors.clone())
            .with_param("j", j)
            .with_param("virtual_colors", expected.to_string())
            .with_sub(low.clone())
            .with_sub(high.clone()),
    )
}

/// Which admissible index to take at each step of the pinch-point construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PinchRule {
    /// The largest admissible index (strongest per-coordinate bound).
    Largest,
    /// The smallest admissible index (finest set of pinch points).
    Smallest,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PinchPoint {
    /// 1-based coordinate index.
    pub index: usize,
    /// Color count in force when this point was chosen (`c`, then `c'`, ...).
    #[serde(with = "crate::cert::decimal")]
    pub colors: BigUint,
    /// Upper bound on `a_index` (and on every side since the previous point).
    #[serde(with = "crate::cert::decimal")]
    pub side_bound: BigUint,
    /// Upper bound on `a_1 ... a_index` built from the side bounds.
    #[serde(with = "crate::cert::decimal")]
    pub volume_bound: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PinchPointSet {
    pub grid: Grid,
    pub rule: PinchRule,
    pub points: Vec<PinchPoint>,
}

impl PinchPointSet {
    pub fn indices(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.index).collect()
    }
}

/// Pinch points of a monotone obstruction candidate.
///
/// At each step, with `start` coordinates consumed and `colors` the current
/// (virtual) color count, an index `k > start` is admissible when
/// `2^(d-k) colors^(2^(k-start-1)) / (a_k - 2) >= 1 / (d - start)`.
pub fn pinch_points(c: impl Into<BigUint>, grid: &Grid, rule: PinchRule) -> Result<PinchPointSet> {
    let c = c.into();
    if !grid.is_monotone() {
        return Err(Error::InvalidGrid(format!("{grid} is not monotone")));
    }
    let three = BigUint::from(3u32);
    if let Some(i) = grid.dims().iter().position(|a| *a < three) {
        return Err(Error::Premise(format!(
            "side {} of {grid} is below 3; not an obstruction for c >= 2",
            i + 1
        )));
    }
    let d = grid.dim();
    let dims = grid.dims();
    let mut points = Vec::new();
    let mut start = 0;
    let mut colors = c.clone();
    let mut volume_bound = BigUint::one();
    while start < d {
        let rest = grid.suffix(start)?;
        let rest_minus = rest.minus().expect("sides are at least 3");
        if epsilon(colors.clone(), &rest_minus)? < BigRational::one() {
            return Err(Error::Premise(format!(
                "eps_{colors}({rest_minus}) < 1, so {rest} is not an obstruction suffix"
            )));
        }
        let remaining = d - start;
        let bound_at = |k: usize| -> BigUint {
            let e = 1usize << (k - start - 1);
            BigUint::from(remaining) * (BigUint::one() << (d - k)) * num_traits::pow(colors.clone(), e)
        };
        let admissible = |k: usize| bound_at(k) >= &dims[k - 1] - 2u32;
        let mut candidates = (start + 1..=d).filter(|&k| admissible(k));
        let k = match rule {
            PinchRule::Largest => candidates.last(),
            PinchRule::Smallest => candidates.next(),
        }
        .ok_or_else(|| Error::Premise(format!("no admissible pinch point after {start}")))?;
        let side_bound = bound_at(k) + 2u32;
        volume_bound *= num_traits::pow(side_bound.clone(), k - start);
        points.push(PinchPoint {
            index: k,
            colors: colors.clone(),
            side_bound,
            volume_bound: volume_bound.clone(),
        });
        colors = &c * grid.prefix(k)?.box_count();
        start = k;
    }
    Ok(PinchPointSet {
        grid: grid.clone(),
        rule,
        points,
    })
}
