//! The column-type matrix `M_r` of two-colored `r x s` grids and its quadratic form.
//!
//! Index `j` encodes the column `f_j : [r] -> [2]` with bit `k` set when row
//! `k` has the second color. The entry `M_r[i][j]` counts rectangles between
//! one column of type `i` and one of type `j`; for a vector `v` of column
//! multiplicities, `v^T M v - v . diag` is twice the rectangle count.

mod minimize;
mod spectrum;

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::grid::Grid;

pub use minimize::{min_rectangles, QMinOutcome, MAX_MIN_ROWS};
pub use spectrum::{
    MAX_SPECTRUM_ROWS,
    conjectured_spectrum, psd_check, spectrum, trace_formula, EigenPair, SpectrumReport,
};

pub const MAX_ROWS: usize = 16;

#[inline]
pub(crate) fn pairs(n: u32) -> u64 {
    u64::from(n) * u64::from(n.saturating_sub(1)) / 2
}

/// `M_r` with entries computed on demand, and its diagonal `delta_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFormInstance {
    r: usize,
    mask: u32,
    diag: Vec<u64>,
}

pub fn build_matrix(r: usize) -> Result<QFormInstance> {
    if r == 0 || r > MAX_ROWS {
        return Err(Error::OutOfRange(format!("r must be in 1..={MAX_ROWS}, got {r}")));
    }
    let mask = ((1u64 << r) - 1) as u32;
    let diag = (0..1u32 << r)
        .map(|i| pairs(i.count_ones()) + pairs(r as u32 - i.count_ones()))
        .collect();
    Ok(QFormInstance { r, mask, diag })
}

impl QFormInstance {
    pub fn r(&self) -> usize {
        self.r
    }

    /// `2^r`.
    pub fn size(&self) -> usize {
        1 << self.r
    }

    /// `C(|f_i^-1(1) & f_j^-1(1)|, 2) + C(|f_i^-1(2) & f_j^-1(2)|, 2)`.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        let (i, j) = (i as u32, j as u32);
        pairs((!i & !j & self.mask).count_ones()) + pairs((i & j).count_ones())
    }

    pub fn diag(&self) -> &[u64] {
        &self.diag
    }

    /// Dense row-major copy; `r <= 12`.
    pub fn dense(&self) -> Result<Vec<u64>> {
        if self.r > 12 {
            return Err(Error::TooLarge(format!("dense M_{} has 4^{} entries", self.r, self.r)));
        }
        let n = self.size();
        Ok((0..n * n).map(|k| self.entry(k / n, k % n)).collect())
    }

    /// Plain text: `r` on the first line, then one line per row.
    pub fn to_text(&self) -> Result<String> {
        let n = self.size();
        let dense = self.dense()?;
        let mut out = format!("{}\n", self.r);
        for row in dense.chunks(n) {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                write!(out, "{v}").unwrap();
            }
            out.push('\n');
        }
        Ok(out)
    }
}

/// `v^T M_r v - v . delta_r`, exactly.
pub fn qform_penalized(inst: &QFormInstance, v: &[u64]) -> Result<BigUint> {
    if v.len() != inst.size() {
        return Err(Error::DimensionMismatch {
            left: v.len(),
            right: inst.size(),
        });
    }
    let support: Vec<usize> = (0..v.len()).filter(|&i| v[i] > 0).collect();
    let mut total = BigUint::default();
    for &i in &support {
        let vi = u128::from(v[i]);
        total += BigUint::from(vi * vi.saturating_sub(1) * u128::from(inst.diag[i]));
        for &j in &support {
            if j > i {
                total += BigUint::from(2 * vi * u128::from(v[j]) * u128::from(inst.entry(i, j)));
            }
        }
    }
    Ok(total)
}

/// The `r x s` coloring with `v_j` columns of type `f_j`, types in increasing order.
pub fn coloring_from_vector(r: usize, v: &[u64]) -> Result<Coloring> {
    if r == 0 || r > MAX_ROWS || v.len() != 1 << r {
        return Err(Error::OutOfRange(format!("vector of length {} for r = {r}", v.len())));
    }
    let cols: Vec<usize> = (0..v.len())
        .flat_map(|j| std::iter::repeat(j).take(v[j] as usize))
        .collect();
    if cols.is_empty() {
        return Err(Error::OutOfRange("the vector has no columns".into()));
    }
    let grid = Grid::from_sides(&[r as u64, cols.len() as u64])?;
    Coloring::from_fn(grid, 2, |p| (cols[p[1]] >> p[0] & 1) as u32)
}
