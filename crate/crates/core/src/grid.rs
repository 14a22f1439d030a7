//! Grids `[a_1] x ... x [a_d]`, combinatorial boxes and the dominance order.
//!
//! Side lengths are arbitrary-precision so that closed-form constructions with
//! doubly exponential sides can be represented; anything that materializes a
//! coloring converts to machine sizes through [`Grid::shape`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A `d`-dimensional grid given by its side lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grid {
    dims: Vec<BigUint>,
}

impl Grid {
    pub fn new(dims: Vec<BigUint>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidGrid("a grid needs at least one side".into()));
        }
        if let Some(i) = dims.iter().position(Zero::is_zero) {
            return Err(Error::SideTooSmall {
                index: i + 1,
                value: "0".into(),
                min: 1,
            });
        }
        Ok(Grid { dims })
    }

    pub fn from_sides(sides: &[u64]) -> Result<Self> {
        Self::new(sides.iter().map(|&a| BigUint::from(a)).collect())
    }

    pub fn dims(&self) -> &[BigUint] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn volume(&self) -> BigUint {
        self.dims.iter().product()
    }

    /// Side lengths as machine integers, when the whole grid can be stored.
    pub fn shape(&self) -> Result<Vec<usize>> {
        let shape: Option<Vec<usize>> = self.dims.iter().map(ToPrimitive::to_usize).collect();
        let shape = shape.ok_or_else(|| Error::TooLarge(format!("grid {self} has a huge side")))?;
        let mut volume: usize = 1;
        for &a in &shape {
            volume = volume
                .checked_mul(a)
                .ok_or_else(|| Error::TooLarge(format!("volume of {self} overflows")))?;
        }
        Ok(shape)
    }

    /// Number of boxes, `prod C(a_i, 2)`.
    pub fn box_count(&self) -> BigUint {
        self.dims.iter().map(choose2).product()
    }

    /// Sides sorted ascending.
    pub fn canonicalize(&self) -> Grid {
        let mut dims = self.dims.clone();
        dims.sort();
        Grid { dims }
    }

    pub fn is_monotone(&self) -> bool {
        self.dims.windows(2).all(|w| w[0] <= w[1])
    }

    /// `self ⪯ other` after sorting both side lists.
    pub fn dominance_leq(&self, other: &Grid) -> Result<bool> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let a = self.canonicalize();
        let b = other.canonicalize();
        Ok(a.dims.iter().zip(&b.dims).all(|(x, y)| x <= y))
    }

    /// `R^-`: subtract one from the first side attaining the maximum.
    pub fn minus(&self) -> Option<Grid> {
        let canon = self.canonicalize();
        let max = canon.dims.last()?.clone();
        if max <= BigUint::one() {
            return None;
        }
        let j = canon.dims.iter().position(|a| *a == max)?;
        let mut dims = canon.dims;
        dims[j] -= 1u32;
        Some(Grid { dims })
    }

    /// Prefix grid `R_j = [a_1, ..., a_j]`.
    pub fn prefix(&self, j: usize) -> Result<Grid> {
        if j == 0 || j > self.dim() {
            return Err(Error::OutOfRange(format!("prefix length {j} for d = {}", self.dim())));
        }
        Ok(Grid {
            dims: self.dims[..j].to_vec(),
        })
    }

    /// Suffix grid `[a_{j+1}, ..., a_d]`.
    pub fn suffix(&self, j: usize) -> Result<Grid> {
        if j >= self.dim() {
            return Err(Error::OutOfRange(format!("suffix after {j} for d = {}", self.dim())));
        }
        Ok(Grid {
            dims: self.dims[j..].to_vec(),
        })
    }

    /// Concatenation `self x other`.
    pub fn product(&self, other: &Grid) -> Grid {
        let mut dims = self.dims.clone();
        dims.extend(other.dims.iter().cloned());
        Grid { dims }
    }

    pub fn with_side(&self, index: usize, side: BigUint) -> Result<Grid> {
        let mut dims = self.dims.clone();
        *dims
            .get_mut(index)
            .ok_or_else(|| Error::OutOfRange(format!("axis {index}")))? = side;
        Grid::new(dims)
    }

    pub fn min_side(&self) -> &BigUint {
        self.dims.iter().min().expect("grid has at least one side")
    }

    /// Monotone grids obtained by decrementing one side, deduplicated.
    /// Sides of length one cannot be decremented.
    pub fn decrements(&self) -> Vec<Grid> {
        let mut out: Vec<Grid> = Vec::new();
        for i in 0..self.dim() {
            if self.dims[i] <= BigUint::one() {
                continue;
            }
            let mut dims = self.dims.clone();
            dims[i] -= 1u32;
            let g = Grid { dims }.canonicalize();
            if !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }
}

pub(crate) fn choose2(a: &BigUint) -> BigUint {
    if *a < BigUint::from(2u32) {
        BigUint::zero()
    } else {
        a * (a - 1u32) / 2u32
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.dims.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Parses `AxBxC`; commas and spaces are accepted as separators too.
impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let dims: std::result::Result<Vec<BigUint>, _> = s
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(|ch: char| ch == 'x' || ch == 'X' || ch == ',' || ch.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(BigUint::from_str)
            .collect();
        let dims = dims.map_err(|e| Error::InvalidGrid(format!("{s:?}: {e}")))?;
        Grid::new(dims)
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A box: anchor point plus a positive offset on every axis (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridBox {
    pub anchor: Vec<usize>,
    pub offsets: Vec<usize>,
}

impl GridBox {
    /// The box spanned by hyperplane pairs `(lo_i, hi_i)`, `lo_i < hi_i`.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        GridBox {
            anchor: pairs.iter().map(|p| p.0).collect(),
            offsets: pairs.iter().map(|p| p.1 - p.0).collect(),
        }
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.anchor
            .iter()
            .zip(&self.offsets)
            .map(|(&x, &s)| (x, x + s))
            .collect()
    }

    /// All `2^d` corners; bit `i` of the corner index selects the far side on axis `i`.
    pub fn corners(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let d = self.anchor.len();
        (0..1usize << d).map(move |mask| {
            (0..d)
                .map(|i| self.anchor[i] + if mask >> i & 1 == 1 { self.offsets[i] } else { 0 })
                .collect()
        })
    }

    pub fn fits(&self, shape: &[usize]) -> bool {
        self.anchor.len() == shape.len()
            && self
                .anchor
                .iter()
                .zip(&self.offsets)
                .zip(shape)
                .all(|((&x, &s), &a)| s >= 1 && x + s < a)
    }
}

/// Iterates all boxes of a grid shape in lexicographic order of their
/// hyperplane pairs, axis 0 most significant.
#[derive(Clone, Debug)]
pub struct Boxes {
    shape: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    done: bool,
}

pub fn boxes(shape: &[usize]) -> Boxes {
    let done = shape.is_empty() || shape.iter().any(|&a| a < 2);
    Boxes {
        shape: shape.to_vec(),
        pairs: vec![(0, 1); shape.len()],
        done,
    }
}

impl Iterator for Boxes {
    type Item = GridBox;

    fn next(&mut self) -> Option<GridBox> {
        if self.done {
            return None;
        }
        let out = GridBox::from_pairs(&self.pairs);
        let mut axis = self.pairs.len();
        loop {
            if axis == 0 {
                self.done = true;
                break;
            }
            axis -= 1;
            let a = self.shape[axis];
            let (lo, hi) = self.pairs[axis];
            if hi + 1 < a {
                self.pairs[axis] = (lo, hi + 1);
                break;
            }
            if lo + 2 < a {
                self.pairs[axis] = (lo + 1, lo + 2);
                break;
            }
            self.pairs[axis] = (0, 1);
        }
        Some(out)
    }
}

/// Row-major strides (last coordinate fastest).
pub fn strides(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * shape[i + 1];
    }
    strides
}

pub fn flat_index(strides: &[usize], point: &[usize]) -> usize {
    strides.iter().zip(point).map(|(s, x)| s * x).sum()
}

pub fn unflatten(shape: &[usize], mut index: usize) -> Vec<usize> {
    let mut point = vec![0; shape.len()];
    for i in (0..shape.len()).rev() {
        point[i] = index % shape[i];
        index /= shape[i];
    }
    point
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &[u64]) -> Grid {
        Grid::from_sides(s).unwrap()
    }

    #[test]
    fn box_count_examples() {
        assert_eq!(g(&[5, 5]).box_count(), BigUint::from(100u32));
        assert_eq!(g(&[3, 7]).box_count(), BigUint::from(63u32));
        assert_eq!(g(&[9, 1]).box_count(), BigUint::zero());
    }

    #[test]
    fn dominance_examples() {
        assert!(g(&[3, 7]).dominance_leq(&g(&[4, 7])).unwrap());
        assert!(!g(&[5, 5]).dominance_leq(&g(&[3, 7])).unwrap());
        assert!(g(&[3, 7]).dominance_leq(&g(&[7, 3])).unwrap());
        assert_eq!(
            g(&[3, 7]).dominance_leq(&g(&[3, 7, 2])),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(g(&[7, 3]).canonicalize(), g(&[3, 7]));
        assert_eq!(g(&[5, 5]).canonicalize(), g(&[5, 5]));
        assert_eq!(g(&[12, 3, 7]).canonicalize(), g(&[3, 7, 12]));
    }

    #[test]
    fn minus_takes_first_maximal_side() {
        assert_eq!(g(&[3, 7]).minus(), Some(g(&[3, 6])));
        assert_eq!(g(&[5, 5]).minus(), Some(g(&[4, 5])));
        assert_eq!(g(&[1, 1]).minus(), None);
    }

    #[test]
    fn parse_and_display() {
        let grid: Grid = "3x7x127".parse().unwrap();
        assert_eq!(grid, g(&[3, 7, 127]));
        assert_eq!(grid.to_string(), "3x7x127");
        assert!("3x0".parse::<Grid>().is_err());
        assert!("".parse::<Grid>().is_err());
        assert!("3xq".parse::<Grid>().is_err());
    }

    #[test]
    fn boxes_iterator_counts() {
        assert_eq!(boxes(&[5, 5]).count(), 100);
        assert_eq!(boxes(&[3, 7]).count(), 63);
        assert_eq!(boxes(&[4, 1]).count(), 0);
        let first: Vec<_> = boxes(&[3, 3]).take(4).map(|b| b.pairs()).collect();
        assert_eq!(
            first,
            vec![
                vec![(0, 1), (0, 1)],
                vec![(0, 1), (0, 2)],
                vec![(0, 1), (1, 2)],
                vec![(0, 2), (0, 1)]
            ]
        );
    }

    #[test]
    fn huge_side_has_no_shape() {
        let grid: Grid = "3x100000000000000000000000".parse().unwrap();
        assert!(matches!(grid.shape(), Err(Error::TooLarge(_))));
        assert_eq!(grid.volume().to_string(), "300000000000000000000000");
    }
}
