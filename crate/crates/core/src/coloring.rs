//! Colorings of grids, exact monochromatic-box counting and the text file format.
//!
//! File format (colors are 1-based on disk, 0-based in memory):
//!
//! ```text
//! # optional comments
//! grid 3 7
//! colors 2
//! 1 2 1 2 1 2 1
//! ...
//! ```
//!
//! Cells follow in row-major order, last coordinate fastest.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::grid::{boxes, flat_index, strides, unflatten, Grid, GridBox};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    grid: Grid,
    shape: Vec<usize>,
    colors: usize,
    cells: Vec<u32>,
}

impl Coloring {
    /// Builds a coloring from 0-based cell colors.
    pub fn new(grid: Grid, colors: usize, cells: Vec<u32>) -> Result<Self> {
        if colors == 0 {
            return Err(Error::OutOfRange("a coloring needs at least one color".into()));
        }
        let shape = grid.shape()?;
        let volume: usize = shape.iter().product();
        if cells.len() != volume {
            return Err(Error::CellCountMismatch {
                expected: volume,
                found: cells.len(),
            });
        }
        if let Some(&bad) = cells.iter().find(|&&k| k as usize >= colors) {
            return Err(Error::ColorOutOfRange {
                color: u64::from(bad) + 1,
                colors,
            });
        }
        Ok(Coloring {
            grid,
            shape,
            colors,
            cells,
        })
    }

    pub fn from_fn(grid: Grid, colors: usize, mut f: impl FnMut(&[usize]) -> u32) -> Result<Self> {
        let shape = grid.shape()?;
        let volume: usize = shape.iter().product();
        let cells = (0..volume).map(|i| f(&unflatten(&shape, i))).collect();
        Self::new(grid, colors, cells)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn get(&self, point: &[usize]) -> u32 {
        self.cells[flat_index(&strides(&self.shape), point)]
    }

    pub(crate) fn set_flat(&mut self, index: usize, color: u32) {
        debug_assert!((color as usize) < self.colors);
        self.cells[index] = color;
    }

    pub fn is_monochromatic(&self, b: &GridBox) -> bool {
        let st = strides(&self.shape);
        let mut corners = b.corners().map(|p| self.cells[flat_index(&st, &p)]);
        let first = corners.next().expect("a box has corners");
        corners.all(|k| k == first)
    }

    /// Exact number of monochromatic boxes.
    ///
    /// For every box `B` of the first `d - 1` axes, the fibers along the last
    /// axis through the corners of `B` are contiguous slices; `gamma_i(B)` counts
    /// the layers on which all of them read color `i`, and the layer pairs give
    /// `sum_i C(gamma_i(B), 2)` monochromatic `d`-boxes over `B`.
    pub fn count_monochromatic_boxes(&self) -> BigUint {
        BigUint::from(self.count_u128())
    }

    pub(crate) fn count_u128(&self) -> u128 {
        let d = self.shape.len();
        let last = self.shape[d - 1];
        if self.shape.iter().any(|&a| a < 2) {
            return 0;
        }
        let prefix = &self.shape[..d - 1];
        let prefix_strides = strides(prefix);
        let mut gamma = vec![0u64; self.colors];
        let mut total: u128 = 0;
        let tally = |fibers: &[&[u32]], gamma: &mut Vec<u64>| {
            gamma.iter_mut().for_each(|g| *g = 0);
            for j in 0..last {
                let k = fibers[0][j];
                if fibers[1..].iter().all(|f| f[j] == k) {
                    gamma[k as usize] += 1;
                }
            }
            gamma
                .iter()
                .map(|&g| u128::from(g) * u128::from(g.saturating_sub(1)) / 2)
                .sum::<u128>()
        };
        if d == 1 {
            total += tally(&[&self.cells[..]], &mut gamma);
            return total;
        }
        let mut fibers: Vec<&[u32]> = Vec::with_capacity(1 << (d - 1));
        for b in boxes(prefix) {
            fibers.clear();
            for corner in b.corners() {
                let start = flat_index(&prefix_strides, &corner) * last;
                fibers.push(&self.cells[start..start + last]);
            }
            total = total
                .checked_add(tally(&fibers, &mut gamma))
                .expect("box count fits in u128");
        }
        total
    }

    pub fn is_box_free(&self) -> bool {
        self.first_monochromatic_box().is_none()
    }

    /// The first monochromatic box in [`boxes`] order.
    pub fn first_monochromatic_box(&self) -> Option<GridBox> {
        boxes(&self.shape).find(|b| self.is_monochromatic(b))
    }

    pub fn monochromatic_boxes(&self) -> Vec<GridBox> {
        boxes(&self.shape).filter(|b| self.is_monochromatic(b)).collect()
    }

    /// Restriction to the corner sub-grid `[b_1] x ... x [b_d]`, `b_i <= a_i`.
    pub fn restrict(&self, sub: &Grid) -> Result<Coloring> {
        let sub_shape = sub.shape()?;
        if sub_shape.len() != self.shape.len() {
            return Err(Error::DimensionMismatch {
                left: sub_shape.len(),
                right: self.shape.len(),
            });
        }
        if sub_shape.iter().zip(&self.shape).any(|(b, a)| b > a) {
            return Err(Error::InvalidGrid(format!("{sub} does not fit in {}", self.grid)));
        }
        Coloring::from_fn(sub.clone(), self.colors, |p| self.get(p))
    }

    /// Drops the last hyperplane along the last axis.
    pub fn remove_last_layer(&self) -> Result<Coloring> {
        let d = self.shape.len();
        let last = self.shape[d - 1];
        if last < 2 {
            return Err(Error::InvalidGrid("cannot remove the only layer".into()));
        }
        let grid = self.grid.with_side(d - 1, BigUint::from(last - 1))?;
        let cells = self
            .cells
            .chunks(last)
            .flat_map(|fiber| fiber[..last - 1].iter().copied())
            .collect();
        Coloring::new(grid, self.colors, cells)
    }

    /// Same coloring with the axes sorted ascending by side length (stable).
    pub fn canonical_axes(&self) -> Coloring {
        let d = self.shape.len();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by_key(|&i| self.shape[i]);
        let grid = self.grid.canonicalize();
        Coloring::from_fn(grid, self.colors, |p| {
            let mut q = vec![0; d];
            for (k, &axis) in order.iter().enumerate() {
                q[axis] = p[k];
            }
            self.get(&q)
        })
        .expect("permuted coloring is valid")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("grid");
        for a in &self.shape {
            let _ = write!(out, " {a}");
        }
        let _ = write!(out, "\ncolors {}\n", self.colors);
        let last = *self.shape.last().expect("grid has a side");
        for fiber in self.cells.chunks(last) {
            let line: Vec<String> = fiber.iter().map(|k| (k + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Coloring> {
        let mut grid: Option<Grid> = None;
        let mut colors: Option<usize> = None;
        let mut raw: Vec<u64> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: line_no, msg };
            if grid.is_none() {
                let rest = line
                    .strip_prefix("grid")
                    .ok_or_else(|| parse_err("expected `grid <a1> ... <ad>` header".into()))?;
                grid = Some(rest.parse().map_err(|e: Error| parse_err(e.to_string()))?);
                continue;
            }
            if colors.is_none() {
                let rest = line
                    .strip_prefix("colors")
                    .ok_or_else(|| parse_err("expected `colors <c>` header".into()))?;
                let c: usize = rest
                    .trim()
                    .parse()
                    .map_err(|e| parse_err(format!("bad color count: {e}")))?;
                if c == 0 {
                    return Err(parse_err("color count must be positive".into()));
                }
                colors = Some(c);
                continue;
            }
            for tok in line.split_whitespace() {
                let v: u64 = tok
                    .parse()
                    .map_err(|e| parse_err(format!("bad cell {tok:?}: {e}")))?;
                raw.push(v);
            }
        }
        let grid = grid.ok_or(Error::Parse {
            line: 0,
            msg: "missing grid header".into(),
        })?;
        let colors = colors.ok_or(Error::Parse {
            line: 0,
            msg: "missing colors header".into(),
        })?;
        if let Some(&bad) = raw.iter().find(|&&v| v == 0 || v > colors as u64) {
            return Err(Error::ColorOutOfRange { color: bad, colors });
        }
        let cells = raw.into_iter().map(|v| (v - 1) as u32).collect();
        Coloring::new(grid, colors, cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(s: &[u64]) -> Grid {
        Grid::from_sides(s).unwrap()
    }

    #[test]
    fn one_dimensional_pairs() {
        let f = Coloring::new(grid(&[4]), 2, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(f.count_monochromatic_boxes(), BigUint::from(2u32));
    }

    #[test]
    fn all_one_square() {
        let f = Coloring::new(grid(&[2, 2]), 1, vec![0; 4]).unwrap();
        assert_eq!(f.count_monochromatic_boxes(), BigUint::from(1u32));
    }

    #[test]
    fn thin_grids_have_no_boxes() {
        let f = Coloring::new(grid(&[1, 5]), 1, vec![0; 5]).unwrap();
        assert_eq!(f.count_monochromatic_boxes(), BigUint::from(0u32));
        assert!(f.is_box_free());
    }

    #[test]
    fn parse_rejects_bad_files() {
        let over = "grid 2 2\ncolors 2\n1 2\n2 3\n";
        assert_eq!(
            Coloring::parse(over),
            Err(Error::ColorOutOfRange { color: 3, colors: 2 })
        );
        let short = "grid 2 2\ncolors 2\n1 2 1\n";
        assert_eq!(
            Coloring::parse(short),
            Err(Error::CellCountMismatch {
                expected: 4,
                found: 3
            })
        );
        assert!(matches!(
            Coloring::parse("colors 2\ngrid 2 2\n1 1 1 1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(Coloring::parse("# nothing"), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_skips_comments() {
        let text = "# witness\ngrid 2 3\n# c\ncolors 3\n1 2 3\n3 2 1\n";
        let f = Coloring::parse(text).unwrap();
        assert_eq!(f.cells(), &[0, 1, 2, 2, 1, 0]);
        assert_eq!(f.to_text(), "grid 2 3\ncolors 3\n1 2 3\n3 2 1\n");
    }

    #[test]
    fn remove_and_restrict() {
        let f = Coloring::from_fn(grid(&[2, 3]), 3, |p| p[1] as u32).unwrap();
        let g = f.remove_last_layer().unwrap();
        assert_eq!(g.grid(), &grid(&[2, 2]));
        assert_eq!(g.cells(), &[0, 1, 0, 1]);
        let h = f.restrict(&grid(&[1, 3])).unwrap();
        assert_eq!(h.cells(), &[0, 1, 2]);
        assert!(f.restrict(&grid(&[3, 3])).is_err());
    }

    #[test]
    fn canonical_axes_preserves_count() {
        let f = Coloring::from_fn(grid(&[5, 3]), 2, |p| ((p[0] * 7 + p[1] * 3) % 5 % 2) as u32)
            .unwrap();
        let g = f.canonical_axes();
        assert_eq!(g.grid(), &grid(&[3, 5]));
        assert_eq!(g.count_monochromatic_boxes(), f.count_monochromatic_boxes());
    }
}
