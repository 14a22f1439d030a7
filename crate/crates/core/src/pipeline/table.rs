//! Upper bounds on the least `a3` making `[a1, a2, a3]` 2-guaranteed.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::cert::{Certificate, Method};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::search::SearchBudget;

use super::{best_t, least_a3_delta, product_extension, BestT, TSource};

/// Previously published bounds for `3 <= a1, a2 <= 12`; 0 marks a blank cell.
const PUBLISHED: [[u16; 10]; 10] = [
    [0, 0, 0, 0, 127, 85, 73, 68, 67, 67],
    [0, 0, 0, 0, 127, 85, 73, 68, 67, 67],
    [0, 0, 101, 76, 53, 47, 46, 46, 40, 37],
    [0, 0, 76, 76, 53, 47, 46, 46, 40, 37],
    [127, 127, 53, 53, 53, 46, 40, 37, 34, 33],
    [85, 85, 47, 47, 46, 45, 40, 37, 34, 33],
    [73, 73, 46, 46, 40, 40, 37, 34, 31, 30],
    [68, 68, 46, 46, 37, 37, 34, 33, 31, 30],
    [67, 67, 40, 40, 34, 34, 31, 31, 30, 28],
    [67, 67, 37, 37, 33, 33, 30, 30, 28, 28],
];

/// The published bound for cell `(a1, a2)`, if that cell is filled.
pub fn published_a3(a1: u64, a2: u64) -> Option<u64> {
    if !(3..=12).contains(&a1) || !(3..=12).contains(&a2) {
        return None;
    }
    let v = PUBLISHED[(a1 - 3) as usize][(a2 - 3) as usize];
    (v > 0).then_some(u64::from(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellMethod {
    Product,
    Delta,
    Dominance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundTableEntry {
    pub a1: u64,
    pub a2: u64,
    /// Blank when no method produced a bound.
    pub a3_bound: Option<u64>,
    pub method: Option<CellMethod>,
    pub t_used: Option<u64>,
    pub t_source: Option<TSource>,
    /// The exact minimum rectangle count of `[a1, a2]` was found.
    pub t_exact: bool,
    /// Source cell of a dominance bound.
    pub from: Option<(u64, u64)>,
    pub published: Option<u64>,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct A3Table {
    pub c: u64,
    pub a1_values: Vec<u64>,
    pub a2_values: Vec<u64>,
    /// Row-major over `a1_values x a2_values`.
    pub cells: Vec<BoundTableEntry>,
}

/// Fills every cell with the least of: the product extension with the best
/// known `t`, the least `a3` certified by the count bound, and bounds implied
/// by other cells through dominance and permutation of the sides.
pub fn a3_table(
    a1_range: RangeInclusive<u64>,
    a2_range: RangeInclusive<u64>,
    budget: &SearchBudget,
) -> Result<A3Table> {
    if *a1_range.start() < 2 || *a2_range.start() < 2 {
        return Err(Error::OutOfRange("table sides start at 2".into()));
    }
    let a1_values: Vec<u64> = a1_range.collect();
    let a2_values: Vec<u64> = a2_range.collect();
    let mut ts: BTreeMap<(u64, u64), BestT> = BTreeMap::new();
    let mut cells = Vec::with_capacity(a1_values.len() * a2_values.len());
    for &a1 in &a1_values {
        for &a2 in &a2_values {
            let key = (a1.min(a2), a1.max(a2));
            if !ts.contains_key(&key) {
                ts.insert(key, best_t(&Grid::from_sides(&[key.0, key.1])?, budget)?);
            }
            cells.push(own_bound(a1, a2, &ts[&key])?);
        }
    }
    dominance_closure(&mut cells);
    Ok(A3Table {
        c: 2,
        a1_values,
        a2_values,
        cells,
    })
}

fn own_bound(a1: u64, a2: u64, bt: &BestT) -> Result<BoundTableEntry> {
    let mut entry = BoundTableEntry {
        a1,
        a2,
        a3_bound: None,
        method: None,
        t_used: None,
        t_source: None,
        t_exact: bt.exact.is_some(),
        from: None,
        published: published_a3(a1, a2),
        certificate: None,
    };
    if bt.t >= 1 {
        let mut base = bt.certificate.clone();
        if base.grid.dims()[0] != BigUint::from(a1) {
            base.grid = Grid::from_sides(&[a1, a2])?;
        }
        let (k, cert) = product_extension(&base)?;
        entry.a3_bound = Some(k.to_u64().ok_or(Error::Overflow("product bound"))?);
        entry.method = Some(CellMethod::Product);
        entry.t_used = Some(bt.t);
        entry.t_source = Some(bt.source);
        entry.certificate = Some(cert);
    }
    if let Some((a3, cert)) = least_a3_delta(2, a1, a2)? {
        if entry.a3_bound.map_or(true, |b| a3 < b) {
            entry.a3_bound = Some(a3);
            entry.method = Some(CellMethod::Delta);
            entry.t_used = None;
            entry.t_source = None;
            entry.certificate = Some(cert);
        }
    }
    Ok(entry)
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// `[x, y, b]` guaranteed implies every grid dominating a permutation of it is.
fn dominance_closure(cells: &mut [BoundTableEntry]) {
    loop {
        let mut changed = false;
        for i in 0..cells.len() {
            for j in 0..cells.len() {
                let Some(b) = cells[j].a3_bound else { continue };
                let triple = [cells[j].a1, cells[j].a2, b];
                let (a1, a2) = (cells[i].a1, cells[i].a2);
                for perm in PERMUTATIONS {
                    let [p, q, r] = perm.map(|k| triple[k]);
                    if p > a1 || q > a2 || cells[i].a3_bound.is_some_and(|cur| r >= cur) {
                        continue;
                    }
                    let source = cells[j].certificate.clone();
                    let grid = Grid::from_sides(&[a1, a2, r]).expect("sides are positive");
                    let mut cert = Certificate::guaranteed(Method::Dominance, grid, 2u32)
                        .with_param("from", format!("{p}x{q}x{r}"));
                    if let Some(source) = source {
                        cert = cert.with_sub(source);
                    }
                    let cell = &mut cells[i];
                    cell.a3_bound = Some(r);
                    cell.method = Some(CellMethod::Dominance);
                    cell.t_used = None;
                    cell.t_source = None;
                    cell.from = Some((triple[0], triple[1]));
                    cell.certificate = Some(cert);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

impl A3Table {
    pub fn get(&self, a1: u64, a2: u64) -> Option<&BoundTableEntry> {
        self.cells.iter().find(|e| e.a1 == a1 && e.a2 == a2)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("a1,a2,a3_bound,method,t_used,t_source,published\n");
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        for e in &self.cells {
            let method = match e.method {
                Some(CellMethod::Product) => "product",
                Some(CellMethod::Delta) => "delta",
                Some(CellMethod::Dominance) => "dominance",
                None => "",
            };
            let source = match e.t_source {
                Some(TSource::Qform) => "qform",
                Some(TSource::CeilingDelta) => "ceiling-delta",
                Some(TSource::Exhaustive) => "exhaustive",
                None => "",
            };
            writeln!(
                out,
                "{},{},{},{method},{},{source},{}",
                e.a1,
                e.a2,
                opt(e.a3_bound),
                opt(e.t_used),
                opt(e.published)
            )
            .unwrap();
        }
        out
    }

    /// Aligned text grid, blank where no bound was found.
    pub fn to_markdown(&self) -> String {
        let width = self
            .cells
            .iter()
            .filter_map(|e| e.a3_bound)
            .chain(self.a1_values.iter().copied())
            .chain(self.a2_values.iter().copied())
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        let mut out = format!("| {:>width$} |", "");
        for a2 in &self.a2_values {
            write!(out, " {a2:>width$} |").unwrap();
        }
        out.push_str("\n|");
        for _ in 0..=self.a2_values.len() {
            write!(out, "{}|", "-".repeat(width + 2)).unwrap();
        }
        out.push('\n');
        for (row, a1) in self.a1_values.iter().enumerate() {
            write!(out, "| {a1:>width$} |").unwrap();
            for col in 0..self.a2_values.len() {
                let e = &self.cells[row * self.a2_values.len() + col];
                let v = e.a3_bound.map(|v| v.to_string()).unwrap_or_default();
                write!(out, " {v:>width$} |").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// `a1,a2,a3_bound` triples for the filled cells.
    pub fn surface_csv(&self) -> String {
        let mut out = String::from("a1,a2,a3_bound\n");
        for e in &self.cells {
            if let Some(b) = e.a3_bound {
                writeln!(out, "{},{},{b}", e.a1, e.a2).unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table() {
        let table = a3_table(3..=5, 3..=7, &SearchBudget::new(u64::MAX, 60)).unwrap();
        let at = |a1, a2| table.get(a1, a2).unwrap().a3_bound;
        assert_eq!(at(3, 7), Some(127));
        assert_eq!(at(4, 7), Some(127));
        assert_eq!(at(5, 5), Some(101));
        assert_eq!(at(5, 6), Some(76));
        for a2 in 3..=6 {
            assert_eq!(at(3, a2), None);
            assert_eq!(at(4, a2), None);
        }
        assert_eq!(at(5, 3), None);
        assert_eq!(at(5, 4), None);
        let e = table.get(3, 7).unwrap();
        assert_eq!((e.method, e.t_used), (Some(CellMethod::Product), Some(1)));
        assert!(table.to_csv().contains("\n3,7,127,product,1,qform,127\n"));
        assert!(table.surface_csv().starts_with("a1,a2,a3_bound\n3,7,127\n"));
        let md = table.to_markdown();
        assert_eq!(md.lines().count(), 5);
    }

    #[test]
    fn dominance_fills_a_larger_cell() {
        let mut cells = vec![
            BoundTableEntry {
                a1: 3,
                a2: 7,
                a3_bound: Some(127),
                method: Some(CellMethod::Product),
                t_used: Some(1),
                t_source: Some(TSource::Qform),
                t_exact: true,
                from: None,
                published: None,
                certificate: None,
            },
            BoundTableEntry {
                a1: 9,
                a2: 3,
                a3_bound: Some(200),
                method: Some(CellMethod::Delta),
                t_used: None,
                t_source: None,
                t_exact: false,
                from: None,
                published: None,
                certificate: None,
            },
        ];
        dominance_closure(&mut cells);
        assert_eq!(cells[1].a3_bound, Some(127));
        assert_eq!(cells[1].method, Some(CellMethod::Dominance));
        assert_eq!(cells[1].from, Some((3, 7)));
        assert_eq!(cells[0].a3_bound, Some(127));
    }

    #[test]
    fn published_lookup() {
        assert_eq!(published_a3(3, 7), Some(127));
        assert_eq!(published_a3(8, 8), Some(45));
        assert_eq!(published_a3(12, 12), Some(28));
        assert_eq!(published_a3(4, 4), None);
        assert_eq!(published_a3(13, 3), None);
    }
}
