use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cert::{Certificate, Method};
use crate::error::{Error, Result};
use crate::grid::{choose2, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Delta,
    Gamma,
    Epsilon,
}

/// Exact terms `0..=d` of one of the certifying recurrences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalBoundSequence {
    pub kind: SequenceKind,
    pub c: BigUint,
    pub terms: Vec<BigRational>,
}

impl RationalBoundSequence {
    pub fn last(&self) -> &BigRational {
        self.terms.last().expect("sequence has term 0")
    }

    /// Delta/Gamma: every term after the first is positive. Epsilon: last term below one.
    pub fn certifies_guarantee(&self) -> bool {
        match self.kind {
            SequenceKind::Delta | SequenceKind::Gamma => {
                self.terms[1..].iter().all(|t| t.is_positive())
            }
            SequenceKind::Epsilon => *self.last() < BigRational::one(),
        }
    }

    pub fn terms_as_strings(&self) -> Vec<String> {
        self.terms.iter().map(ToString::to_string).collect()
    }
}

pub(crate) fn ratio(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Sides as exact rationals, each required to be at least 2.
fn sides_at_least_two(grid: &Grid) -> Result<Vec<BigUint>> {
    let two = BigUint::from(2u32);
    for (i, a) in grid.dims().iter().enumerate() {
        if *a < two {
            return Err(Error::SideTooSmall {
                index: i + 1,
                value: a.to_string(),
                min: 2,
            });
        }
    }
    Ok(grid.dims().to_vec())
}

/// `c^(2^(j-1))` for `j = 1..=d`, by repeated squaring.
fn doubling_powers(c: &BigUint, d: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(d);
    let mut p = c.clone();
    for _ in 0..d {
        out.push(p.clone());
        p = &p * &p;
    }
    out
}

/// `Delta_j = Delta_{j-1} (Delta_{j-1} - (c^(2^(j-1)) - Delta_{j-1}) / (a_j - 1))`,
/// the division-free form of the box-count recurrence.
pub fn delta_sequence(c: impl Into<BigUint>, grid: &Grid) -> Result<RationalBoundSequence> {
    let c = c.into();
    let sides = sides_at_least_two(grid)?;
    let powers = doubling_powers(&c, sides.len());
    let mut terms = vec![BigRational::one()];
    for (a, p) in sides.iter().zip(&powers) {
        let prev = terms.last().unwrap().clone();
        let a1 = ratio(&(a - 1u32));
        let next = &prev * (&prev - (ratio(p) - &prev) / a1);
        terms.push(next);
    }
    Ok(RationalBoundSequence {
        kind: SequenceKind::Delta,
        c,
        terms,
    })
}

/// `Gamma_j = Gamma_{j-1} (Gamma_{j-1} - c^(2^(j-1)) / (a_j - 1))`.
pub fn gamma_sequence(c: impl Into<BigUint>, grid: &Grid) -> Result<RationalBoundSequence> {
    let c = c.into();
    let sides = sides_at_least_two(grid)?;
    let powers = doubling_powers(&c, sides.len());
    let mut terms = vec![BigRational::one()];
    for (a, p) in sides.iter().zip(&powers) {
        let prev = terms.last().unwrap().clone();
        let next = &prev * (&prev - ratio(p) / ratio(&(a - 1u32)));
        terms.push(next);
    }
    Ok(RationalBoundSequence {
        kind: SequenceKind::Gamma,
        c,
        terms,
    })
}

/// `eps_j = 2 eps_{j-1} + c^(2^(j-1)) / (a_j - 1)`; the last term is `eps_c(R)`.
pub fn epsilon_sequence(c: impl Into<BigUint>, grid: &Grid) -> Result<RationalBoundSequence> {
    let c = c.into();
    let sides = sides_at_least_two(grid)?;
    let powers = doubling_powers(&c, sides.len());
    let two = BigRational::from_integer(2.into());
    let mut terms = vec![BigRational::zero()];
    for (a, p) in sides.iter().zip(&powers) {
        let prev = terms.last().unwrap();
        let next = &two * prev + ratio(p) / ratio(&(a - 1u32));
        terms.push(next);
    }
    Ok(RationalBoundSequence {
        kind: SequenceKind::Epsilon,
        c,
        terms,
    })
}

/// `eps_c(R) = sum_i 2^(d-i) c^(2^(i-1)) / (a_i - 1)`, summed directly.
pub fn epsilon(c: impl Into<BigUint>, grid: &Grid) -> Result<BigRational> {
    let c = c.into();
    let sides = sides_at_least_two(grid)?;
    let d = sides.len();
    let powers = doubling_powers(&c, d);
    Ok(sides
        .iter()
        .zip(&powers)
        .enumerate()
        .map(|(i, (a, p))| {
            let weight = BigUint::one() << (d - 1 - i);
            ratio(&(weight * p)) / ratio(&(a - 1u32))
        })
        .sum())
}

/// Lower bound on the number of monochromatic boxes in every `c`-coloring.
///
/// Without ceilings this is `M Delta_d / c^(2^d - 1)` (only when every `Delta_j`
/// is positive). With ceilings the per-dimension bound `L_j` is rounded up to an
/// integer before it feeds the next dimension:
/// `L_j = S (S - M_{j-1} c) / (2 M_{j-1} c)` with `S = a_j L_{j-1}`, `L_0 = 1`.
pub fn guaranteed_count_lower_bound(
    c: impl Into<BigUint>,
    grid: &Grid,
    use_ceiling: bool,
) -> Result<Option<BigRational>> {
    let c = c.into();
    if !use_ceiling {
        let delta = delta_sequence(c.clone(), grid)?;
        if !delta.certifies_guarantee() {
            return Ok(None);
        }
        let d = grid.dim();
        let exponent = (1usize << d) - 1;
        let denom = num_traits::pow(c, exponent);
        let value = ratio(&grid.box_count()) * delta.last() / ratio(&denom);
        return Ok(Some(value));
    }
    let sides = sides_at_least_two(grid)?;
    let cq = ratio(&c);
    let mut bound = BigRational::one();
    let mut boxes = BigUint::one();
    for a in &sides {
        let s = ratio(a) * &bound;
        let mc = ratio(&boxes) * &cq;
        let next = &s * (&s - &mc) / (BigRational::from_integer(2.into()) * &mc);
        if !next.is_positive() {
            return Ok(None);
        }
        bound = next.ceil();
        boxes *= choose2(a);
    }
    Ok(Some(bound))
}

/// `a_j = (d+1) 2^(d-j) c^(2^(j-1)) + 1`, the grid on which `eps_c = d/(d+1)`.
pub fn corollary_grid(c: impl Into<BigUint>, d: usize) -> Result<Grid> {
    let c = c.into();
    if c < BigUint::from(2u32) || d == 0 {
        return Err(Error::OutOfRange(format!("need c >= 2 and d >= 1, got c = {c}, d = {d}")));
    }
    let powers = doubling_powers(&c, d);
    let dims = powers
        .iter()
        .enumerate()
        .map(|(i, p)| BigUint::from(d + 1) * (BigUint::one() << (d - 1 - i)) * p + 1u32)
        .collect();
    Grid::new(dims)
}

fn sequence_certificate(seq: &RationalBoundSequence, method: Method, grid: &Grid) -> Certificate {
    Certificate::guaranteed(method, grid.clone(), seq.c.clone())
        .with_param("terms", seq.terms_as_strings())
}

pub fn delta_certificate(c: impl Into<BigUint>, grid: &Grid) -> Result<Option<Certificate>> {
    let seq = delta_sequence(c, grid)?;
    Ok(seq
        .certifies_guarantee()
        .then(|| sequence_certificate(&seq, Method::Delta, grid)))
}

pub fn gamma_certificate(c: impl Into<BigUint>, grid: &Grid) -> Result<Option<Certificate>> {
    let seq = gamma_sequence(c, grid)?;
    Ok(seq
        .certifies_guarantee()
        .then(|| sequence_certificate(&seq, Method::Gamma, grid)))
}

pub fn epsilon_certificate(c: impl Into<BigUint>, grid: &Grid) -> Result<Option<Certificate>> {
    let seq = epsilon_sequence(c, grid)?;
    Ok(seq
        .certifies_guarantee()
        .then(|| sequence_certificate(&seq, Method::Epsilon, grid)))
}

/// `(c, t)`-guarantee from the ceiling-improved count bound, `t >= 1`.
pub fn count_certificate(c: impl Into<BigUint>, grid: &Grid) -> Result<Option<Certificate>> {
    let c = c.into();
    Ok(guaranteed_count_lower_bound(c.clone(), grid, true)?.map(|t| {
        Certificate::guaranteed(Method::Delta, grid.clone(), c)
            .with_param("t", t.to_integer().to_string())
            .with_param("ceiling", true)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn g(s: &[u64]) -> Grid {
        Grid::from_sides(s).unwrap()
    }

    #[test]
    fn delta_examples() {
        let seq = delta_sequence(2u32, &g(&[4])).unwrap();
        assert_eq!(seq.terms, vec![q(1, 1), q(2, 3)]);
        let seq = delta_sequence(2u32, &g(&[5, 5])).unwrap();
        assert_eq!(seq.terms[1], q(3, 4));
        assert!(seq.terms[2].is_negative());
        assert!(!seq.certifies_guarantee());
        assert!(delta_sequence(2u32, &g(&[1, 5])).is_err());
    }

    #[test]
    fn delta_single_color_stays_positive() {
        let seq = delta_sequence(1u32, &g(&[3, 4, 5])).unwrap();
        assert!(seq.certifies_guarantee());
        assert!(seq.terms.iter().all(|t| *t == q(1, 1)));
    }

    #[test]
    fn count_bound_examples() {
        assert_eq!(
            guaranteed_count_lower_bound(2u32, &g(&[4]), false).unwrap(),
            Some(q(2, 1))
        );
        assert_eq!(guaranteed_count_lower_bound(2u32, &g(&[5, 5]), false).unwrap(), None);
        assert_eq!(
            guaranteed_count_lower_bound(2u32, &g(&[3]), false).unwrap(),
            Some(q(3, 4))
        );
        assert_eq!(
            guaranteed_count_lower_bound(2u32, &g(&[3]), true).unwrap(),
            Some(q(1, 1))
        );
        // [3,7]: 1 after the first step, then 7 (7 - 6) / 12 -> 1.
        assert_eq!(
            guaranteed_count_lower_bound(2u32, &g(&[3, 7]), true).unwrap(),
            Some(q(1, 1))
        );
        assert_eq!(
            guaranteed_count_lower_bound(2u32, &g(&[8, 8]), true).unwrap(),
            Some(q(35, 1))
        );
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_sequence(2u32, &g(&[4])).unwrap().terms[1], q(1, 3));
        let seq = gamma_sequence(2u32, &g(&[13, 13])).unwrap();
        assert_eq!(seq.terms, vec![q(1, 1), q(5, 6), q(5, 12)]);
        assert!(seq.certifies_guarantee());
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(2u32, &g(&[13, 13])).unwrap(), q(2, 3));
        let e = epsilon(2u32, &g(&[3, 7])).unwrap();
        assert_eq!(e, q(8, 3));
        assert!(!epsilon_sequence(2u32, &g(&[3, 7])).unwrap().certifies_guarantee());
        let seq = epsilon_sequence(3u32, &g(&[5, 9, 40])).unwrap();
        assert_eq!(seq.last(), &epsilon(3u32, &g(&[5, 9, 40])).unwrap());
        assert!(seq.terms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn corollary_grid_examples() {
        assert_eq!(corollary_grid(2u32, 1).unwrap(), g(&[5]));
        assert_eq!(corollary_grid(2u32, 2).unwrap(), g(&[13, 13]));
        assert_eq!(corollary_grid(3u32, 2).unwrap(), g(&[19, 28]));
        assert!(corollary_grid(1u32, 2).is_err());
        assert!(corollary_grid(2u32, 0).is_err());
    }

    #[test]
    fn certificates_only_when_positive() {
        assert!(epsilon_certificate(2u32, &g(&[13, 13])).unwrap().is_some());
        assert!(epsilon_certificate(2u32, &g(&[3, 7])).unwrap().is_none());
        assert!(gamma_certificate(2u32, &g(&[13, 13])).unwrap().is_some());
        assert!(delta_certificate(2u32, &g(&[5, 5])).unwrap().is_none());
        let cert = count_certificate(2u32, &g(&[3, 8])).unwrap().unwrap();
        assert_eq!(cert.guaranteed_count(), Some(BigUint::from(2u32)));
    }
}
