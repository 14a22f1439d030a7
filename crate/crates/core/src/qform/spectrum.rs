//! Exact spectra of `M_r`.
//!
//! A floating-point eigensolver only proposes candidate eigenvalues (rounded
//! to integers). The candidates are then checked in exact arithmetic:
//!
//! * `prod (M - lambda I) = 0` over the distinct candidates, in `i128`, which
//!   shows every eigenvalue is a candidate;
//! * the nullity of each `M - lambda I` modulo the prime `2^61 - 1`. Rank can
//!   only drop modulo a prime, so each modular nullity bounds the rational one
//!   from above; `M` is symmetric, so the rational nullities sum to `2^r`, and
//!   when the modular ones do too, they are all exact.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

use super::{build_matrix, pairs};

pub const MAX_SPECTRUM_ROWS: usize = 10;

const P: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct EigenPair {
    pub lambda: i64,
    pub mult: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub r: usize,
    /// Verified eigenvalues with multiplicities, ascending; empty if unverified.
    pub pairs: Vec<EigenPair>,
    /// All eigenvalues nonnegative; absent for `r < 3` or an unverified spectrum.
    pub psd: Option<bool>,
    pub verified: bool,
    /// Rank (mod `2^61 - 1`) of the candidate product when it is not zero.
    pub residual_rank: Option<usize>,
    /// `sum mult * lambda` equals the closed-form trace.
    pub trace_matches: bool,
    /// The closed-form eigenvalue pattern stated for `r >= 3`, merged.
    pub conjectured: Option<Vec<EigenPair>>,
    pub matches_conjecture: Option<bool>,
}

/// `sum_w C(r, w) (C(w, 2) + C(r - w, 2))`.
pub fn trace_formula(r: usize) -> u64 {
    let mut binom = 1u64;
    let mut total = 0;
    for w in 0..=r {
        total += binom * (pairs(w as u32) + pairs((r - w) as u32));
        binom = binom * (r - w) as u64 / (w as u64 + 1);
    }
    total
}

/// The stated pattern: `{0: 2, 1: 4, 4: 2}` for `r = 3`; for `r >= 4` the values
/// `0, 2^(r-2), 2^(r-3)(r-2), 2^(r-2)(r-1), 2^(r-4)(r^2-r+2)` with multiplicities
/// `2^r - r(r+1)/2, r(r-1)/2 - 1, r - 1, 1, 1` (coinciding values merged).
pub fn conjectured_spectrum(r: usize) -> Option<Vec<EigenPair>> {
    let raw: Vec<(i64, u64)> = match r {
        0..=2 => return None,
        3 => vec![(0, 2), (1, 4), (4, 2)],
        _ => {
            let (ri, ru) = (r as i64, r as u64);
            vec![
                (0, (1u64 << r) - ru * (ru + 1) / 2),
                (1i64 << (r - 2), ru * (ru - 1) / 2 - 1),
                ((1i64 << (r - 3)) * (ri - 2), ru - 1),
                ((1i64 << (r - 2)) * (ri - 1), 1),
                ((1i64 << (r - 4)) * (ri * ri - ri + 2), 1),
            ]
        }
    };
    Some(merge(raw))
}

fn merge(raw: Vec<(i64, u64)>) -> Vec<EigenPair> {
    let mut out: Vec<EigenPair> = Vec::new();
    let mut raw = raw;
    raw.sort();
    for (lambda, mult) in raw {
        match out.last_mut() {
            Some(last) if last.lambda == lambda => last.mult += mult,
            _ => out.push(EigenPair { lambda, mult }),
        }
    }
    out.retain(|p| p.mult > 0);
    out
}

pub fn spectrum(r: usize) -> Result<SpectrumReport> {
    if r == 0 || r > MAX_SPECTRUM_ROWS {
        return Err(Error::OutOfRange(format!(
            "spectrum needs 1 <= r <= {MAX_SPECTRUM_ROWS}, got {r}"
        )));
    }
    let inst = build_matrix(r)?;
    let n = inst.size();
    let dense: Vec<i64> = inst.dense()?.into_iter().map(|x| x as i64).collect();

    let float = DMatrix::from_fn(n, n, |i, j| dense[i * n + j] as f64);
    let mut candidates: Vec<i64> = SymmetricEigen::new(float)
        .eigenvalues
        .iter()
        .map(|x| x.round() as i64)
        .collect();
    candidates.sort_unstable();
    candidates.dedup();

    let conjectured = conjectured_spectrum(r);
    let residual = annihilation_residual(&dense, n, &candidates);
    let mut report = SpectrumReport {
        r,
        pairs: Vec::new(),
        psd: None,
        verified: false,
        residual_rank: None,
        trace_matches: false,
        conjectured: conjectured.clone(),
        matches_conjecture: None,
    };
    if let Some(rank) = residual {
        report.residual_rank = Some(rank);
        return Ok(report);
    }
    let found: Vec<EigenPair> = candidates
        .iter()
        .map(|&lambda| EigenPair {
            lambda,
            mult: (n - rank_mod_p(&shifted(&dense, n, lambda), n)) as u64,
        })
        .filter(|p| p.mult > 0)
        .collect();
    if found.iter().map(|p| p.mult).sum::<u64>() != n as u64 {
        return Ok(report);
    }
    let trace: i128 = found.iter().map(|p| i128::from(p.lambda) * i128::from(p.mult)).sum();
    report.trace_matches = trace == i128::from(trace_formula(r))
        && trace == inst.diag().iter().map(|&x| i128::from(x)).sum::<i128>();
    report.verified = true;
    report.psd = (r >= 3).then(|| found.iter().all(|p| p.lambda >= 0));
    report.matches_conjecture = conjectured.map(|c| c == found);
    report.pairs = found;
    Ok(report)
}

/// `Some(true)` when every eigenvalue is nonnegative; `None` for `r < 3`,
/// where the claim is not made. Errors if the spectrum cannot be verified.
pub fn psd_check(r: usize) -> Result<Option<bool>> {
    let report = spectrum(r)?;
    if !report.verified {
        return Err(Error::Premise(format!(
            "spectrum of M_{r} not verified (residual rank {:?})",
            report.residual_rank
        )));
    }
    Ok(report.psd)
}

fn shifted(dense: &[i64], n: usize, lambda: i64) -> Vec<i64> {
    let mut m = dense.to_vec();
    for i in 0..n {
        m[i * n + i] -= lambda;
    }
    m
}

/// `None` when `prod (M - lambda I)` vanishes; otherwise its rank mod p.
fn annihilation_residual(dense: &[i64], n: usize, candidates: &[i64]) -> Option<usize> {
    let factors: Vec<Vec<i64>> = candidates.iter().map(|&l| shifted(dense, n, l)).collect();
    let mut acc: Vec<i128> = factors[0].iter().map(|&x| i128::from(x)).collect();
    for f in &factors[1..] {
        acc = multiply(&acc, f, n).expect("products of M_r factors stay within i128 for r <= 10");
    }
    if acc.iter().all(|&x| x == 0) {
        return None;
    }
    let reduced: Vec<i64> = acc
        .iter()
        .map(|&x| x.rem_euclid(i128::from(P)) as i64)
        .collect();
    Some(rank_mod_p(&reduced, n))
}

/// `a * b` for row-major `n x n` matrices; `None` on overflow.
fn multiply(a: &[i128], b: &[i64], n: usize) -> Option<Vec<i128>> {
    let row_norm = |m: &[i128]| m.chunks(n).map(|r| r.iter().map(|x| x.unsigned_abs()).sum::<u128>()).max();
    let b_norm = b.chunks(n).map(|r| r.iter().map(|x| x.unsigned_abs() as u128).sum::<u128>()).max()?;
    let fast = row_norm(a)?.checked_mul(b_norm).is_some_and(|x| x < 1 << 126);
    let mut out = vec![0i128; n * n];
    for i in 0..n {
        let row = &mut out[i * n..(i + 1) * n];
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            let brow = &b[k * n..(k + 1) * n];
            if fast {
                for (o, &bkj) in row.iter_mut().zip(brow) {
                    *o += aik * i128::from(bkj);
                }
            } else {
                for (o, &bkj) in row.iter_mut().zip(brow) {
                    *o = o.checked_add(aik.checked_mul(i128::from(bkj))?)?;
                }
            }
        }
    }
    Some(out)
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(P)) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

/// Rank over the field of integers mod `2^61 - 1`.
fn rank_mod_p(m: &[i64], n: usize) -> usize {
    let mut a: Vec<u64> = m
        .iter()
        .map(|&x| (i128::from(x).rem_euclid(i128::from(P))) as u64)
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| a[r * n + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in 0..n {
                a.swap(pivot * n + j, rank * n + j);
            }
        }
        let inv = pow_mod(a[rank * n + col], P - 2);
        for j in col..n {
            a[rank * n + j] = mul_mod(a[rank * n + j], inv);
        }
        for r in 0..n {
            if r == rank {
                continue;
            }
            let f = a[r * n + col];
            if f == 0 {
                continue;
            }
            for j in col..n {
                let sub = mul_mod(f, a[rank * n + j]);
                let x = a[r * n + j];
                a[r * n + j] = if x >= sub { x - sub } else { x + P - sub };
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(v: &[(i64, u64)]) -> Vec<EigenPair> {
        v.iter().map(|&(lambda, mult)| EigenPair { lambda, mult }).collect()
    }

    #[test]
    fn r3_matches_stated_spectrum() {
        let rep = spectrum(3).unwrap();
        assert!(rep.verified);
        assert_eq!(rep.pairs, ep(&[(0, 2), (1, 4), (4, 2)]));
        assert_eq!(rep.matches_conjecture, Some(true));
        assert!(rep.trace_matches);
        assert_eq!(rep.psd, Some(true));
    }

    #[test]
    fn r4_exact_spectrum() {
        let rep = spectrum(4).unwrap();
        assert!(rep.verified && rep.trace_matches);
        assert_eq!(rep.pairs, ep(&[(0, 6), (2, 5), (4, 3), (12, 1), (14, 1)]));
    }

    #[test]
    fn small_r_reports_without_verdict() {
        let rep = spectrum(2).unwrap();
        assert!(rep.verified);
        assert_eq!(rep.psd, None);
        assert_eq!(psd_check(2).unwrap(), None);
        assert!(spectrum(11).is_err());
    }

    #[test]
    fn trace_formula_values() {
        assert_eq!(trace_formula(3), 12);
        for r in 1..=8 {
            let inst = build_matrix(r).unwrap();
            assert_eq!(trace_formula(r), inst.diag().iter().sum::<u64>());
        }
    }

    #[test]
    fn modular_rank() {
        assert_eq!(rank_mod_p(&[1, 2, 2, 4], 2), 1);
        assert_eq!(rank_mod_p(&[0, -1, 1, 0], 2), 2);
        assert_eq!(rank_mod_p(&[0, 0, 0, 0], 2), 0);
    }

    #[test]
    fn a_wrong_candidate_set_leaves_a_residual() {
        let inst = build_matrix(3).unwrap();
        let dense: Vec<i64> = inst.dense().unwrap().into_iter().map(|x| x as i64).collect();
        assert!(annihilation_residual(&dense, 8, &[0, 1, 4]).is_none());
        assert!(annihilation_residual(&dense, 8, &[0, 1]).unwrap() > 0);
    }
}
