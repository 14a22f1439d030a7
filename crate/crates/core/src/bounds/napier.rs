//! Interval enclosures of `e` and the local-lemma volume threshold.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

/// Rational bounds `lo < e < hi` from the Taylor series truncated after `1/n!`.
///
/// The tail `sum_{k>n} 1/k!` is below `1/(n! n)`.
pub fn napier_enclosure(n: u32) -> (BigRational, BigRational) {
    assert!(n >= 1);
    let mut sum = BigRational::one();
    let mut fact = BigInt::one();
    for k in 1..=n {
        fact *= k;
        sum += BigRational::new(BigInt::one(), fact.clone());
    }
    let tail = BigRational::new(BigInt::one(), fact * n);
    let hi = &sum + tail;
    (sum, hi)
}

/// Largest `V` with `V <= c^(2^d - 1) / (e 2^d)`. Every grid of volume at most
/// `V` is `c`-colorable.
pub fn lll_volume_threshold(c: impl Into<BigUint>, d: usize) -> Result<BigUint> {
    let c = c.into();
    if c < BigUint::from(2u32) || d == 0 {
        return Err(Error::OutOfRange(format!("need c >= 2 and d >= 1, got c = {c}, d = {d}")));
    }
    let numer = BigInt::from(num_traits::pow(c, (1usize << d) - 1));
    let scale = BigInt::one() << d;
    let mut n = 8;
    loop {
        let (lo, hi) = napier_enclosure(n);
        // numer / (scale e) lies strictly between these two quotients.
        let q_low = BigRational::from_integer(numer.clone()) / (hi * &scale);
        let q_high = BigRational::from_integer(numer.clone()) / (lo * &scale);
        let (f_low, f_high) = (q_low.floor(), q_high.floor());
        // The true quotient is irrational, so equal floors settle it.
        if f_low == f_high {
            let v = f_low.to_integer();
            return Ok(v.to_biguint().expect("threshold is nonnegative"));
        }
        n *= 2;
    }
}

/// `2^-d e^-1 < V(c,d) / c^(2^d-1) < (d+2)^d 2^(d(d-1)/2)`, reported as
/// the integer range the volume threshold is known to lie in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VolumeSandwich {
    /// `V(c,d)` is at least this (the local-lemma threshold).
    #[serde(with = "crate::cert::decimal")]
    pub at_least: BigUint,
    /// `V(c,d)` is strictly below this.
    #[serde(with = "crate::cert::decimal")]
    pub below: BigUint,
}

pub fn volume_sandwich(c: impl Into<BigUint>, d: usize) -> Result<VolumeSandwich> {
    let c = c.into();
    let at_least = lll_volume_threshold(c.clone(), d)?;
    let below = num_traits::pow(BigUint::from(d + 2), d)
        * (BigUint::one() << (d * (d - 1) / 2))
        * num_traits::pow(c, (1usize << d) - 1);
    Ok(VolumeSandwich { at_least, below })
}
