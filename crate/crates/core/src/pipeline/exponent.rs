//! Exponents `e` with `|O(c, d)| = O(c^e)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionExponent {
    pub d: usize,
    /// `(17 * 3^(d-3) - 1) / 2` for `d >= 3`; `2` for `d = 2`.
    #[serde(with = "crate::cert::decimal")]
    pub exponent: BigUint,
    /// Leading constant when known (`|O(c, 2)| <= 2 c^2`).
    pub constant: Option<u64>,
    /// `n` in `1..=d` maximizing `(1 + 2^n (n - 1)) / 3^n`.
    pub argmax: Option<usize>,
    /// `3^d max_n (1 + 2^n (n - 1)) / 3^n / 2 - 1/2` equals the closed form.
    pub routes_agree: Option<bool>,
}

fn inner(n: usize) -> BigRational {
    let num = BigInt::one() + (BigInt::one() << n) * BigInt::from(n as i64 - 1);
    BigRational::new(num, Pow::pow(BigInt::from(3), n))
}

/// `n` in `1..=d` maximizing `(1 + 2^n (n - 1)) / 3^n` (the smallest on ties).
pub fn inner_max_argmax(d: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::OutOfRange("d must be positive".into()));
    }
    let mut best = 1;
    for n in 2..=d {
        if inner(n) > inner(best) {
            best = n;
        }
    }
    Ok(best)
}

pub fn obstruction_count_exponent(d: usize) -> Result<ObstructionExponent> {
    match d {
        0 | 1 => Err(Error::OutOfRange(format!("the exponent is stated for d >= 2, got {d}"))),
        2 => Ok(ObstructionExponent {
            d,
            exponent: BigUint::from(2u32),
            constant: Some(2),
            argmax: None,
            routes_agree: None,
        }),
        _ => {
            let closed = (BigUint::from(17u32) * Pow::pow(BigUint::from(3u32), d - 3) - 1u32) / 2u32;
            let n = inner_max_argmax(d)?;
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let via_max =
                BigRational::from_integer(Pow::pow(BigInt::from(3), d)) * inner(n) * &half - &half;
            let agrees = via_max == BigRational::from_integer(BigInt::from(closed.clone()));
            Ok(ObstructionExponent {
                d,
                exponent: closed,
                constant: None,
                argmax: Some(n),
                routes_agree: Some(agrees),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents() {
        let e: Vec<u32> = (3..=6)
            .map(|d| obstruction_count_exponent(d).unwrap().exponent.try_into().unwrap())
            .collect();
        assert_eq!(e, vec![8, 25, 76, 229]);
        let two = obstruction_count_exponent(2).unwrap();
        assert_eq!((two.exponent, two.constant), (BigUint::from(2u32), Some(2)));
        assert!(obstruction_count_exponent(1).is_err());
    }

    #[test]
    fn inner_maximum_at_three() {
        assert_eq!(inner_max_argmax(1).unwrap(), 1);
        assert_eq!(inner_max_argmax(2).unwrap(), 2);
        for d in 3..=12 {
            assert_eq!(inner_max_argmax(d).unwrap(), 3);
            assert_eq!(obstruction_count_exponent(d).unwrap().routes_agree, Some(true));
        }
    }
}
