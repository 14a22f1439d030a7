//! Independent re-checking of certificates.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::bounds::{
    compose_guarantee, delta_sequence, epsilon_sequence, gamma_sequence, hereditary_check,
};
use crate::cert::{Certificate, Method, Verdict};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::pipeline::{ceiling_t, product_bound};
use crate::qform::{min_rectangles, MAX_MIN_ROWS};
use crate::search::{find_coloring, min_mono_boxes_exact, FindOutcome, SearchBudget};

fn fail(msg: impl Into<String>) -> Error {
    Error::Premise(msg.into())
}

fn small(n: &BigUint, what: &str) -> Result<usize> {
    n.to_usize().ok_or_else(|| Error::TooLarge(format!("{what} = {n}")))
}

/// Re-derives the verdict of `cert` (and of every sub-certificate) from scratch.
///
/// Colorable verdicts need the witness loaded in memory. Exhaustive verdicts
/// are searched again within `budget`; running out is an error, not a pass.
pub fn verify(cert: &Certificate, budget: &SearchBudget) -> Result<()> {
    match cert.verdict {
        Verdict::Unknown => Err(fail("an unknown verdict asserts nothing")),
        Verdict::Colorable => verify_colorable(cert),
        Verdict::Guaranteed => verify_guaranteed(cert, budget),
    }
}

fn verify_colorable(cert: &Certificate) -> Result<()> {
    let w = cert
        .witness
        .as_ref()
        .ok_or_else(|| fail("colorable certificate without a witness"))?;
    if w.grid() != &cert.grid {
        return Err(fail(format!("witness grid {} differs from {}", w.grid(), cert.grid)));
    }
    if BigUint::from(w.colors()) > cert.colors {
        return Err(fail("witness uses more colors than claimed"));
    }
    if let Some(b) = w.first_monochromatic_box() {
        return Err(fail(format!("witness has a monochromatic box {:?}", b.pairs())));
    }
    Ok(())
}

fn claimed_t(cert: &Certificate) -> Result<BigUint> {
    cert.guaranteed_count()
        .ok_or_else(|| fail("malformed count parameter"))
}

fn verify_guaranteed(cert: &Certificate, budget: &SearchBudget) -> Result<()> {
    let c = &cert.colors;
    let grid = &cert.grid;
    let t = claimed_t(cert)?;
    match cert.method {
        Method::Pigeonhole => {
            if grid.dim() != 1 || grid.dims()[0] <= *c || t != BigUint::from(1u32) {
                return Err(fail(format!("pigeonhole does not apply to {grid} with {c} colors")));
            }
            Ok(())
        }
        Method::Coordinate | Method::Construction | Method::Resample => Err(fail(format!(
            "{:?} certificates only witness colorability",
            cert.method
        ))),
        Method::Exhaustive => verify_exhaustive(small(c, "colors")?, grid, &t, budget),
        Method::Delta if cert.params.contains_key("t") => {
            let c = c.to_u64().ok_or_else(|| Error::TooLarge("colors".into()))?;
            match ceiling_t(c, grid)? {
                Some(bound) if BigUint::from(bound) >= t => Ok(()),
                other => Err(fail(format!("count bound {other:?} is below the claimed {t}"))),
            }
        }
        Method::Delta | Method::Gamma | Method::Epsilon => {
            let seq = match cert.method {
                Method::Delta => delta_sequence(c.clone(), grid)?,
                Method::Gamma => gamma_sequence(c.clone(), grid)?,
                _ => epsilon_sequence(c.clone(), grid)?,
            };
            if seq.certifies_guarantee() {
                Ok(())
            } else {
                Err(fail(format!("{:?} sequence does not certify {grid}", cert.method)))
            }
        }
        Method::Hereditary => {
            if hereditary_check(c.clone(), grid) {
                Ok(())
            } else {
                Err(fail(format!("hereditary criterion fails on {grid}")))
            }
        }
        Method::Product => {
            let [base] = cert.sub_certificates.as_slice() else {
                return Err(fail("product certificate needs exactly one base"));
            };
            verify(base, budget)?;
            let base_t = claimed_t(base)?;
            let cu = c.to_u64().ok_or_else(|| Error::TooLarge("colors".into()))?;
            let k = product_bound(cu, &base.grid, &base_t)?;
            let expected = base.grid.product(&Grid::new(vec![k])?);
            if base.colors != *c || expected != *grid {
                return Err(fail(format!("product of {} gives {expected}, not {grid}", base.grid)));
            }
            Ok(())
        }
        Method::ProductComposition => {
            let [low, high] = cert.sub_certificates.as_slice() else {
                return Err(fail("composition needs two parts"));
            };
            verify(low, budget)?;
            verify(high, budget)?;
            let composed = compose_guarantee(low, high)?;
            if composed.grid != *grid || composed.colors != *c {
                return Err(fail("composition does not produce the claimed grid"));
            }
            Ok(())
        }
        Method::Dominance => {
            let [source] = cert.sub_certificates.as_slice() else {
                return Err(fail("dominance needs one source certificate"));
            };
            verify(source, budget)?;
            if source.colors != *c || claimed_t(source)? < t {
                return Err(fail("dominance source asserts less than claimed"));
            }
            if !source.grid.canonicalize().dominance_leq(&grid.canonicalize())? {
                return Err(fail(format!("{} does not dominate {}", grid, source.grid)));
            }
            Ok(())
        }
    }
}

fn verify_exhaustive(c: usize, grid: &Grid, t: &BigUint, budget: &SearchBudget) -> Result<()> {
    let shape = grid.shape()?;
    let found = if *t == BigUint::from(1u32) {
        match find_coloring(c, grid, budget) {
            FindOutcome::Guaranteed => return Ok(()),
            FindOutcome::Colorable(_) => return Err(fail(format!("{grid} has a box-free coloring"))),
            FindOutcome::Unknown => None,
        }
    } else if c == 2 && shape.len() == 2 && shape.iter().min().is_some_and(|&r| r <= MAX_MIN_ROWS) {
        let (r, s) = (shape[0].min(shape[1]), shape[0].max(shape[1]));
        min_rectangles(r, s, budget)?.exact().map(BigUint::from)
    } else {
        min_mono_boxes_exact(c, grid, budget).exact().cloned()
    };
    match found {
        Some(min) if min >= *t => Ok(()),
        Some(min) => Err(fail(format!("{grid} has a coloring with only {min} boxes"))),
        None => Err(fail(format!("search on {grid} ran out of budget"))),
    }
}
