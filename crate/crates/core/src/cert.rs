//! Machine-checkable verdicts.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coloring::Coloring;
use crate::grid::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Guaranteed,
    Colorable,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exhaustive search (no box-free coloring exists, or a witness was found).
    Exhaustive,
    /// One-dimensional grid `[a]` with `a > c`.
    Pigeonhole,
    /// Some side is at most `c`; color by that coordinate.
    Coordinate,
    Delta,
    Gamma,
    Epsilon,
    Hereditary,
    /// `R x [floor(cM/t) + 1]` from a `(c,t)`-guarantee of `R`.
    Product,
    /// `R_j` is `c`-guaranteed and the suffix is `c'`-guaranteed.
    ProductComposition,
    Dominance,
    /// Explicit construction (minimal colorings).
    Construction,
    /// Randomized resampling produced the witness.
    Resample,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub method: Method,
    pub grid: Grid,
    #[serde(with = "decimal")]
    pub colors: BigUint,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default)]
    pub sub_certificates: Vec<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_file: Option<String>,
    /// In-memory witness for colorable verdicts; written to `witness_file` by the CLI.
    #[serde(skip)]
    pub witness: Option<Coloring>,
}

impl Certificate {
    pub fn guaranteed(method: Method, grid: Grid, colors: impl Into<BigUint>) -> Self {
        Certificate {
            verdict: Verdict::Guaranteed,
            method,
            grid,
            colors: colors.into(),
            params: BTreeMap::new(),
            sub_certificates: Vec::new(),
            witness_file: None,
            witness: None,
        }
    }

    pub fn colorable(method: Method, witness: Coloring) -> Self {
        Certificate {
            verdict: Verdict::Colorable,
            method,
            grid: witness.grid().clone(),
            colors: BigUint::from(witness.colors()),
            params: BTreeMap::new(),
            sub_certificates: Vec::new(),
            witness_file: None,
            witness: Some(witness),
        }
    }

    pub fn unknown(method: Method, grid: Grid, colors: impl Into<BigUint>) -> Self {
        Certificate {
            verdict: Verdict::Unknown,
            ..Certificate::guaranteed(method, grid, colors)
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_sub(mut self, sub: Certificate) -> Self {
        self.sub_certificates.push(sub);
        self
    }

    pub fn is_guaranteed(&self) -> bool {
        self.verdict == Verdict::Guaranteed
    }

    /// Lower bound `t` on the number of monochromatic boxes this certificate
    /// asserts (1 for a plain guarantee).
    pub fn guaranteed_count(&self) -> Option<BigUint> {
        if !self.is_guaranteed() {
            return None;
        }
        match self.params.get("t").and_then(Value::as_str) {
            Some(s) => s.parse().ok(),
            None => Some(BigUint::from(1u32)),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

pub(crate) mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
