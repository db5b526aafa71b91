//! Truncated hypergeometric series `F_a(t)` for the tuple `(a, ..., a)`, Dwork
//! primes and their orbits, the domain polynomial `h_a`, and evaluation of
//! Dwork's function at unit points.

mod eval;
mod orbit;
mod series;

use serde::{Deserialize, Serialize};

pub use eval::{dwork_eval, dwork_eval_f, dwork_eval_product, h_polynomial, DworkEvaluator};
pub use orbit::{dwork_orbit, dwork_prime, DworkOrbit, OrbitStep};
pub use series::{
    embed_big, hg_coefficient_exact, hg_coefficients, pochhammer, pochhammer_exact, truncated_hg,
    valuation_big, TruncatedPoly,
};

use crate::error::{Error, Result};
use crate::padic::PRational;
use crate::primes::is_prime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamMode {
    /// `0 < a < 1`, the hypotheses of the transformation theorem.
    Theorem,
    /// Any p-integral rational.
    Library,
}

/// The tuple `(a, ..., a)` of length `d + 1` at the prime `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HGParameter {
    a: PRational,
    d: u32,
    p: u64,
    mode: ParamMode,
}

impl HGParameter {
    pub fn theorem(a: PRational, d: u32, p: u64) -> Result<Self> {
        let params = Self::library(a, d, p)?;
        if !a.in_unit_interval() {
            return Err(Error::InvalidParameter(format!("a = {a} is not in (0, 1)")));
        }
        Ok(Self {
            mode: ParamMode::Theorem,
            ..params
        })
    }

    pub fn library(a: PRational, d: u32, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !a.is_p_integral(p) {
            return Err(Error::DenominatorNotUnit(a.to_string(), p));
        }
        Ok(Self {
            a,
            d,
            p,
            mode: ParamMode::Library,
        })
    }

    pub fn a(&self) -> &PRational {
        &self.a
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Denominator `N` of `a`.
    pub fn big_n(&self) -> i64 {
        self.a.denom()
    }

    pub fn mode(&self) -> ParamMode {
        self.mode
    }

    pub fn is_theorem_mode(&self) -> bool {
        self.mode == ParamMode::Theorem
    }

    /// Same `d`, `p` and mode with a different `a` (used along the orbit).
    pub fn with_a(&self, a: PRational) -> Self {
        Self { a, ..self.clone() }
    }
}
