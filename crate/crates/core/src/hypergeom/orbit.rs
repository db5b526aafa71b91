//! Dwork primes `a' = (a + l)/p` and their iterates.

use serde::{Deserialize, Serialize};

use super::HGParameter;
use crate::error::{Error, Result};
use crate::padic::PRational;

/// `(a', l)` with `l` in `[0, p)` the unique integer such that `a + l = 0 mod p`.
pub fn dwork_prime(a: &PRational, p: u64) -> Result<(PRational, u64)> {
    let l = crate::transform::exponent_l(a, p)?;
    let shifted = a.add_int(l as i64);
    debug_assert!(shifted.numer() % p as i64 == 0);
    Ok((shifted.div_int(p as i64), l))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitStep {
    pub a: PRational,
    pub l: u64,
}

/// The sequence `a^(0) = a, a^(i+1) = (a^(i))'` up to its first repetition.
/// `steps[i]` holds `a^(i)` and the `l` that maps it to `a^(i+1)`;
/// `a^(preperiod + period) = a^(preperiod)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DworkOrbit {
    pub p: u64,
    pub steps: Vec<OrbitStep>,
    pub preperiod: usize,
    pub period: usize,
}

impl DworkOrbit {
    /// `a^(i)` for any `i >= 0`.
    pub fn iterate(&self, i: usize) -> PRational {
        self.steps[self.index(i)].a
    }

    fn index(&self, i: usize) -> usize {
        if i < self.preperiod {
            i
        } else {
            self.preperiod + (i - self.preperiod) % self.period
        }
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod == 0
    }

    /// The distinct iterates `a^(i)` for `i >= 1`.
    pub fn forward_iterates(&self) -> Vec<PRational> {
        (1..=self.steps.len()).map(|i| self.iterate(i)).collect()
    }
}

/// Iterates Dwork primes until a value repeats.
pub fn dwork_orbit(params: &HGParameter) -> Result<DworkOrbit> {
    let p = params.p();
    let mut steps: Vec<OrbitStep> = Vec::new();
    let mut cur = *params.a();
    loop {
        if let Some(pos) = steps.iter().position(|s| s.a == cur) {
            let orbit = DworkOrbit {
                p,
                preperiod: pos,
                period: steps.len() - pos,
                steps,
            };
            if params.is_theorem_mode() && !orbit.is_purely_periodic() {
                return Err(Error::InvalidParameter(format!(
                    "orbit of {} is not purely periodic",
                    params.a()
                )));
            }
            return Ok(orbit);
        }
        let (next, l) = dwork_prime(&cur, p)?;
        steps.push(OrbitStep { a: cur, l });
        cur = next;
    }
}
