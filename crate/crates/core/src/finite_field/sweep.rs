use std::sync::Arc;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hg::{render_complex, FiniteHg, FqChar, IdentityCheck};
use super::FqField;
use crate::error::Result;
use crate::padic::FqSpec;
use crate::record::{CaseKind, CaseRecord, PointRecord};
use crate::transform::sweep::case_seed;
use crate::transform::Sampling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiniteMode {
    /// Gauss-sum reflection for every character.
    GsIdentity,
    /// `F(alpha,..,alpha; epsilon,..,epsilon; t)` against its value at `1/t`.
    Special { d: u32 },
    /// Arbitrary admissible `(alpha; beta)` tuples.
    General { d: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteCase {
    pub q: u64,
    /// Monic modulus, constant term first; `None` uses the built-in default.
    pub modulus: Option<Vec<u64>>,
    pub mode: FiniteMode,
    /// `All` enumerates every admissible tuple; general cases need `Random`.
    pub sampling: Sampling,
}

impl FiniteCase {
    pub fn kind(&self) -> CaseKind {
        match self.mode {
            FiniteMode::GsIdentity => CaseKind::GsIdentity,
            FiniteMode::Special { .. } => CaseKind::FiniteSpecial,
            FiniteMode::General { .. } => CaseKind::FiniteGeneral,
        }
    }

    pub fn d(&self) -> Option<u32> {
        match self.mode {
            FiniteMode::GsIdentity => None,
            FiniteMode::Special { d } | FiniteMode::General { d } => Some(d),
        }
    }

    pub fn id(&self) -> String {
        let mut id = format!("{}/q{}", self.kind(), self.q);
        if let Some(m) = &self.modulus {
            let m: Vec<String> = m.iter().map(u64::to_string).collect();
            id.push_str(&format!("/m{}", m.join("_")));
        }
        if let Some(d) = self.d() {
            id.push_str(&format!("/d{d}"));
        }
        id
    }

    fn spec(&self) -> Result<FqSpec> {
        match &self.modulus {
            None => FqSpec::for_order(self.q),
            Some(m) => {
                let (p, _) = crate::padic::prime_power(self.q).ok_or_else(|| {
                    crate::Error::InvalidParameter(format!("{} is not a prime power", self.q))
                })?;
                let spec = FqSpec::new(p, m.clone())?;
                if spec.order() != self.q {
                    return Err(crate::Error::InvalidParameter(format!(
                        "modulus {} does not define F_{}",
                        spec.modulus_string(),
                        self.q
                    )));
                }
                Ok(spec)
            }
        }
    }
}

/// Runs finite-field cases in parallel; output order follows `grid`.
pub fn run_finite_cases(grid: &[FiniteCase], seed: u64) -> Vec<CaseRecord> {
    grid.par_iter().map(|c| run_finite_case(c, seed)).collect()
}

pub fn run_finite_case(case: &FiniteCase, seed: u64) -> CaseRecord {
    let mut rec = CaseRecord::new(case.id(), case.kind());
    rec.q = Some(case.q);
    rec.d = case.d();
    if let Err(e) = fill(case, seed, &mut rec) {
        rec.notes.push(format!("error: {e}"));
        rec.pass = false;
    }
    rec
}

fn point(tag: String, check: IdentityCheck) -> PointRecord {
    PointRecord {
        point: tag,
        lhs: render_complex(check.lhs),
        rhs: render_complex(check.rhs),
        matched: check.holds(),
        matched_precision: None,
        sign_used: None,
        observed_sign: None,
    }
}

fn chars_tag(chars: &[FqChar]) -> String {
    let v: Vec<String> = chars.iter().map(|c| c.0.to_string()).collect();
    v.join(",")
}

fn fill(case: &FiniteCase, seed: u64, rec: &mut CaseRecord) -> Result<()> {
    let spec = case.spec()?;
    rec.p = Some(spec.p());
    rec.modulus = Some(spec.modulus_string());
    let hg = FiniteHg::new(Arc::new(FqField::new(spec)?));
    let q = case.q;
    let m = q - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, &rec.id));

    let points: Vec<PointRecord> = match case.mode {
        FiniteMode::GsIdentity => hg
            .all_chars()
            .map(|phi| point(format!("phi={}", phi.0), hg.verify_gs_identity(phi)))
            .collect(),
        FiniteMode::Special { d } => {
            // tuples (alpha, t) with alpha != epsilon, t != 0
            let total = ((m - 1) * m) as usize;
            let picks: Vec<usize> = match case.sampling {
                Sampling::Random(k) if k < total => {
                    let mut v = index::sample(&mut rng, total, k).into_vec();
                    v.sort_unstable();
                    v
                }
                _ => (0..total).collect(),
            };
            let tuples: Vec<(FqChar, u64)> = picks
                .into_iter()
                .map(|i| (FqChar(1 + i as u64 / m), 1 + i as u64 % m))
                .collect();
            tuples
                .par_iter()
                .map(|&(alpha, t)| {
                    let check = hg.verify_transform_special(alpha, d as usize, t)?;
                    Ok(point(format!("alpha={};t={t}", alpha.0), check))
                })
                .collect::<Result<_>>()?
        }
        FiniteMode::General { d } => {
            let count = match case.sampling {
                Sampling::Random(k) => k,
                Sampling::All => {
                    return Err(crate::Error::InvalidParameter(
                        "general finite cases are sampled; give a sample count".into(),
                    ))
                }
            };
            let d = d as usize;
            let tuples: Vec<(Vec<FqChar>, Vec<FqChar>, u64)> = (0..count)
                .map(|_| {
                    let mut alphas = vec![FqChar(rng.gen_range(1..m))];
                    let mut betas = Vec::with_capacity(d);
                    for _ in 0..d {
                        let a = FqChar(rng.gen_range(0..m));
                        let mut b = FqChar(rng.gen_range(0..m - 1));
                        if b.0 >= a.0 {
                            b.0 += 1;
                        }
                        alphas.push(a);
                        betas.push(b);
                    }
                    (alphas, betas, rng.gen_range(1..q))
                })
                .collect();
            tuples
                .par_iter()
                .map(|(alphas, betas, t)| {
                    let check = hg.verify_transform_general(alphas, betas, *t)?;
                    let tag = format!(
                        "alpha={};beta={};t={t}",
                        chars_tag(alphas),
                        chars_tag(betas)
                    );
                    Ok(point(tag, check))
                })
                .collect::<Result<_>>()?
        }
    };
    rec.pass = points.iter().all(|p| p.matched);
    rec.points = points;
    Ok(())
}
