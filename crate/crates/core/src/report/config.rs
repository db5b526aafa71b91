use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{FiniteCase, FiniteMode};
use crate::hypergeom::HGParameter;
use crate::padic::{prime_power, PRational};
use crate::primes::is_prime;
use crate::record::CaseKind;
use crate::transform::sweep::case_seed;
use crate::transform::{Sampling, TransformCase, TransformMode};

pub const DEFAULT_PRECISION: u32 = 2;
pub const DEFAULT_SAMPLES: usize = 5;
/// Largest residue field a config may ask points to be enumerated from.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AllWord {
    All,
}

/// `"all"` or a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Samples {
    All(AllWord),
    Count(usize),
}

impl Samples {
    pub fn sampling(self) -> Sampling {
        match self {
            Samples::All(_) => Sampling::All,
            Samples::Count(k) => Sampling::Random(k),
        }
    }
}

/// `"all"` numerators `0 < r < N`, or an explicit list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Numerators {
    All(AllWord),
    List(OneOrMany<i64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// One `[[case]]` block. List-valued keys expand to their cartesian product;
/// parameters whose denominator is divisible by `p` are left out of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub kind: CaseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<OneOrMany<u64>>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub big_n: Option<OneOrMany<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Numerators>,
    /// Explicit parameters `"r/N"`, instead of `N` and `r`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<PRational>>,
    /// Draw this many random p-integral parameters per prime (mod-p only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<OneOrMany<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<OneOrMany<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<OneOrMany<u64>>,
    /// Monic modulus for `F_q`, constant term first (single `q` only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    /// Residue-field degree for theorem and mod-p points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Samples>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_stability: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(rename = "case", default)]
    pub cases: Vec<CaseSpec>,
}

/// A fully expanded unit of work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Job {
    Transform(TransformCase),
    Finite(FiniteCase),
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let config: SweepConfig =
            toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        config.jobs()?;
        Ok(config)
    }

    /// Expands every case block, validating parameters.
    pub fn jobs(&self) -> Result<Vec<Job>> {
        let mut jobs = Vec::new();
        for (i, case) in self.cases.iter().enumerate() {
            let expanded = case
                .expand(self.seed)
                .map_err(|e| Error::InvalidParameter(format!("case {}: {e}", i + 1)))?;
            if expanded.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "case {} expands to nothing",
                    i + 1
                )));
            }
            jobs.extend(expanded);
        }
        Ok(jobs)
    }
}

fn required<'a, T>(field: &'a Option<T>, name: &str, kind: CaseKind) -> Result<&'a T> {
    field
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("{kind} case needs `{name}`")))
}

fn forbid<T>(field: &Option<T>, name: &str, kind: CaseKind) -> Result<()> {
    match field {
        Some(_) => Err(Error::InvalidParameter(format!(
            "`{name}` does not apply to {kind} cases"
        ))),
        None => Ok(()),
    }
}

fn random_parameters(p: u64, count: usize, seed: u64) -> Result<Vec<PRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, &format!("random-a/p{p}")));
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let den = rng.gen_range(1..=30i64);
        if den % p as i64 == 0 {
            continue;
        }
        let a = PRational::new(rng.gen_range(-60..=60), den)?;
        if seen.insert(a) {
            out.push(a);
        }
    }
    Ok(out)
}

impl CaseSpec {
    fn parameters(&self, p: u64, seed: u64) -> Result<Vec<PRational>> {
        let mut out = Vec::new();
        if let Some(list) = &self.a {
            out.extend(list.iter().filter(|a| a.is_p_integral(p)).cloned());
        }
        if let Some(count) = self.random_a {
            if self.kind != CaseKind::ModP {
                return Err(Error::InvalidParameter(
                    "`random_a` applies to mod-p cases".into(),
                ));
            }
            out.extend(random_parameters(p, count, seed)?);
        }
        if let Some(ns) = &self.big_n {
            for big_n in ns.to_vec() {
                if big_n < 1 {
                    return Err(Error::InvalidParameter(format!(
                        "N = {big_n} must be positive"
                    )));
                }
                if big_n % p as i64 == 0 {
                    continue;
                }
                let rs = match self.r.as_ref() {
                    None | Some(Numerators::All(_)) => (1..big_n).collect(),
                    Some(Numerators::List(rs)) => rs.to_vec(),
                };
                for r in rs {
                    let a = PRational::new(r, big_n)?;
                    // 2/4 and 1/2 are the same parameter
                    if !out.contains(&a) {
                        out.push(a);
                    }
                }
            }
        } else if self.r.is_some() {
            return Err(Error::InvalidParameter("`r` needs `N`".into()));
        }
        Ok(out)
    }

    fn expand(&self, seed: u64) -> Result<Vec<Job>> {
        match self.kind {
            CaseKind::Theorem | CaseKind::ModP | CaseKind::Corollary => self.expand_padic(seed),
            CaseKind::GsIdentity | CaseKind::FiniteSpecial | CaseKind::FiniteGeneral => {
                self.expand_finite()
            }
        }
    }

    fn expand_padic(&self, seed: u64) -> Result<Vec<Job>> {
        let kind = self.kind;
        forbid(&self.q, "q", kind)?;
        forbid(&self.modulus, "modulus", kind)?;
        let primes = required(&self.p, "p", kind)?.to_vec();
        let ds = required(&self.d, "d", kind)?.to_vec();
        let ns = match (&self.n, kind) {
            (Some(n), _) => n.to_vec(),
            (None, CaseKind::ModP) => vec![1],
            (None, _) => vec![DEFAULT_PRECISION],
        };
        let mode = match kind {
            CaseKind::Theorem => {
                forbid(&self.f, "f", kind)?;
                TransformMode::Theorem
            }
            CaseKind::ModP => {
                forbid(&self.f, "f", kind)?;
                TransformMode::ModP
            }
            _ => {
                forbid(&self.field_degree, "field_degree", kind)?;
                TransformMode::Corollary {
                    f: *required(&self.f, "f", kind)?,
                }
            }
        };
        if let TransformMode::Corollary { f: 0 } = mode {
            return Err(Error::InvalidParameter("f must be at least 1".into()));
        }
        let mut jobs = Vec::new();
        for &p in &primes {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if let Some(k) = self.field_degree {
                let order =
                    crate::primes::checked_pow(p, k).filter(|&q| k > 0 && q <= MAX_FIELD_ORDER);
                if order.is_none() {
                    return Err(Error::InvalidParameter(format!(
                        "field_degree {k} at p = {p}: F_q must have 2 <= q <= {MAX_FIELD_ORDER}"
                    )));
                }
            }
            let params = self.parameters(p, seed)?;
            if self.a.is_none() && self.big_n.is_none() && self.random_a.is_none() {
                return Err(Error::InvalidParameter(format!(
                    "{kind} case needs `a`, `N` or `random_a`"
                )));
            }
            for a in &params {
                for &d in &ds {
                    let hg = if kind == CaseKind::ModP {
                        HGParameter::library(*a, d, p)?
                    } else {
                        HGParameter::theorem(*a, d, p)?
                    };
                    for &n in &ns {
                        if n == 0 {
                            return Err(Error::ZeroPrecision);
                        }
                        if kind == CaseKind::ModP && n != 1 {
                            return Err(Error::InvalidParameter("mod-p cases use n = 1".into()));
                        }
                        jobs.push(Job::Transform(TransformCase {
                            params: hg.clone(),
                            mode,
                            n,
                            field_degree: self.field_degree,
                            sampling: self.samples.map(Samples::sampling),
                            check_stability: self.check_stability.unwrap_or(false),
                        }));
                    }
                }
            }
        }
        Ok(jobs)
    }

    fn expand_finite(&self) -> Result<Vec<Job>> {
        let kind = self.kind;
        for (present, name) in [
            (self.p.is_some(), "p"),
            (self.big_n.is_some(), "N"),
            (self.r.is_some(), "r"),
            (self.a.is_some(), "a"),
            (self.random_a.is_some(), "random_a"),
            (self.n.is_some(), "n"),
            (self.f.is_some(), "f"),
            (self.field_degree.is_some(), "field_degree"),
            (self.check_stability.is_some(), "check_stability"),
        ] {
            if present {
                return Err(Error::InvalidParameter(format!(
                    "`{name}` does not apply to {kind} cases"
                )));
            }
        }
        let qs = required(&self.q, "q", kind)?.to_vec();
        if self.modulus.is_some() && qs.len() != 1 {
            return Err(Error::InvalidParameter(
                "`modulus` needs a single `q`".into(),
            ));
        }
        let ds: Vec<Option<u32>> = match kind {
            CaseKind::GsIdentity => {
                forbid(&self.d, "d", kind)?;
                vec![None]
            }
            _ => required(&self.d, "d", kind)?
                .to_vec()
                .into_iter()
                .map(Some)
                .collect(),
        };
        let sampling = match (self.samples, kind) {
            (Some(s), _) => s.sampling(),
            (None, CaseKind::FiniteGeneral) => Sampling::Random(DEFAULT_SAMPLES),
            (None, _) => Sampling::All,
        };
        if kind == CaseKind::FiniteGeneral && sampling == Sampling::All {
            return Err(Error::InvalidParameter(
                "finite-general cases need a sample count".into(),
            ));
        }
        let mut jobs = Vec::new();
        for &q in &qs {
            if prime_power(q).is_none() || q < 2 {
                return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
            }
            if kind != CaseKind::GsIdentity && q < 3 {
                return Err(Error::InvalidParameter(
                    "F_2 has no nontrivial character".into(),
                ));
            }
            for &d in &ds {
                let mode = match (kind, d) {
                    (CaseKind::FiniteSpecial, Some(d)) => FiniteMode::Special { d },
                    (CaseKind::FiniteGeneral, Some(d)) => FiniteMode::General { d },
                    _ => FiniteMode::GsIdentity,
                };
                jobs.push(Job::Finite(FiniteCase {
                    q,
                    modulus: self.modulus.clone(),
                    mode,
                    sampling,
                }));
            }
        }
        Ok(jobs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_grid_skips_ramified_denominators() {
        let config = SweepConfig::parse(
            r#"
            [[case]]
            kind = "theorem"
            p = [3, 5]
            N = [2, 3, 4]
            r = "all"
            d = 1
            n = [1, 2]
            "#,
        )
        .unwrap();
        let jobs = config.jobs().unwrap();
        // p = 3: N in {2, 4} -> 1/2, 1/4, 3/4 (2/4 is 1/2); p = 5: 1/2, 1/3, 2/3, 1/4, 3/4
        assert_eq!(jobs.len(), (3 + 5) * 2);
        match &jobs[0] {
            Job::Transform(c) => {
                assert_eq!(c.params.p(), 3);
                assert_eq!(c.n, 1);
                assert_eq!(c.sampling, None);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn finite_blocks() {
        let config = SweepConfig::parse(
            r#"
            seed = 3
            format = "csv"
            [[case]]
            kind = "gs-identity"
            q = [3, 4, 9]
            [[case]]
            kind = "finite-general"
            q = 7
            d = [1, 2]
            samples = 20
            [[case]]
            kind = "finite-special"
            q = 9
            modulus = [1, 0, 1]
            d = 2
            samples = "all"
            "#,
        )
        .unwrap();
        assert_eq!(config.format, Format::Csv);
        let jobs = config.jobs().unwrap();
        assert_eq!(jobs.len(), 6);
        assert!(
            matches!(&jobs[5], Job::Finite(c) if c.sampling == Sampling::All && c.modulus.is_some())
        );
    }

    #[test]
    fn random_parameters_are_p_integral_and_seeded() {
        let a = random_parameters(3, 20, 0).unwrap();
        assert_eq!(a.len(), 20);
        assert!(a.iter().all(|x| x.is_p_integral(3)));
        assert_eq!(a, random_parameters(3, 20, 0).unwrap());
        assert_ne!(a, random_parameters(3, 20, 1).unwrap());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        for text in [
            "[[case]]\nkind = \"theorem\"\np = 4\nN = 3\nd = 1",
            "[[case]]\nkind = \"theorem\"\np = 5\na = [\"3/2\"]\nd = 1",
            "[[case]]\nkind = \"theorem\"\np = 5\nN = 3\nd = 1\nn = 0",
            "[[case]]\nkind = \"mod-p\"\np = 5\nrandom_a = 2\nd = 1\nn = 2",
            "[[case]]\nkind = \"theorem\"\np = 5\nN = 5\nd = 1",
            "[[case]]\nkind = \"corollary\"\np = 3\nf = 2\na = [\"1/3\"]\nd = 1",
            "[[case]]\nkind = \"gs-identity\"\nq = 6",
            "[[case]]\nkind = \"finite-general\"\nq = 7\nd = 1\nsamples = \"all\"",
            "[[case]]\nkind = \"theorem\"\np = 5\nN = 3\nd = 1\nbogus = 1",
            "[[case]]\nkind = \"wibble\"",
            "seed = \"x\"",
            "not toml at all [",
        ] {
            assert!(SweepConfig::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn empty_config_is_valid() {
        let c = SweepConfig::parse("").unwrap();
        assert!(c.cases.is_empty());
        assert_eq!(c.seed, 0);
    }
}
