use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{point_tag, predicted_sign, TransformChecker};
use crate::error::{Error, Result};
use crate::hypergeom::{DworkEvaluator, HGParameter};
use crate::padic::{teichmuller_lift, FqSpec, WittElement, WittRing};
use crate::record::{CaseKind, CaseRecord, ObservedSign, PointRecord, SkippedPoint};

/// Largest residue field searched when picking points automatically.
const MAX_AUTO_FIELD_ORDER: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformMode {
    Theorem,
    ModP,
    Corollary { f: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Every admissible point of the residue field.
    All,
    /// This many admissible points, drawn uniformly without replacement.
    Random(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformCase {
    pub params: HGParameter,
    pub mode: TransformMode,
    pub n: u32,
    /// Degree `k` of the residue field `F_{p^k}` the Teichmuller points come
    /// from. `None` picks `f` for corollary cases and otherwise the least `k`
    /// whose admissible locus holds enough points for the sampling.
    pub field_degree: Option<u32>,
    pub sampling: Option<Sampling>,
    /// Also compare the value at `n` reduced mod `p^k` with the value at `k < n`.
    pub check_stability: bool,
}

impl TransformCase {
    pub fn kind(&self) -> CaseKind {
        match self.mode {
            TransformMode::Theorem => CaseKind::Theorem,
            TransformMode::ModP => CaseKind::ModP,
            TransformMode::Corollary { .. } => CaseKind::Corollary,
        }
    }

    pub fn f(&self) -> u32 {
        match self.mode {
            TransformMode::Corollary { f } => f,
            _ => 1,
        }
    }

    pub fn id(&self) -> String {
        let a = self.params.a();
        let mut id = format!(
            "{}/p{}/a{}_{}/d{}/n{}",
            self.kind(),
            self.params.p(),
            a.numer(),
            a.denom(),
            self.params.d(),
            self.n
        );
        if let TransformMode::Corollary { f } = self.mode {
            id.push_str(&format!("/f{f}"));
        }
        if let Some(k) = self.field_degree {
            id.push_str(&format!("/k{k}"));
        }
        id
    }

    fn checker(&self) -> Result<TransformChecker> {
        match self.mode {
            TransformMode::Theorem => TransformChecker::theorem(&self.params, self.n),
            TransformMode::ModP => {
                if self.n != 1 {
                    return Err(Error::InvalidParameter("mod-p cases use n = 1".into()));
                }
                TransformChecker::mod_p(&self.params)
            }
            TransformMode::Corollary { f } => TransformChecker::corollary(&self.params, f, self.n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub cases: Vec<CaseRecord>,
    pub pass: bool,
}

/// Runs every case; cases are independent and evaluated in parallel, and the
/// output order follows `grid`.
pub fn run_sweep(
    grid: &[TransformCase],
    seed: u64,
    default_sampling: Sampling,
) -> VerificationReport {
    let cases: Vec<CaseRecord> = grid
        .par_iter()
        .map(|case| {
            let mut case = case.clone();
            case.sampling.get_or_insert(default_sampling);
            run_case(&case, seed)
        })
        .collect();
    let pass = cases.iter().all(|c| c.pass);
    VerificationReport { cases, pass }
}

struct Locus {
    ring_n: std::sync::Arc<WittRing>,
    admissible: Vec<WittElement>,
    skipped: Vec<SkippedPoint>,
}

fn locus(checker: &TransformChecker, spec: FqSpec, n: u32) -> Result<Locus> {
    let w1 = WittRing::new(spec.clone(), 1)?;
    let ring_n = WittRing::new(spec, n)?;
    let mut admissible = Vec::new();
    let mut skipped = Vec::new();
    for x in w1.fq_units() {
        match checker.admissibility(&x)? {
            None => admissible.push(x),
            Some(reason) => skipped.push(SkippedPoint {
                point: point_tag(&x),
                reason,
            }),
        }
    }
    Ok(Locus {
        ring_n,
        admissible,
        skipped,
    })
}

pub(crate) fn case_seed(seed: u64, id: &str) -> u64 {
    // FNV-1a, stable across platforms and releases
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed
}

/// Runs a single case. Errors in setup are reported inside the record.
pub fn run_case(case: &TransformCase, seed: u64) -> CaseRecord {
    let mut rec = CaseRecord::new(case.id(), case.kind());
    let a = case.params.a();
    rec.p = Some(case.params.p());
    rec.big_n = Some(a.denom());
    rec.r = Some(a.numer());
    rec.d = Some(case.params.d());
    rec.f = Some(case.f());
    rec.n = Some(case.n);
    if let Err(e) = fill_case(case, seed, &mut rec) {
        rec.notes.push(format!("error: {e}"));
        rec.pass = false;
    }
    rec
}

fn fill_case(case: &TransformCase, seed: u64, rec: &mut CaseRecord) -> Result<()> {
    let p = case.params.p();
    let checker = case.checker()?;
    rec.l = Some(checker.l());
    if case.mode == TransformMode::Theorem {
        rec.predicted_sign = Some(predicted_sign(&case.params));
    }
    if let TransformMode::Corollary { .. } = case.mode {
        rec.notes.push(
            "ratio form F_a(t)/F_{a^(f)}(t^q); equals the product of single steps over indices 0..f-1"
                .into(),
        );
    }
    let sampling = case.sampling.unwrap_or(Sampling::Random(5));
    let wanted = match sampling {
        Sampling::All => 1,
        Sampling::Random(k) => k.max(1),
    };

    let mut k = case.field_degree.unwrap_or(match case.mode {
        TransformMode::Corollary { f } => f,
        _ => 1,
    });
    let mut loc = locus(&checker, FqSpec::default_for(p, k)?, case.n)?;
    if case.field_degree.is_none() && !matches!(case.mode, TransformMode::Corollary { .. }) {
        while loc.admissible.len() < wanted && p.pow(k + 1) <= MAX_AUTO_FIELD_ORDER {
            k += 1;
            loc = locus(&checker, FqSpec::default_for(p, k)?, case.n)?;
        }
    }
    let spec = loc.ring_n.spec().clone();
    rec.q = Some(spec.order());
    rec.modulus = Some(spec.modulus_string());
    rec.skipped = loc.skipped;
    if loc.admissible.is_empty() {
        rec.notes
            .push(Error::EmptyAdmissibleLocus(spec.order()).to_string());
        return Ok(());
    }

    let chosen: Vec<WittElement> = match sampling {
        Sampling::Random(count) if count < loc.admissible.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, &rec.id));
            let mut idx = index::sample(&mut rng, loc.admissible.len(), count).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| loc.admissible[i].clone()).collect()
        }
        _ => loc.admissible,
    };

    let lower: Vec<DworkEvaluator> = if case.check_stability && case.n > 1 {
        (1..case.n)
            .map(|m| DworkEvaluator::new(&case.params, case.f(), m))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let mut stable = true;
    let mut observed: Option<ObservedSign> = None;
    for x in &chosen {
        let t = teichmuller_lift(x, &loc.ring_n)?;
        let point = match checker.check(&t) {
            Ok(point) => point,
            Err(e) => PointRecord {
                point: point_tag(&t),
                lhs: format!("error: {e}"),
                rhs: String::new(),
                matched: false,
                matched_precision: None,
                sign_used: None,
                observed_sign: None,
            },
        };
        if let Some(o) = point.observed_sign {
            observed = Some(observed.map_or(o, |acc| acc.meet(o)));
        }
        if !lower.is_empty() {
            let top = checker.evaluator().eval(&t)?;
            for ev in &lower {
                let m = ev.precision();
                stable &= top.reduce(m)? == ev.eval(&t.reduce(m)?)?;
            }
        }
        rec.pass &= point.matched;
        rec.points.push(point);
    }
    if !lower.is_empty() {
        rec.stability = Some(stable);
        rec.pass &= stable;
    }
    rec.observed_sign = observed;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PRational;

    fn theorem_case(p: u64, a: &str, d: u32, n: u32) -> TransformCase {
        TransformCase {
            params: HGParameter::theorem(a.parse::<PRational>().unwrap(), d, p).unwrap(),
            mode: TransformMode::Theorem,
            n,
            field_degree: None,
            sampling: None,
            check_stability: true,
        }
    }

    #[test]
    fn all_points_of_f5_are_admissible_for_half() {
        let mut case = theorem_case(5, "1/2", 1, 1);
        case.mode = TransformMode::ModP;
        case.sampling = Some(Sampling::All);
        let rec = run_case(&case, 0);
        assert_eq!(rec.q, Some(5));
        assert_eq!(rec.points.len(), 4);
        assert!(rec.skipped.is_empty());
        assert!(rec.pass);
    }

    #[test]
    fn empty_grid_passes() {
        let report = run_sweep(&[], 0, Sampling::Random(5));
        assert!(report.pass && report.cases.is_empty());
    }

    #[test]
    fn sweep_is_deterministic_and_extends_field_for_small_primes() {
        let grid = vec![theorem_case(3, "1/4", 2, 2), theorem_case(7, "1/3", 1, 3)];
        let a = run_sweep(&grid, 42, Sampling::Random(5));
        let b = run_sweep(&grid, 42, Sampling::Random(5));
        assert_eq!(a, b);
        assert!(a.pass, "{a:#?}");
        assert!(a.cases[0].q.unwrap() > 3);
        assert_eq!(a.cases[0].points.len(), 5);
        assert_eq!(a.cases[0].stability, Some(true));
    }

    #[test]
    fn p2_case_reports_signs() {
        let rec = run_case(&theorem_case(2, "2/3", 2, 3), 0);
        assert_eq!(rec.predicted_sign, Some(-1));
        assert_eq!(rec.observed_sign, Some(ObservedSign::Minus));
        assert!(rec.pass, "{rec:#?}");
    }

    #[test]
    fn bad_case_is_reported_not_fatal() {
        let mut case = theorem_case(5, "1/2", 1, 2);
        case.mode = TransformMode::ModP;
        let report = run_sweep(
            &[case, theorem_case(5, "1/2", 1, 2)],
            0,
            Sampling::Random(3),
        );
        assert!(!report.cases[0].pass);
        assert!(report.cases[1].pass);
    }
}
