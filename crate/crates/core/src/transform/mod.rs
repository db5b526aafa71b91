//! Verification of the `t <-> 1/t` transformation formula
//! `F(t) = s ((-1)^{d+1} t)^l F(1/t)` at Teichmuller points, for the single
//! Dwork step (`l` mod `p`), its mod-`p` shadow, and the `f`-fold function
//! (`l` mod `q`).

pub(crate) mod sweep;

pub use sweep::{run_case, run_sweep, Sampling, TransformCase, TransformMode, VerificationReport};

use crate::error::{Error, Result};
use crate::hypergeom::{dwork_prime, DworkEvaluator, HGParameter};
use crate::padic::{PRational, WittElement};
use crate::record::{ObservedSign, PointRecord};

/// The unique `l` in `[0, modulus)` with `a + l = 0 mod modulus`.
pub fn exponent_l(a: &PRational, modulus: u64) -> Result<u64> {
    let m = modulus as i128;
    let den = a.denom() as i128;
    let inv = crate::primes::inv_mod(den.rem_euclid(m) as u64, modulus)
        .ok_or_else(|| Error::DenominatorNotUnit(a.to_string(), modulus))?;
    let residue = (a.numer() as i128).rem_euclid(m) * inv as i128 % m;
    Ok(((m - residue) % m) as u64)
}

/// Sign in front of the single-step formula: `+1` for odd `p`; for `p = 2`,
/// `-1` exactly when `d` is even and `a'` is a 2-adic unit.
pub fn predicted_sign(params: &HGParameter) -> i8 {
    if params.p() != 2 {
        return 1;
    }
    let (a_prime, _) = dwork_prime(params.a(), 2).expect("odd denominator");
    // a' = r'/N with N odd, so a' = 1 mod 2 iff r' is odd
    if params.d() % 2 == 0 && a_prime.numer().rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

/// `F(t0)` and `((-1)^{d+1} t0)^l F(1/t0)` evaluated with one evaluator,
/// compared under a fixed sign or, when `sign` is `None`, under both signs.
#[derive(Debug, Clone)]
pub struct TransformChecker {
    evaluator: DworkEvaluator,
    l: u64,
    sign: Option<i8>,
}

impl TransformChecker {
    /// Single Dwork step with `l` mod `p` and the predicted sign.
    pub fn theorem(params: &HGParameter, n: u32) -> Result<Self> {
        if !params.is_theorem_mode() {
            return Err(Error::InvalidParameter(format!(
                "a = {} does not satisfy 0 < a < 1",
                params.a()
            )));
        }
        Ok(Self {
            evaluator: DworkEvaluator::new(params, 1, n)?,
            l: exponent_l(params.a(), params.p())?,
            sign: Some(predicted_sign(params)),
        })
    }

    /// The mod-`p` statement for any p-integral `a`: single step, `n = 1`, sign `+1`.
    pub fn mod_p(params: &HGParameter) -> Result<Self> {
        Ok(Self {
            evaluator: DworkEvaluator::new(params, 1, 1)?,
            l: exponent_l(params.a(), params.p())?,
            sign: Some(1),
        })
    }

    /// The `f`-fold function with `l` mod `q = p^f`; for `p = 2` the sign is
    /// measured instead of asserted.
    pub fn corollary(params: &HGParameter, f: u32, n: u32) -> Result<Self> {
        let q = params.p().pow(f);
        Ok(Self {
            evaluator: DworkEvaluator::new(params, f, n)?,
            l: exponent_l(params.a(), q)?,
            sign: (params.p() != 2).then_some(1),
        })
    }

    pub fn evaluator(&self) -> &DworkEvaluator {
        &self.evaluator
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    /// `None` when both `t0` and `1/t0` avoid the zero locus of `h` mod `p`,
    /// otherwise the reason the point is skipped.
    pub fn admissibility(&self, t0: &WittElement) -> Result<Option<String>> {
        if !t0.is_unit() {
            return Ok(Some("not a unit".into()));
        }
        let direct = self.evaluator.in_domain(t0)?;
        let inverse = self.evaluator.in_domain(&t0.inverse()?)?;
        Ok(match (direct, inverse) {
            (true, true) => None,
            (false, false) => Some("h(t) = 0 and h(1/t) = 0 mod p".into()),
            (false, true) => Some("h(t) = 0 mod p only".into()),
            (true, false) => Some("h(1/t) = 0 mod p only".into()),
        })
    }

    pub fn check(&self, t0: &WittElement) -> Result<PointRecord> {
        let params = self.evaluator.params();
        let n = self.evaluator.precision();
        let t = t0.reduce(n)?;
        if let Some(reason) = self.admissibility(&t)? {
            return Err(Error::NotInDomain(format!("{} ({reason})", point_tag(&t))));
        }
        let lhs = self.evaluator.eval(&t)?;
        let t_inv = t.inverse()?;
        let mut factor = t.clone();
        if params.d() % 2 == 0 {
            factor = -&factor;
        }
        let base = &factor.pow(self.l) * &self.evaluator.eval(&t_inv)?;
        let neg = -&base;
        let observed = ObservedSign::from_matches(lhs == base, lhs == neg);
        let sign = self
            .sign
            .unwrap_or(if observed.admits(-1) && !observed.admits(1) {
                -1
            } else {
                1
            });
        let rhs = if sign == 1 { base } else { neg };
        Ok(PointRecord {
            point: point_tag(&t),
            lhs: render_witt(&lhs),
            rhs: render_witt(&rhs),
            matched: lhs == rhs,
            matched_precision: Some(agreement_precision(&lhs, &rhs)),
            sign_used: Some(sign),
            observed_sign: (params.p() == 2).then_some(observed),
        })
    }
}

/// Checks the single-step formula at `t0` modulo `p^n`.
pub fn verify_theorem_point(params: &HGParameter, t0: &WittElement, n: u32) -> Result<PointRecord> {
    TransformChecker::theorem(params, n)?.check(t0)
}

/// Checks the `f`-fold formula at `zeta0` modulo `p^n`.
pub fn verify_corollary_point(
    params: &HGParameter,
    f: u32,
    zeta0: &WittElement,
    n: u32,
) -> Result<PointRecord> {
    TransformChecker::corollary(params, f, n)?.check(zeta0)
}

/// `teich:x` for a prime field, `teich:c0,c1,...` otherwise.
pub fn point_tag(t: &WittElement) -> String {
    format!("teich:{}", join(&t.residue()))
}

/// Coefficients against the power basis as decimal strings, comma separated.
pub fn render_witt(v: &WittElement) -> String {
    join(v.coeffs())
}

fn join(c: &[u64]) -> String {
    c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Largest `k <= n` with `x = y mod p^k`.
pub fn agreement_precision(x: &WittElement, y: &WittElement) -> u32 {
    let diff = x - y;
    let n = x.ring().precision();
    let p = x.ring().p();
    diff.coeffs()
        .iter()
        .map(|&c| {
            if c == 0 {
                n
            } else {
                crate::primes::valuation(c as i128, p).min(n)
            }
        })
        .min()
        .unwrap_or(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeom::{dwork_eval, h_polynomial, truncated_hg};
    use crate::padic::{teichmuller_lift, FqSpec, WittRing};

    fn q(s: &str) -> PRational {
        s.parse().unwrap()
    }

    fn lifts(spec: FqSpec, n: u32) -> Vec<WittElement> {
        let w1 = WittRing::new(spec.clone(), 1).unwrap();
        let wn = WittRing::new(spec, n).unwrap();
        w1.fq_units()
            .map(|x| teichmuller_lift(&x, &wn).unwrap())
            .collect()
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(exponent_l(&q("1/2"), 5).unwrap(), 2);
        assert_eq!(exponent_l(&q("1/3"), 7).unwrap(), 2);
        assert_eq!(exponent_l(&q("1/2"), 25).unwrap(), 12);
        assert_eq!(exponent_l(&q("0"), 5).unwrap(), 0);
        assert!(exponent_l(&q("1/5"), 25).is_err());
    }

    #[test]
    fn sign_examples() {
        for d in 0..4 {
            assert_eq!(
                predicted_sign(&HGParameter::theorem(q("1/2"), d, 5).unwrap()),
                1
            );
        }
        assert_eq!(
            predicted_sign(&HGParameter::theorem(q("1/3"), 1, 2).unwrap()),
            1
        );
        assert_eq!(
            predicted_sign(&HGParameter::theorem(q("1/3"), 2, 2).unwrap()),
            1
        );
        // 2/3: l = 0, a' = 1/3, odd numerator
        assert_eq!(
            predicted_sign(&HGParameter::theorem(q("2/3"), 2, 2).unwrap()),
            -1
        );
    }

    #[test]
    fn theorem_point_example() {
        let params = HGParameter::theorem(q("1/2"), 1, 5).unwrap();
        let t = &lifts(FqSpec::prime_field(5).unwrap(), 2)[1];
        assert_eq!(t.coeffs(), &[7]);
        let rec = verify_theorem_point(&params, t, 2).unwrap();
        assert!(rec.matched, "{rec:?}");
        assert_eq!(rec.matched_precision, Some(2));
        assert_eq!(t.pow(2).coeffs(), &[24]); // ((-1)^2 * 7)^2 = 49
    }

    #[test]
    fn mod_p_on_all_of_f5() {
        let params = HGParameter::theorem(q("1/2"), 1, 5).unwrap();
        let checker = TransformChecker::mod_p(&params).unwrap();
        for t in lifts(FqSpec::prime_field(5).unwrap(), 1) {
            assert_eq!(checker.admissibility(&t).unwrap(), None);
            assert!(checker.check(&t).unwrap().matched);
        }
    }

    #[test]
    fn fixed_point_one_is_consistent() {
        for (p, a, d) in [(5u64, "1/3", 2), (7, "1/2", 1), (13, "5/6", 3)] {
            let params = HGParameter::theorem(q(a), d, p).unwrap();
            let checker = TransformChecker::theorem(&params, 2).unwrap();
            let one = WittRing::new(FqSpec::prime_field(p).unwrap(), 2)
                .unwrap()
                .one();
            if checker.admissibility(&one).unwrap().is_none() {
                let rec = checker.check(&one).unwrap();
                assert!(rec.matched);
                let l = checker.l() as u32;
                assert_eq!((-1i64).pow((d + 1) * l), 1, "sign forced at t = 1");
            }
        }
    }

    #[test]
    fn corollary_examples() {
        let params = HGParameter::theorem(q("1/2"), 1, 5).unwrap();
        let mut checked = 0;
        for z in lifts(FqSpec::for_order(25).unwrap(), 2) {
            let checker = TransformChecker::corollary(&params, 2, 2).unwrap();
            if checker.admissibility(&z).unwrap().is_none() {
                assert!(verify_corollary_point(&params, 2, &z, 2).unwrap().matched);
                checked += 1;
            }
        }
        assert!(checked > 0);

        let params = HGParameter::theorem(q("1/3"), 2, 5).unwrap();
        let checker = TransformChecker::corollary(&params, 1, 2).unwrap();
        let theorem = TransformChecker::theorem(&params, 2).unwrap();
        for t in lifts(FqSpec::prime_field(5).unwrap(), 2) {
            if checker.admissibility(&t).unwrap().is_none() {
                let a = checker.check(&t).unwrap();
                assert!(a.matched);
                assert_eq!(a, theorem.check(&t).unwrap());
            }
        }
    }

    #[test]
    fn double_inversion() {
        for (p, a, d) in [(7u64, "1/3", 2), (5, "3/4", 1), (13, "1/6", 3)] {
            let params = HGParameter::theorem(q(a), d, p).unwrap();
            let checker = TransformChecker::theorem(&params, 3).unwrap();
            let l = checker.l();
            for t in lifts(FqSpec::prime_field(p).unwrap(), 3) {
                if checker.admissibility(&t).unwrap().is_some() {
                    continue;
                }
                let t_inv = t.inverse().unwrap();
                assert!(checker.admissibility(&t_inv).unwrap().is_none());
                assert_eq!(
                    checker.check(&t).unwrap().matched,
                    checker.check(&t_inv).unwrap().matched
                );
                let sign = if d % 2 == 0 { -1 } else { 1 };
                let f1 = t.scale(t.ring().base().reduce_signed(sign)).pow(l);
                let f2 = t_inv.scale(t.ring().base().reduce_signed(sign)).pow(l);
                assert_eq!(&f1 * &f2, t.ring().one());
            }
        }
    }

    #[test]
    fn h_zero_locus_matches_factor_zeros() {
        for q_order in [3u64, 4, 5, 7, 8, 9, 11, 13, 16, 25] {
            let spec = FqSpec::for_order(q_order).unwrap();
            let p = spec.p();
            let w1 = WittRing::new(spec, 1).unwrap();
            for den in [2i64, 3, 4, 5, 6, 7] {
                if den as u64 % p == 0 {
                    continue;
                }
                for r in 1..den {
                    let params =
                        HGParameter::theorem(PRational::new(r, den).unwrap(), 2, p).unwrap();
                    let h = h_polynomial(&params).unwrap();
                    let orbit = crate::hypergeom::dwork_orbit(&params).unwrap();
                    for t in w1.fq_units() {
                        let via_h = !h.eval(&t).unwrap().is_zero();
                        let via_factors = orbit.forward_iterates().iter().all(|&b| {
                            let factor = truncated_hg(&params.with_a(b), p as usize, 1).unwrap();
                            !factor.eval(&t).unwrap().is_zero()
                        });
                        assert_eq!(via_h, via_factors);
                    }
                }
            }
        }
    }

    #[test]
    fn mod_p_holds_for_general_rationals() {
        for (p, a, d) in [
            (5u64, "-7/3", 1),
            (7, "9/4", 2),
            (3, "-1/2", 1),
            (2, "5/3", 2),
        ] {
            let params = HGParameter::library(q(a), d, p).unwrap();
            let checker = TransformChecker::mod_p(&params).unwrap();
            for t in lifts(FqSpec::default_for(p, 2).unwrap(), 1) {
                if checker.admissibility(&t).unwrap().is_none() {
                    assert!(checker.check(&t).unwrap().matched, "p={p} a={a} t={t}");
                }
            }
        }
    }

    #[test]
    fn inadmissible_point_is_rejected() {
        // scan for a parameter whose h vanishes somewhere on F_5^*
        for r in 1..7 {
            let params = HGParameter::theorem(PRational::new(r, 7).unwrap(), 1, 5).unwrap();
            let checker = TransformChecker::theorem(&params, 2).unwrap();
            for t in lifts(FqSpec::prime_field(5).unwrap(), 2) {
                if checker.admissibility(&t).unwrap().is_some() {
                    assert!(matches!(checker.check(&t), Err(Error::NotInDomain(_))));
                    assert!(
                        dwork_eval(&params, &t, 2).is_err()
                            || dwork_eval(&params, &t.inverse().unwrap(), 2).is_err()
                    );
                    return;
                }
            }
        }
        panic!("no inadmissible point found");
    }
}
