//! Evaluation of Dwork's function at unit points via truncated series.
//!
//! With `F^(k)` the truncation of `F` below degree `p^k`, Dwork's congruence
//! `F_a(t) / F_{a'}(t^p) = F_a^(n+m)(t) / F_{a'}^(n+m-1)(t^p) mod p^n` holds for every
//! `m >= 0` as an identity of rational functions that are regular off the zero
//! locus of `h_a mod p`. Chaining it over the orbit with `m = f - 1 - i` on the
//! `i`-th factor telescopes the `f`-fold product to
//! `F_a^(n+f-1)(t) / F_{a^(f)}^(n-1)(t^q)`, which is what [`DworkEvaluator`] computes.

use std::sync::Arc;

use super::orbit::{dwork_orbit, DworkOrbit};
use super::series::{truncated_hg, TruncatedPoly};
use super::HGParameter;
use crate::error::{Error, Result};
use crate::padic::{ResidueRing, WittElement, WittRing};

/// `h_a(t) = prod_{i=1}^{period} [F_{a^(i)}(t)]_{<p}` mod `p`. For a
/// preperiodic orbit the product runs over every distinct iterate `a^(i)`, `i >= 1`.
pub fn h_polynomial(params: &HGParameter) -> Result<TruncatedPoly> {
    let orbit = dwork_orbit(params)?;
    h_from_orbit(params, &orbit)
}

fn h_from_orbit(params: &HGParameter, orbit: &DworkOrbit) -> Result<TruncatedPoly> {
    let p = params.p();
    let ring = ResidueRing::new(p, 1)?;
    let mut h = TruncatedPoly::from_raw(ring, vec![1]);
    for a in orbit.forward_iterates() {
        let factor = truncated_hg(&params.with_a(a), p as usize, 1)?;
        h = h.mul(&factor);
    }
    let len = h.degree().map_or(1, |d| d + 1);
    Ok(h.truncate(len))
}

/// Evaluator for `F^{Dw,f}_a(t) = F_a(t) / F_{a^(f)}(t^q)`, `q = p^f`, modulo
/// `p^n`. Holds the two truncated series (`p^{n+f-1}` and `p^{n-1}` terms) and
/// the domain polynomial; memory is `O(p^{n+f-1})` coefficients.
#[derive(Debug, Clone)]
pub struct DworkEvaluator {
    params: HGParameter,
    f: u32,
    n: u32,
    orbit: DworkOrbit,
    numerator: TruncatedPoly,
    denominator: TruncatedPoly,
    h: TruncatedPoly,
}

impl DworkEvaluator {
    pub fn new(params: &HGParameter, f: u32, n: u32) -> Result<Self> {
        if f == 0 {
            return Err(Error::InvalidParameter("f must be >= 1".into()));
        }
        let p = params.p();
        let orbit = dwork_orbit(params)?;
        let num_len = p
            .checked_pow(n + f - 1)
            .filter(|&m| m <= 1 << 24)
            .ok_or_else(|| {
                Error::InvalidParameter(format!("truncation {p}^{} too large", n + f - 1))
            })?;
        let numerator = truncated_hg(params, num_len as usize, n)?;
        let a_f = params.with_a(orbit.iterate(f as usize));
        let denominator = truncated_hg(&a_f, p.pow(n - 1) as usize, n)?;
        let h = h_from_orbit(params, &orbit)?;
        Ok(Self {
            params: params.clone(),
            f,
            n,
            orbit,
            numerator,
            denominator,
            h,
        })
    }

    pub fn params(&self) -> &HGParameter {
        &self.params
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn orbit(&self) -> &DworkOrbit {
        &self.orbit
    }

    pub fn h(&self) -> &TruncatedPoly {
        &self.h
    }

    /// Whether `h(t0) != 0` mod `p`.
    pub fn in_domain(&self, t0: &WittElement) -> Result<bool> {
        let residue_ring = t0.ring().with_precision(1)?;
        let tbar = t0.reduce_to(&residue_ring)?;
        Ok(!self.h.eval(&tbar)?.is_zero())
    }

    /// `F^{Dw,f}(t0) mod p^n`. The point may carry more precision than `n`.
    pub fn eval(&self, t0: &WittElement) -> Result<WittElement> {
        if t0.ring().p() != self.params.p() || t0.ring().precision() < self.n {
            return Err(Error::InvalidParameter(format!(
                "point {t0} has the wrong prime or too little precision (need {})",
                self.n
            )));
        }
        let ring: Arc<WittRing> = t0.ring().with_precision(self.n)?;
        let t = t0.reduce_to(&ring)?;
        if !t.is_unit() {
            return Err(Error::NonUnit(t.to_string()));
        }
        if !self.in_domain(&t)? {
            return Err(Error::NotInDomain(t0.to_string()));
        }
        let q = self.params.p().pow(self.f);
        let num = self.numerator.eval(&t)?;
        let den = self.denominator.eval(&t.pow(q))?;
        let den_inv = den
            .inverse()
            .map_err(|_| Error::NotInDomain(t0.to_string()))?;
        Ok(&num * &den_inv)
    }
}

/// `F^Dw_a(t0) mod p^n`.
pub fn dwork_eval(params: &HGParameter, t0: &WittElement, n: u32) -> Result<WittElement> {
    DworkEvaluator::new(params, 1, n)?.eval(t0)
}

/// `F^{Dw,f}_a(t0) = F_a(t0) / F_{a^(f)}(t0^q) mod p^n` in ratio form.
pub fn dwork_eval_f(params: &HGParameter, f: u32, t0: &WittElement, n: u32) -> Result<WittElement> {
    DworkEvaluator::new(params, f, n)?.eval(t0)
}

/// The same value in product form, `prod_{i=0}^{f-1} F^Dw_{a^(i)}(t0^{p^i})`,
/// each factor evaluated independently.
pub fn dwork_eval_product(
    params: &HGParameter,
    f: u32,
    t0: &WittElement,
    n: u32,
) -> Result<WittElement> {
    let orbit = dwork_orbit(params)?;
    let ring = t0.ring().with_precision(n)?;
    let mut acc = ring.one();
    let mut point = t0.reduce_to(&ring)?;
    for i in 0..f as usize {
        let factor = dwork_eval(&params.with_a(orbit.iterate(i)), &point, n)?;
        acc = &acc * &factor;
        point = point.pow(params.p());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{teichmuller_lift, FqSpec, PRational};

    fn q(s: &str) -> PRational {
        s.parse().unwrap()
    }

    fn teich(p: u64, x: i128, n: u32) -> WittElement {
        let spec = FqSpec::prime_field(p).unwrap();
        let w1 = WittRing::new(spec.clone(), 1).unwrap();
        teichmuller_lift(&w1.constant(x), &WittRing::new(spec, n).unwrap()).unwrap()
    }

    #[test]
    fn h_polynomial_examples() {
        let h = h_polynomial(&HGParameter::theorem(q("1/2"), 1, 5).unwrap()).unwrap();
        assert_eq!(h.raw(), &[1, 4, 1]);
        let h = h_polynomial(&HGParameter::library(q("1"), 0, 5).unwrap()).unwrap();
        assert_eq!(h.raw(), &[1, 1, 1, 1, 1]);
        for (a, p) in [("2/5", 3u64), ("1/7", 5), ("3/11", 13)] {
            let params = HGParameter::theorem(q(a), 2, p).unwrap();
            let period = dwork_orbit(&params).unwrap().period;
            let deg = h_polynomial(&params).unwrap().degree().unwrap();
            assert!(deg <= period * (p as usize - 1));
        }
    }

    /// Values frozen from an independent exact-fraction implementation.
    #[test]
    fn frozen_values() {
        let cases = [
            (5, "1/2", 1, 2, 2, 7, 13),
            (7, "1/3", 2, 3, 2, 324, 94),
            (3, "1/4", 2, 3, 2, 26, 10),
        ];
        for (p, a, d, n, x, lift, want) in cases {
            let t = teich(p, x, n);
            assert_eq!(t.coeffs(), &[lift]);
            let v = dwork_eval(&HGParameter::theorem(q(a), d, p).unwrap(), &t, n).unwrap();
            assert_eq!(v.coeffs(), &[want], "p={p} a={a} d={d}");
        }
    }

    #[test]
    fn geometric_series_against_power_series_quotient() {
        // F_1 = 1/(1-t) for d = 0, and F_1(t)/F_1(t^5) as a power series mod 25.
        let params = HGParameter::library(q("1"), 0, 5).unwrap();
        let m = 25u64;
        let len = 51;
        let num = vec![1u64; len];
        let mut den = vec![0u64; len];
        for k in (0..len).step_by(5) {
            den[k] = 1;
        }
        // series division num / den, den[0] = 1
        let mut quot = vec![0u64; len];
        for k in 0..len {
            let mut c = num[k] as i128;
            for j in 1..=k {
                c -= den[j] as i128 * quot[k - j] as i128;
            }
            quot[k] = c.rem_euclid(m as i128) as u64;
        }
        assert!(quot[5..].iter().all(|&c| c == 0));
        let t = teich(5, 2, 2);
        let expected = quot.iter().rev().fold(0u64, |acc, &c| (acc * 7 + c) % m);
        assert_eq!(dwork_eval(&params, &t, 2).unwrap().coeffs(), &[expected]);
    }

    #[test]
    fn mod_p_value_is_leading_truncation() {
        let params = HGParameter::theorem(q("2/7"), 2, 5).unwrap();
        let trunc = truncated_hg(&params, 5, 1).unwrap();
        for x in 1..5 {
            let t = teich(5, x, 1);
            match dwork_eval(&params, &t, 1) {
                Ok(v) => assert_eq!(v, trunc.eval(&t).unwrap()),
                Err(e) => assert!(matches!(e, Error::NotInDomain(_))),
            }
        }
    }

    #[test]
    fn precision_coherence() {
        for (p, a, d) in [
            (5u64, "1/2", 1),
            (7, "2/3", 2),
            (3, "3/4", 3),
            (13, "1/6", 1),
        ] {
            let params = HGParameter::theorem(q(a), d, p).unwrap();
            let evs: Vec<DworkEvaluator> = (1..=4)
                .map(|n| DworkEvaluator::new(&params, 1, n).unwrap())
                .collect();
            for x in 1..p as i128 {
                let t = teich(p, x, 4);
                let Ok(top) = evs[3].eval(&t) else { continue };
                for n in 1..4 {
                    assert_eq!(
                        top.reduce(n).unwrap(),
                        evs[n as usize - 1].eval(&t).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn ratio_and_product_forms_agree() {
        for (p, a, d, f) in [
            (3u64, "1/2", 1, 2),
            (5, "1/3", 2, 2),
            (3, "1/4", 1, 3),
            (2, "1/3", 2, 2),
        ] {
            let params = HGParameter::theorem(q(a), d, p).unwrap();
            let spec = FqSpec::default_for(p, f).unwrap();
            let w1 = WittRing::new(spec.clone(), 1).unwrap();
            let wn = WittRing::new(spec, 3).unwrap();
            let one_f = dwork_eval_f(&params, 1, &teich(p, 1, 3), 3);
            assert_eq!(one_f.ok(), dwork_eval(&params, &teich(p, 1, 3), 3).ok());
            for x in w1.fq_units() {
                let t = teichmuller_lift(&x, &wn).unwrap();
                assert_eq!(t.pow(p.pow(f)), t);
                match dwork_eval_f(&params, f, &t, 3) {
                    Ok(v) => assert_eq!(v, dwork_eval_product(&params, f, &t, 3).unwrap()),
                    Err(e) => assert!(matches!(e, Error::NotInDomain(_))),
                }
            }
        }
    }

    #[test]
    fn domain_errors() {
        let params = HGParameter::theorem(q("1/2"), 1, 5).unwrap();
        let ev = DworkEvaluator::new(&params, 1, 2).unwrap();
        let w = WittRing::new(FqSpec::prime_field(5).unwrap(), 2).unwrap();
        assert!(matches!(ev.eval(&w.constant(5)), Err(Error::NonUnit(_))));
        assert!(matches!(
            ev.eval(&teich(5, 2, 1)),
            Err(Error::InvalidParameter(_))
        ));
        // some r/7 at p = 5 has h vanishing on F_5^*
        let mut found = false;
        for r in 1..7 {
            let params = HGParameter::theorem(PRational::new(r, 7).unwrap(), 1, 5).unwrap();
            let ev = DworkEvaluator::new(&params, 1, 2).unwrap();
            for x in 1..5 {
                let t = teich(5, x, 2);
                if !ev.in_domain(&t).unwrap() {
                    assert!(matches!(ev.eval(&t), Err(Error::NotInDomain(_))));
                    found = true;
                }
            }
        }
        assert!(found);
    }
}
