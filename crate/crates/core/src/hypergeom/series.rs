//! Truncations of `F_a(t) = sum_k ((a)_k / k!)^{d+1} t^k` with coefficients
//! in `Z/p^n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::HGParameter;
use crate::error::{Error, Result};
use crate::padic::{PRational, ResidueInt, ResidueRing, WittElement};
use crate::primes::{inv_mod, valuation};

/// A polynomial of length `m` (degree `< m`) over `Z/p^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPoly {
    ring: ResidueRing,
    coeffs: Vec<u64>,
}

impl TruncatedPoly {
    pub fn from_raw(ring: ResidueRing, coeffs: Vec<u64>) -> Self {
        let m = ring.modulus();
        Self {
            ring,
            coeffs: coeffs.into_iter().map(|c| c % m).collect(),
        }
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    /// Truncation bound `m`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> ResidueInt {
        self.ring
            .elem(self.coeffs.get(k).copied().unwrap_or(0) as i128)
    }

    pub fn raw(&self) -> &[u64] {
        &self.coeffs
    }

    /// Degree of the highest nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    /// `[self]_{<m}`.
    pub fn truncate(&self, m: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(m, 0);
        Self {
            ring: self.ring,
            coeffs,
        }
    }

    pub fn reduce(&self, n: u32) -> Result<Self> {
        Ok(Self::from_raw(
            self.ring.with_precision(n)?,
            self.coeffs.clone(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring, "polynomials over different rings");
        if self.is_empty() || other.is_empty() {
            return Self::from_raw(self.ring, Vec::new());
        }
        let r = self.ring;
        let mut out = vec![0u64; self.len() + other.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = r.add(out[i + j], r.mul(a, b));
            }
        }
        Self {
            ring: r,
            coeffs: out,
        }
    }

    /// Value at a point of `W(F_q)/p^n`; the point's precision must match.
    pub fn eval(&self, x: &WittElement) -> Result<WittElement> {
        if x.ring().base() != self.ring {
            return Err(Error::PrecisionMismatch {
                left_p: self.ring.p(),
                left_n: self.ring.precision(),
                right_p: x.ring().p(),
                right_n: x.ring().precision(),
            });
        }
        Ok(x.eval_poly(&self.coeffs))
    }
}

/// Exact `(a)_k = a (a+1) ... (a+k-1)`.
pub fn pochhammer_exact(a: &PRational, k: u64) -> BigRational {
    let base = BigRational::new(BigInt::from(a.numer()), BigInt::from(a.denom()));
    let mut acc = BigRational::one();
    for j in 0..k {
        acc *= &base + BigRational::from_integer(BigInt::from(j));
    }
    acc
}

/// Exact coefficient `((a)_k / k!)^{d+1}` of `F_a`.
pub fn hg_coefficient_exact(a: &PRational, d: u32, k: u64) -> BigRational {
    let mut fact = BigInt::one();
    for j in 2..=k {
        fact *= j;
    }
    let u = pochhammer_exact(a, k) / BigRational::from_integer(fact);
    num_traits::pow(u, d as usize + 1)
}

/// Image of an exact rational in `Z/p^n`.
pub fn embed_big(x: &BigRational, ring: ResidueRing) -> Result<ResidueInt> {
    let m = BigInt::from(ring.modulus());
    let den = x.denom().mod_floor(&m).to_u64().unwrap();
    if den % ring.p() == 0 {
        return Err(Error::DenominatorNotUnit(x.to_string(), ring.p()));
    }
    let num = x.numer().mod_floor(&m).to_u64().unwrap();
    let inv = inv_mod(den, ring.modulus()).expect("unit denominator");
    Ok(ring.elem(num as i128) * ring.elem(inv as i128))
}

/// p-adic valuation of a nonzero exact rational.
pub fn valuation_big(x: &BigRational, p: u64) -> i64 {
    assert!(!x.is_zero());
    let v = |z: &BigInt| {
        let p = BigInt::from(p);
        let mut z = z.abs();
        let mut v = 0i64;
        while (&z % &p).is_zero() {
            z /= &p;
            v += 1;
        }
        v
    };
    v(x.numer()) - v(x.denom())
}

/// `(a)_k` embedded in `Z/p^n`.
pub fn pochhammer(a: &PRational, k: u64, p: u64, n: u32) -> Result<ResidueInt> {
    let ring = ResidueRing::new(p, n)?;
    if !a.is_p_integral(p) {
        return Err(Error::DenominatorNotUnit(a.to_string(), p));
    }
    embed_big(&pochhammer_exact(a, k), ring)
}

/// The first `m` coefficients of `F_a` in `Z/p^n`.
///
/// Walks `u_{k+1} = u_k (a + k) / (k + 1)` keeping `u_k = U p^v` with `U` a
/// unit known mod `p^n` and `v` exact, so `k!` never has to be inverted.
pub fn hg_coefficients(a: &PRational, d: u32, m: usize, ring: ResidueRing) -> Result<Vec<u64>> {
    let p = ring.p();
    if !a.is_p_integral(p) {
        return Err(Error::DenominatorNotUnit(a.to_string(), p));
    }
    let (r, den) = (a.numer() as i128, a.denom() as i128);
    let n = ring.precision() as i64;
    let den_inv = ring
        .inv(ring.reduce_signed(den))
        .expect("p-free denominator");
    let e = d as u64 + 1;

    let mut out = Vec::with_capacity(m);
    let mut unit = 1u64;
    let mut val = 0i64;
    let mut vanished = false;
    for k in 0..m {
        if vanished {
            out.push(0);
            continue;
        }
        debug_assert!(val >= 0, "F_a has a non-integral coefficient");
        let total = val * e as i64;
        out.push(if total >= n {
            0
        } else {
            let pv = ring.pow(p, total as u64);
            ring.mul(ring.pow(unit, e), pv)
        });

        // a + k = (r + k N) / N
        let top = r + k as i128 * den;
        if top == 0 {
            vanished = true;
            continue;
        }
        let vt = valuation(top, p);
        let ut = top / (p as i128).pow(vt);
        let bottom = k as i128 + 1;
        let vb = valuation(bottom, p);
        let ub = bottom / (p as i128).pow(vb);
        let ub_inv = ring.inv(ring.reduce_signed(ub)).expect("unit part");
        unit = ring.mul(unit, ring.reduce_signed(ut));
        unit = ring.mul(unit, ring.mul(ub_inv, den_inv));
        val += vt as i64 - vb as i64;
    }
    Ok(out)
}

/// `[F_a(t)]_{<m}` over `Z/p^n` for the tuple `(a, ..., a)` of length `d + 1`.
pub fn truncated_hg(params: &HGParameter, m: usize, n: u32) -> Result<TruncatedPoly> {
    let ring = ResidueRing::new(params.p(), n)?;
    let coeffs = hg_coefficients(params.a(), params.d(), m, ring)?;
    Ok(TruncatedPoly { ring, coeffs })
}
