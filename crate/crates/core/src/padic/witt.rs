//! `W(F_q) / p^n`, the unramified extension of `Z_p` of degree `f` truncated
//! at precision `n`, realised as `(Z/p^n)[x] / (M(x))` where `M` is the lift of
//! the `F_q` modulus with least nonnegative coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::fq::{digits, FqSpec};
use super::residue::{ResidueInt, ResidueRing};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct WittRing {
    spec: FqSpec,
    base: ResidueRing,
}

impl WittRing {
    pub fn new(spec: FqSpec, n: u32) -> Result<Arc<Self>> {
        let base = ResidueRing::new(spec.p(), n)?;
        Ok(Arc::new(Self { spec, base }))
    }

    pub fn spec(&self) -> &FqSpec {
        &self.spec
    }

    pub fn base(&self) -> ResidueRing {
        self.base
    }

    pub fn p(&self) -> u64 {
        self.spec.p()
    }

    pub fn degree(&self) -> usize {
        self.spec.degree() as usize
    }

    pub fn precision(&self) -> u32 {
        self.base.precision()
    }

    /// `q = p^f`.
    pub fn residue_order(&self) -> u64 {
        self.spec.order()
    }

    pub fn with_precision(&self, n: u32) -> Result<Arc<Self>> {
        Self::new(self.spec.clone(), n)
    }

    pub fn zero(self: &Arc<Self>) -> WittElement {
        WittElement {
            ring: self.clone(),
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn one(self: &Arc<Self>) -> WittElement {
        self.constant(1)
    }

    pub fn constant(self: &Arc<Self>, c: i128) -> WittElement {
        let mut e = self.zero();
        e.coeffs[0] = self.base.reduce_signed(c);
        e
    }

    /// Element with the given coefficients against the basis `1, x, ..., x^{f-1}`;
    /// missing high coefficients are zero.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[i128]) -> Result<WittElement> {
        if coeffs.len() > self.degree() {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients given for a degree-{} extension",
                coeffs.len(),
                self.degree()
            )));
        }
        let mut e = self.zero();
        for (slot, &c) in e.coeffs.iter_mut().zip(coeffs) {
            *slot = self.base.reduce_signed(c);
        }
        Ok(e)
    }

    pub fn from_residue(self: &Arc<Self>, r: ResidueInt) -> Result<WittElement> {
        if r.ring() != self.base {
            return Err(Error::PrecisionMismatch {
                left_p: r.ring().p(),
                left_n: r.ring().precision(),
                right_p: self.p(),
                right_n: self.precision(),
            });
        }
        Ok(self.constant(r.value() as i128))
    }

    /// The `F_q` element whose base-`p` digits (constant coefficient first)
    /// spell `code`, lifted with least nonnegative coefficients.
    pub fn from_fq_code(self: &Arc<Self>, code: u64) -> WittElement {
        let d = digits(code, self.p(), self.degree());
        WittElement {
            ring: self.clone(),
            coeffs: d,
        }
    }

    /// All nonzero elements of `F_q`, as least-representative lifts, in
    /// increasing code order.
    pub fn fq_units(self: &Arc<Self>) -> impl Iterator<Item = WittElement> + '_ {
        (1..self.residue_order()).map(move |c| self.from_fq_code(c))
    }

    fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.degree();
        let r = &self.base;
        if f == 1 {
            return vec![r.mul(a[0], b[0])];
        }
        let m = r.modulus() as u128;
        let mut prod = vec![0u128; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % m;
            }
        }
        let modulus = self.spec.modulus();
        for i in (f..2 * f - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &mj) in modulus[..f].iter().enumerate() {
                let t = c * mj as u128 % m;
                prod[i - f + j] = (prod[i - f + j] + m - t) % m;
            }
        }
        prod[..f].iter().map(|&v| v as u64).collect()
    }
}

/// An element of `W(F_q) / p^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WittElement {
    ring: Arc<WittRing>,
    coeffs: Vec<u64>,
}

impl WittElement {
    pub fn ring(&self) -> &Arc<WittRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Units are exactly the elements that are nonzero mod `p`.
    pub fn is_unit(&self) -> bool {
        let p = self.ring.p();
        self.coeffs.iter().any(|&c| c % p != 0)
    }

    /// Reduction mod `p`, as coefficients in `[0, p)`.
    pub fn residue(&self) -> Vec<u64> {
        let p = self.ring.p();
        self.coeffs.iter().map(|&c| c % p).collect()
    }

    /// Integer code of the reduction mod `p` (base-`p` digits, constant first).
    pub fn residue_code(&self) -> u64 {
        let p = self.ring.p();
        self.residue().iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let r = self.ring.base;
        Ok(self.with(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(&a, &b)| r.add(a, b))
                .collect(),
        ))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let r = self.ring.base;
        Ok(self.with(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(&a, &b)| r.sub(a, b))
                .collect(),
        ))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.with(self.ring.mul_raw(&self.coeffs, &o.coeffs)))
    }

    pub fn scale(&self, c: u64) -> Self {
        let r = self.ring.base;
        self.with(self.coeffs.iter().map(|&a| r.mul(a, c)).collect())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.ring.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Horner evaluation at `self` of a polynomial with coefficients in `Z/p^n`
    /// (constant term first).
    pub fn eval_poly(&self, coeffs: &[u64]) -> Self {
        let r = self.ring.base;
        if self.ring.degree() == 1 {
            let x = self.coeffs[0];
            let v = coeffs
                .iter()
                .rev()
                .fold(0u64, |acc, &c| r.add(r.mul(acc, x), c));
            return self.with(vec![v]);
        }
        let mut acc = vec![0u64; self.ring.degree()];
        for &c in coeffs.iter().rev() {
            acc = self.ring.mul_raw(&acc, &self.coeffs);
            acc[0] = r.add(acc[0], c);
        }
        self.with(acc)
    }

    /// Multiplicative inverse by Newton iteration from the `F_q` inverse.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NonUnit(self.to_string()));
        }
        let q = self.ring.residue_order();
        // F_q inverse is x^{q-2}; compute it at precision one and lift.
        let residue_ring = self.ring.with_precision(1)?;
        let xbar = self.reduce_to(&residue_ring)?;
        let ybar = xbar.pow(q - 2);
        let mut y = self
            .ring
            .from_coeffs(&ybar.coeffs.iter().map(|&c| c as i128).collect::<Vec<_>>())?;
        let two = self.ring.constant(2);
        let mut prec = 1;
        while prec < self.ring.precision() {
            y = &y * &(&two - &(self * &y));
            prec *= 2;
        }
        debug_assert!(self * &y == self.ring.one());
        Ok(y)
    }

    /// Reduction into a ring over the same field with lower precision.
    pub fn reduce_to(&self, target: &Arc<WittRing>) -> Result<Self> {
        if target.spec != self.ring.spec || target.precision() > self.ring.precision() {
            return Err(Error::InvalidParameter(format!(
                "cannot reduce {} into W/{}^{}",
                self,
                target.p(),
                target.precision()
            )));
        }
        let m = target.base.modulus();
        Ok(WittElement {
            ring: target.clone(),
            coeffs: self.coeffs.iter().map(|&c| c % m).collect(),
        })
    }

    pub fn reduce(&self, n: u32) -> Result<Self> {
        self.reduce_to(&self.ring.with_precision(n)?)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring {
            Ok(())
        } else {
            Err(Error::PrecisionMismatch {
                left_p: self.ring.p(),
                left_n: self.ring.precision(),
                right_p: o.ring.p(),
                right_n: o.ring.precision(),
            })
        }
    }

    fn with(&self, coeffs: Vec<u64>) -> Self {
        WittElement {
            ring: self.ring.clone(),
            coeffs,
        }
    }
}

/// The unique `(q-1)`-th root of unity in `target` congruent to `x` mod `p`.
/// Iterates `z <- z^q` exactly `target.precision()` times starting from the
/// least-representative lift of `x mod p`.
pub fn teichmuller_lift(x: &WittElement, target: &Arc<WittRing>) -> Result<WittElement> {
    if x.ring.spec != target.spec {
        return Err(Error::InvalidParameter(
            "Teichmuller lift across different residue fields".into(),
        ));
    }
    if !x.is_unit() {
        return Err(Error::ZeroInput);
    }
    let q = target.residue_order();
    let mut z = target.from_coeffs(&x.residue().iter().map(|&c| c as i128).collect::<Vec<_>>())?;
    for _ in 0..target.precision() {
        z = z.pow(q);
    }
    Ok(z)
}

/// Inverse of a unit of `W(F_q)/p^n`.
pub fn witt_unit_inverse(x: &WittElement) -> Result<WittElement> {
    x.inverse()
}

impl fmt::Display for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .coeffs
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        write!(
            f,
            "[{}] mod {}^{}",
            body,
            self.ring.p(),
            self.ring.precision()
        )
    }
}

impl fmt::Debug for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! witt_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&WittElement> for &WittElement {
            type Output = WittElement;

            fn $method(self, rhs: &WittElement) -> WittElement {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

witt_binop!(Add, add, try_add);
witt_binop!(Sub, sub, try_sub);
witt_binop!(Mul, mul, try_mul);

impl Neg for &WittElement {
    type Output = WittElement;

    fn neg(self) -> WittElement {
        let r = self.ring.base;
        self.with(self.coeffs.iter().map(|&a| r.neg(a)).collect())
    }
}
