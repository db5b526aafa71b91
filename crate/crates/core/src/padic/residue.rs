//! Integers modulo `p^n`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::primes::{checked_pow, inv_mod, is_prime, mul_mod, pow_mod};

/// The ring `Z/p^n` for a prime `p`, with `p^n <= 2^63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    p: u64,
    n: u32,
    modulus: u64,
}

impl ResidueRing {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroPrecision);
        }
        let modulus = checked_pow(p, n)
            .filter(|&m| m <= 1 << 63)
            .ok_or(Error::PrecisionOverflow { p, n })?;
        Ok(Self { p, n, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    /// `p^n`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Same prime at a different precision.
    pub fn with_precision(&self, n: u32) -> Result<Self> {
        Self::new(self.p, n)
    }

    pub fn elem(&self, value: i128) -> ResidueInt {
        ResidueInt {
            ring: *self,
            value: self.reduce_signed(value),
        }
    }

    pub fn zero(&self) -> ResidueInt {
        self.elem(0)
    }

    pub fn one(&self) -> ResidueInt {
        self.elem(1)
    }

    #[inline]
    pub fn reduce_signed(&self, v: i128) -> u64 {
        v.rem_euclid(self.modulus as i128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.modulus)
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        inv_mod(a, self.modulus)
    }
}

impl fmt::Display for ResidueRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.n)
    }
}

/// An element of `Z/p^n`. Binary operators panic when the two operands
/// come from different rings; the `try_*` methods report it instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueInt {
    ring: ResidueRing,
    value: u64,
}

impl ResidueInt {
    pub fn new(value: i128, p: u64, n: u32) -> Result<Self> {
        Ok(ResidueRing::new(p, n)?.elem(value))
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    /// Least nonnegative representative.
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.value)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::PrecisionMismatch {
                left_p: self.ring.p,
                left_n: self.ring.n,
                right_p: other.ring.p,
                right_n: other.ring.n,
            })
        }
    }

    pub fn try_add(self, other: Self) -> Result<Self> {
        self.check(&other)?;
        Ok(self.with(self.ring.add(self.value, other.value)))
    }

    pub fn try_sub(self, other: Self) -> Result<Self> {
        self.check(&other)?;
        Ok(self.with(self.ring.sub(self.value, other.value)))
    }

    pub fn try_mul(self, other: Self) -> Result<Self> {
        self.check(&other)?;
        Ok(self.with(self.ring.mul(self.value, other.value)))
    }

    pub fn inv(self) -> Result<Self> {
        self.ring
            .inv(self.value)
            .map(|v| self.with(v))
            .ok_or_else(|| Error::NonUnit(self.to_string()))
    }

    pub fn pow(self, e: u64) -> Self {
        self.with(self.ring.pow(self.value, e))
    }

    /// Reduction to a lower precision `n' <= n`.
    pub fn reduce(self, n: u32) -> Result<Self> {
        if n > self.ring.n {
            return Err(Error::InvalidParameter(format!(
                "cannot reduce from precision {} up to {}",
                self.ring.n, n
            )));
        }
        let ring = self.ring.with_precision(n)?;
        Ok(ResidueInt {
            ring,
            value: self.value % ring.modulus,
        })
    }

    fn with(self, value: u64) -> Self {
        ResidueInt {
            ring: self.ring,
            value,
        }
    }
}

impl fmt::Display for ResidueInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.ring.p, self.ring.n)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr for ResidueInt {
            type Output = ResidueInt;

            fn $method(self, rhs: ResidueInt) -> ResidueInt {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for ResidueInt {
    type Output = ResidueInt;

    fn neg(self) -> ResidueInt {
        self.with(self.ring.neg(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(v: i128, p: u64, n: u32) -> ResidueInt {
        ResidueInt::new(v, p, n).unwrap()
    }

    #[test]
    fn inverse_of_four_mod_25() {
        assert_eq!(r(4, 5, 2).inv().unwrap().value(), 19);
    }

    #[test]
    fn multiplicative_identity() {
        let x = r(17, 5, 2);
        assert_eq!(x * x.ring().one(), x);
    }

    #[test]
    fn seven_has_order_four_mod_25() {
        assert_eq!(r(7, 5, 2).pow(2).value(), 24);
        assert_eq!(r(7, 5, 2).pow(4).value(), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(r(10, 5, 2).inv(), Err(Error::NonUnit(_))));
        assert!(matches!(
            r(1, 5, 2).try_add(r(1, 5, 3)),
            Err(Error::PrecisionMismatch { .. })
        ));
        assert!(matches!(ResidueRing::new(4, 2), Err(Error::NotPrime(4))));
        assert!(matches!(ResidueRing::new(5, 0), Err(Error::ZeroPrecision)));
        assert!(matches!(
            ResidueRing::new(2, 64),
            Err(Error::PrecisionOverflow { .. })
        ));
        assert!(ResidueRing::new(2, 63).is_ok());
    }

    #[test]
    #[should_panic(expected = "different rings")]
    fn operator_panics_on_mismatch() {
        let _ = r(1, 5, 2) * r(1, 7, 2);
    }

    proptest! {
        #[test]
        fn precision_coherence(a in -10_000i128..10_000, b in -10_000i128..10_000, e in 0u64..50) {
            let (hi, lo) = (4, 2);
            let (x, y) = (r(a, 7, hi), r(b, 7, hi));
            let (xl, yl) = (r(a, 7, lo), r(b, 7, lo));
            prop_assert_eq!((x + y).reduce(lo).unwrap(), xl + yl);
            prop_assert_eq!((x - y).reduce(lo).unwrap(), xl - yl);
            prop_assert_eq!((x * y).reduce(lo).unwrap(), xl * yl);
            prop_assert_eq!(x.pow(e).reduce(lo).unwrap(), xl.pow(e));
            if x.is_unit() {
                prop_assert_eq!(x.inv().unwrap().reduce(lo).unwrap(), xl.inv().unwrap());
                prop_assert_eq!((x * x.inv().unwrap()).value(), 1);
            }
        }
    }
}
