use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::residue::{ResidueInt, ResidueRing};
use crate::error::{Error, Result};

/// A reduced rational number with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PRational {
    num: i64,
    den: i64,
}

impl PRational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidRational(format!("{num}/0")));
        }
        Ok(Self::from_i128(num as i128, den as i128))
    }

    pub fn integer(n: i64) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Self {
            num: i64::try_from(num).expect("rational numerator overflow"),
            den: i64::try_from(den).expect("rational denominator overflow"),
        }
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.den as u64 % p != 0
    }

    /// Strictly between 0 and 1.
    pub fn in_unit_interval(&self) -> bool {
        self.num > 0 && self.num < self.den
    }

    pub fn add_int(&self, k: i64) -> Self {
        Self::from_i128(
            self.num as i128 + k as i128 * self.den as i128,
            self.den as i128,
        )
    }

    pub fn div_int(&self, k: i64) -> Self {
        Self::from_i128(self.num as i128, self.den as i128 * k as i128)
    }

    pub fn checked_add(&self, o: &Self) -> Self {
        Self::from_i128(
            self.num as i128 * o.den as i128 + o.num as i128 * self.den as i128,
            self.den as i128 * o.den as i128,
        )
    }

    pub fn checked_mul(&self, o: &Self) -> Self {
        Self::from_i128(
            self.num as i128 * o.num as i128,
            self.den as i128 * o.den as i128,
        )
    }

    /// Image in `Z/p^n`: numerator times the inverse of the denominator.
    pub fn embed(&self, ring: ResidueRing) -> Result<ResidueInt> {
        if !self.is_p_integral(ring.p()) {
            return Err(Error::DenominatorNotUnit(self.to_string(), ring.p()));
        }
        let den = ring.elem(self.den as i128).inv()?;
        Ok(ring.elem(self.num as i128) * den)
    }
}

/// `a` as an element of `Z/p^n`; fails when `p` divides the denominator.
pub fn embed_rational(a: &PRational, p: u64, n: u32) -> Result<ResidueInt> {
    a.embed(ResidueRing::new(p, n)?)
}

impl PartialOrd for PRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for PRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for PRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRational(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = n.trim().parse::<i64>().map_err(|_| bad())?;
                let d = d.trim().parse::<i64>().map_err(|_| bad())?;
                PRational::new(n, d).map_err(|_| bad())
            }
            None => s.parse::<i64>().map(PRational::integer).map_err(|_| bad()),
        }
    }
}

impl Serialize for PRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
