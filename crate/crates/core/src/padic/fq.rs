//! Finite field presentations `F_p[x]/(m(x))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{inv_mod, is_prime, prime_divisors};

/// Conway polynomials (coefficients low to high, monic) for the prime powers
/// the sweeps use most.
const BUILTIN_MODULI: &[(u64, u32, &[u64])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
];

/// `F_q` with `q = p^f`, presented by a monic irreducible modulus of degree `f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FqSpec {
    p: u64,
    modulus: Vec<u64>,
}

impl FqSpec {
    /// `modulus` lists coefficients from the constant term up; it must be monic.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus(p));
        }
        let spec = Self { p, modulus };
        if !is_irreducible(p, &spec.modulus) {
            return Err(Error::ReducibleModulus(spec.modulus_string(), p));
        }
        Ok(spec)
    }

    /// The prime field, presented as `F_p[x]/(x)`.
    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(p, vec![0, 1])
    }

    /// Built-in modulus for `q = p^f`: a Conway polynomial from the table when
    /// available, otherwise the least monic irreducible polynomial in
    /// lexicographic order of its coefficient vector.
    pub fn default_for(p: u64, f: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::InvalidParameter(
                "extension degree must be >= 1".into(),
            ));
        }
        if f == 1 {
            return Self::prime_field(p);
        }
        if let Some((_, _, m)) = BUILTIN_MODULI
            .iter()
            .find(|(bp, bf, _)| *bp == p && *bf == f)
        {
            return Self::new(p, m.to_vec());
        }
        let count = p
            .checked_pow(f)
            .ok_or_else(|| Error::InvalidParameter(format!("{p}^{f} too large")))?;
        for code in 0..count {
            let mut m = digits(code, p, f as usize);
            m.push(1);
            if is_irreducible(p, &m) {
                return Self::new(p, m);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Built-in presentation of `F_q` for a prime power `q`.
    pub fn for_order(q: u64) -> Result<Self> {
        let (p, f) = prime_power(q)
            .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
        Self::default_for(p, f)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        (self.modulus.len() - 1) as u32
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.degree())
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        poly_string(&self.modulus)
    }
}

impl fmt::Display for FqSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[x]/({})", self.p, self.modulus_string())
    }
}

/// `(p, f)` with `q = p^f`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let ps = prime_divisors(q);
    if ps.len() != 1 {
        return None;
    }
    let p = ps[0];
    let (mut r, mut f) = (q, 0);
    while r > 1 {
        r /= p;
        f += 1;
    }
    Some((p, f))
}

/// Base-`p` digits of `code`, least significant first, padded to `len`.
pub(crate) fn digits(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

fn poly_string(c: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &v) in c.iter().enumerate().rev() {
        if v == 0 {
            continue;
        }
        let coef = if v == 1 && i > 0 {
            String::new()
        } else {
            v.to_string()
        };
        terms.push(match i {
            0 => coef,
            1 => format!("{coef}x"),
            _ => format!("{coef}x^{i}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

// Dense polynomials over F_p, low to high, without trailing zeros.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p).expect("nonzero leading coefficient");
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    poly_rem(&acc, m, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^{p^k} mod m` by repeated Frobenius.
fn frobenius_x(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut z = poly_rem(&[0, 1], m, p);
    for _ in 0..k {
        z = poly_powmod(&z, p, m, p);
    }
    z
}

/// Rabin's test: `m` (monic, degree f) is irreducible iff `x^{p^f} = x mod m`
/// and `gcd(x^{p^{f/l}} - x, m) = 1` for each prime `l | f`.
fn is_irreducible(p: u64, m: &[u64]) -> bool {
    let f = (m.len() - 1) as u32;
    if f == 1 {
        return true;
    }
    let x = poly_rem(&[0, 1], m, p);
    if frobenius_x(f, m, p) != x {
        return false;
    }
    prime_divisors(f as u64).into_iter().all(|l| {
        let mut h = frobenius_x(f / l as u32, m, p);
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        poly_gcd(&h, m, p).len() == 1
    })
}
