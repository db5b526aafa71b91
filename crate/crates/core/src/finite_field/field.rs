use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::{digits, FqSpec, WittElement, WittRing};

/// `F_q` with exponential and discrete-log tables against a fixed generator.
/// Elements are coded by their coefficient digits in base `p`, constant term
/// first, so the prime field's elements code as themselves.
#[derive(Debug, Clone)]
pub struct FqField {
    spec: FqSpec,
    ring: Arc<WittRing>,
    q: u64,
    generator: u64,
    exp: Vec<u64>,
    log: Vec<u64>,
}

impl FqField {
    /// Uses the least element (by code) of multiplicative order `q - 1`.
    pub fn new(spec: FqSpec) -> Result<Self> {
        let ring = WittRing::new(spec.clone(), 1)?;
        let q = spec.order();
        for g in 1..q {
            if let Some(field) = Self::try_generator(&spec, &ring, g) {
                return Ok(field);
            }
        }
        unreachable!("F_q^* is cyclic")
    }

    /// Uses the given element, which must generate `F_q^*`.
    pub fn with_generator(spec: FqSpec, generator: u64) -> Result<Self> {
        let ring = WittRing::new(spec.clone(), 1)?;
        if generator == 0 || generator >= spec.order() {
            return Err(Error::InvalidParameter(format!(
                "{generator} is not an element of F_{}",
                spec.order()
            )));
        }
        Self::try_generator(&spec, &ring, generator).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "{generator} does not generate F_{}^*",
                spec.order()
            ))
        })
    }

    fn try_generator(spec: &FqSpec, ring: &Arc<WittRing>, g: u64) -> Option<Self> {
        let q = spec.order();
        let ge = ring.from_fq_code(g);
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u64::MAX; q as usize];
        let mut cur = ring.one();
        for i in 0..q - 1 {
            let code = cur.residue_code();
            if i > 0 && code == 1 {
                return None;
            }
            exp.push(code);
            log[code as usize] = i;
            cur = &cur * &ge;
        }
        Some(Self {
            spec: spec.clone(),
            ring: ring.clone(),
            q,
            generator: g,
            exp,
            log,
        })
    }

    pub fn spec(&self) -> &FqSpec {
        &self.spec
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.spec.p()
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, x: u64) -> Option<u64> {
        match self.log.get(x as usize) {
            Some(&l) if l != u64::MAX => Some(l),
            _ => None,
        }
    }

    /// `g^i`.
    pub fn exp(&self, i: u64) -> u64 {
        self.exp[(i % (self.q - 1)) as usize]
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<u64> {
        if coeffs.len() > self.spec.degree() as usize {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients for F_{}",
                coeffs.len(),
                self.q
            )));
        }
        let p = self.p();
        Ok(coeffs.iter().rev().fold(0, |acc, &c| acc * p + c % p))
    }

    pub fn coeffs(&self, x: u64) -> Vec<u64> {
        digits(x, self.p(), self.spec.degree() as usize)
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        let p = self.p();
        let (a, b) = (self.coeffs(x), self.coeffs(y));
        let sum: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + v) % p).collect();
        self.element(&sum).unwrap()
    }

    pub fn neg(&self, x: u64) -> u64 {
        let p = self.p();
        let c: Vec<u64> = self.coeffs(x).iter().map(|&u| (p - u) % p).collect();
        self.element(&c).unwrap()
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        match (self.log(x), self.log(y)) {
            (Some(a), Some(b)) => self.exp(a + b),
            _ => 0,
        }
    }

    pub fn inv(&self, x: u64) -> Option<u64> {
        self.log(x).map(|a| self.exp(self.q - 1 - a))
    }

    /// Absolute trace `F_q -> F_p`, returned in `[0, p)`.
    pub fn trace(&self, x: u64) -> u64 {
        let mut z: WittElement = self.ring.from_fq_code(x);
        let mut acc = self.ring.zero();
        for _ in 0..self.spec.degree() {
            acc = &acc + &z;
            z = z.pow(self.p());
        }
        let c = acc.residue();
        debug_assert!(c[1..].iter().all(|&v| v == 0));
        c[0]
    }

    /// All nonzero elements in code order.
    pub fn units(&self) -> impl Iterator<Item = u64> {
        1..self.q
    }
}
