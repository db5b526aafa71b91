//! Characters, Gauss sums and Otsubo's hypergeometric function over `F_q`,
//! valued in double-precision complex numbers.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;

use super::field::FqField;
use crate::error::{Error, Result};

/// Complex approximation of a value in `Q(mu_{p(q-1)})`.
pub type ComplexValue = Complex64;

/// Absolute tolerance for every identity check.
pub const TOLERANCE: f64 = 1e-9;

/// The multiplicative character `chi_k(g^j) = exp(2 pi i jk/(q-1))`, indexed by
/// `k mod (q-1)`; `k = 0` is the trivial character `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqChar(pub u64);

impl FqChar {
    pub const TRIVIAL: FqChar = FqChar(0);

    pub fn is_trivial(&self) -> bool {
        self.0 == 0
    }
}

/// `exp(2 pi i num/den)`, with the fraction reduced first.
fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let k = num % den;
    Complex64::from_polar(1.0, TAU * k as f64 / den as f64)
}

/// `psi(x) = exp(2 pi i Tr(x)/p)`.
pub fn additive_character(field: &FqField, x: u64) -> ComplexValue {
    root_of_unity(field.trace(x), field.p())
}

/// Character arithmetic, Gauss sums and finite hypergeometric values for one
/// field and one additive character `x -> psi(c x)`.
#[derive(Debug, Clone)]
pub struct FiniteHg {
    field: Arc<FqField>,
    psi_scale: u64,
    gauss: Vec<Complex64>,
}

impl FiniteHg {
    pub fn new(field: Arc<FqField>) -> Self {
        Self::with_psi_scale(field, 1).expect("1 is nonzero")
    }

    /// Uses the additive character `x -> psi(c x)` for a nonzero `c`.
    pub fn with_psi_scale(field: Arc<FqField>, c: u64) -> Result<Self> {
        if c == 0 || c >= field.q() {
            return Err(Error::InvalidParameter(format!(
                "additive scale {c} is not a unit"
            )));
        }
        let psi: Vec<Complex64> = (0..field.q())
            .map(|x| additive_character(&field, field.mul(c, x)))
            .collect();
        let m = field.q() - 1;
        let gauss = (0..m)
            .map(|k| {
                let s: Complex64 = field
                    .units()
                    .map(|x| root_of_unity(k * field.log(x).unwrap(), m) * psi[x as usize])
                    .sum();
                -s
            })
            .collect();
        Ok(Self {
            field,
            psi_scale: c,
            gauss,
        })
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn psi_scale(&self) -> u64 {
        self.psi_scale
    }

    fn order(&self) -> u64 {
        self.field.q() - 1
    }

    pub fn char_count(&self) -> u64 {
        self.order()
    }

    pub fn all_chars(&self) -> impl Iterator<Item = FqChar> {
        (0..self.order()).map(FqChar)
    }

    pub fn character(&self, k: i64) -> FqChar {
        FqChar(k.rem_euclid(self.order() as i64) as u64)
    }

    pub fn mul_chars(&self, a: FqChar, b: FqChar) -> FqChar {
        FqChar((a.0 + b.0) % self.order())
    }

    /// `conj(phi) = phi^{-1}`.
    pub fn conj(&self, a: FqChar) -> FqChar {
        FqChar((self.order() - a.0) % self.order())
    }

    /// `phi(x)`, with `phi(0) = 0` for every character including `epsilon`.
    pub fn eval_char(&self, phi: FqChar, x: u64) -> ComplexValue {
        match self.field.log(x) {
            None => Complex64::new(0.0, 0.0),
            Some(j) => root_of_unity(phi.0 * j, self.order()),
        }
    }

    /// `g(phi) = -sum_x phi(x) psi(x)`.
    pub fn gauss_sum(&self, phi: FqChar) -> ComplexValue {
        self.gauss[phi.0 as usize]
    }

    /// `g(phi)` for `phi != epsilon`, and `q` for `epsilon`.
    pub fn gauss_sum_circ(&self, phi: FqChar) -> ComplexValue {
        if phi.is_trivial() {
            Complex64::new(self.field.q() as f64, 0.0)
        } else {
            self.gauss_sum(phi)
        }
    }

    /// `(phi)_nu = g(phi nu)/g(phi)`.
    pub fn pochhammer(&self, phi: FqChar, nu: FqChar) -> ComplexValue {
        self.gauss_sum(self.mul_chars(phi, nu)) / self.gauss_sum(phi)
    }

    /// `(phi)°_nu = g°(phi nu)/g°(phi)`.
    pub fn pochhammer_circ(&self, phi: FqChar, nu: FqChar) -> ComplexValue {
        self.gauss_sum_circ(self.mul_chars(phi, nu)) / self.gauss_sum_circ(phi)
    }

    /// `1/(1-q) sum_nu prod (alpha_i)_nu / ((epsilon)°_nu prod (beta_j)°_nu) nu(t)`.
    pub fn finite_hg(&self, alphas: &[FqChar], betas: &[FqChar], t: u64) -> Result<ComplexValue> {
        if alphas.len() != betas.len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "{} upper and {} lower characters; need d + 1 and d",
                alphas.len(),
                betas.len()
            )));
        }
        if t == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for nu in self.all_chars() {
            let mut term: Complex64 = alphas.iter().map(|&a| self.pochhammer(a, nu)).product();
            term /= self.pochhammer_circ(FqChar::TRIVIAL, nu);
            for &b in betas {
                term /= self.pochhammer_circ(b, nu);
            }
            sum += term * self.eval_char(nu, t);
        }
        Ok(sum / (1.0 - self.field.q() as f64))
    }

    /// `g(phi) g°(conj phi)` against `phi(-1) q`.
    pub fn verify_gs_identity(&self, phi: FqChar) -> IdentityCheck {
        let lhs = self.gauss_sum(phi) * self.gauss_sum_circ(self.conj(phi));
        let minus_one = self.field.neg(1);
        let rhs = self.eval_char(phi, minus_one) * self.field.q() as f64;
        IdentityCheck::new(lhs, rhs)
    }

    /// The general `t <-> 1/t` formula for `alpha_0 != epsilon`,
    /// `alpha_i != beta_i` and `t != 0`.
    pub fn verify_transform_general(
        &self,
        alphas: &[FqChar],
        betas: &[FqChar],
        t: u64,
    ) -> Result<IdentityCheck> {
        if alphas.len() != betas.len() + 1 {
            return Err(Error::InvalidParameter(
                "need d + 1 upper and d lower characters".into(),
            ));
        }
        let a0 = alphas[0];
        if a0.is_trivial() {
            return Err(Error::HypothesisViolated("alpha_0 is trivial".into()));
        }
        if let Some(i) = (1..alphas.len()).find(|&i| alphas[i] == betas[i - 1]) {
            return Err(Error::HypothesisViolated(format!("alpha_{i} = beta_{i}")));
        }
        let t_inv = self
            .field
            .inv(t)
            .ok_or_else(|| Error::HypothesisViolated("t = 0".into()))?;

        let lhs = self.finite_hg(alphas, betas, t)?;
        let mut factor = self.eval_char(self.conj(a0), self.field.neg(t));
        let mut upper = vec![a0];
        let mut lower = Vec::with_capacity(betas.len());
        for (&ai, &bi) in alphas[1..].iter().zip(betas) {
            let a0_bibar = self.mul_chars(a0, self.conj(bi));
            let a0_aibar = self.mul_chars(a0, self.conj(ai));
            factor *= self.gauss_sum(a0_bibar) * self.gauss_sum_circ(self.conj(ai))
                / (self.gauss_sum_circ(a0_aibar) * self.gauss_sum(self.conj(bi)));
            upper.push(a0_bibar);
            lower.push(a0_aibar);
        }
        let rhs = factor * self.finite_hg(&upper, &lower, t_inv)?;
        Ok(IdentityCheck::new(lhs, rhs))
    }

    /// `F(alpha,...,alpha; epsilon,...,epsilon; t)` against
    /// `conj(alpha)((-1)^{d+1} t) F(...; 1/t)`.
    pub fn verify_transform_special(
        &self,
        alpha: FqChar,
        d: usize,
        t: u64,
    ) -> Result<IdentityCheck> {
        if alpha.is_trivial() {
            return Err(Error::HypothesisViolated("alpha is trivial".into()));
        }
        let t_inv = self
            .field
            .inv(t)
            .ok_or_else(|| Error::HypothesisViolated("t = 0".into()))?;
        let alphas = vec![alpha; d + 1];
        let betas = vec![FqChar::TRIVIAL; d];
        let lhs = self.finite_hg(&alphas, &betas, t)?;
        let arg = if d % 2 == 0 { self.field.neg(t) } else { t };
        let rhs = self.eval_char(self.conj(alpha), arg) * self.finite_hg(&alphas, &betas, t_inv)?;
        Ok(IdentityCheck::new(lhs, rhs))
    }
}

/// Both sides of a complex identity and whether they agree within [`TOLERANCE`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
}

impl IdentityCheck {
    pub fn new(lhs: ComplexValue, rhs: ComplexValue) -> Self {
        Self { lhs, rhs }
    }

    pub fn error(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    pub fn holds(&self) -> bool {
        self.error() < TOLERANCE
    }
}

/// `re,im` with 12 significant digits each. Components below `1e-12` in
/// absolute value are rounding noise and print as zero.
pub fn render_complex(z: ComplexValue) -> String {
    fn one(x: f64) -> String {
        let x = if x.abs() < 1e-12 { 0.0 } else { x };
        format!("{x:.11e}")
    }
    format!("{},{}", one(z.re), one(z.im))
}
