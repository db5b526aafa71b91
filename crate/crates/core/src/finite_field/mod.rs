//! Multiplicative characters, Gauss sums and Otsubo's hypergeometric function
//! over `F_q`, with checks of the Gauss-sum reflection and the `t <-> 1/t`
//! transformation formula.

mod field;
mod hg;
mod sweep;

pub use field::FqField;
pub use hg::{
    additive_character, render_complex, ComplexValue, FiniteHg, FqChar, IdentityCheck, TOLERANCE,
};

pub use sweep::{run_finite_case, run_finite_cases, FiniteCase, FiniteMode};
