//! Dwork's p-adic hypergeometric function, evaluated exactly at unit points
//! through truncated series, together with a harness that checks its
//! transformation formula between `t` and `1/t`, and the finite-field
//! analogue built from Gauss sums.

pub mod error;
pub mod finite_field;
pub mod padic;
pub mod primes;

pub use error::{Error, Result};
pub mod hypergeom;
pub mod record;
pub mod report;
pub mod transform;
