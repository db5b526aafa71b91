//! Exact arithmetic in `Z/p^n`, p-integral rationals, and the unramified
//! extensions `W(F_q)/p^n` hosting Teichmuller points.

mod fq;
mod rational;
mod residue;
mod witt;

pub use fq::{prime_power, FqSpec};
pub use rational::{embed_rational, PRational};
pub use residue::{ResidueInt, ResidueRing};
pub use witt::{teichmuller_lift, witt_unit_inverse, WittElement, WittRing};

pub(crate) use fq::digits;
