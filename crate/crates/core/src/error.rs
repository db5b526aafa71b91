use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("{p}^{n} does not fit in 63 bits")]
    PrecisionOverflow { p: u64, n: u32 },
    #[error("operands live in different rings (Z/{left_p}^{left_n} vs Z/{right_p}^{right_n})")]
    PrecisionMismatch {
        left_p: u64,
        left_n: u32,
        right_p: u64,
        right_n: u32,
    },
    #[error("denominator of {0} is divisible by {1}")]
    DenominatorNotUnit(String, u64),
    #[error("{0} is not a unit")]
    NonUnit(String),
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
    #[error("modulus is not monic of degree >= 1 over F_{0}")]
    InvalidModulus(u64),
    #[error("modulus {0} is reducible over F_{1}")]
    ReducibleModulus(String, u64),
    #[error("Teichmuller lift of zero")]
    ZeroInput,
    #[error("point {0} is outside the domain: h(t) vanishes mod p")]
    NotInDomain(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("no admissible point in F_{0}^*")]
    EmptyAdmissibleLocus(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
