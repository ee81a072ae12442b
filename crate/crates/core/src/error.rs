use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("undefined gcd: all arguments are zero")]
    UndefinedGcd,

    #[error("invalid index n = {0}: must be at least 1")]
    InvalidIndex(u32),

    #[error("factorization timeout for {0}")]
    FactorTimeout(BigUint),

    #[error("divisor explosion: {count} divisors exceeds the cap of {cap}")]
    DivisorExplosion { count: u128, cap: usize },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("substitution failed for n = {n}: terms {terms} do not sum to P_n")]
    SubstitutionFailed { n: u32, terms: String },

    #[error("divisibility assertion failed for n = {n}: {detail}")]
    Divisibility { n: u32, detail: String },

    #[error("sanity check failed at n = {n}: {fact}")]
    Sanity { n: u32, fact: String },

    #[error("invalid scale k = {k} for n = {n}: {reason}")]
    InvalidScale { n: u32, k: u32, reason: String },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),

    #[error("embedded data is corrupt: {0}")]
    DataCorruption(String),

    #[error("search interrupted after {completed} of {total} chunks; resume from the checkpoint")]
    Interrupted { completed: usize, total: usize },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
