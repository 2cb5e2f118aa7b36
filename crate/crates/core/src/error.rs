use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sieve limit {limit} needs {needed} bytes, over the {budget}-byte memory budget")]
    SieveBudget { limit: u64, needed: u64, budget: u64 },

    #[error("sieve limit {0} out of range (need 2 <= limit < 2^32)")]
    SieveLimit(u64),

    #[error("weight must be an even integer >= 2, got {0}")]
    InvalidWeight(u64),

    #[error("local factors are only defined on p^e with e >= 1")]
    ZeroExponent,

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// The five-term combination was not a non-negative multiple of 12.
    /// This can only come from a wrong local-factor table.
    #[error("dimension formula inconsistency at N={n}: {detail}")]
    Transcription { n: u64, detail: String },

    #[error("dimension {requested} lies beyond the certified range (<= {certified})")]
    Uncertified { requested: u64, certified: u64 },

    #[error("certificate rejected: {0}")]
    InvalidCertificate(String),

    #[error("lower envelope does not exceed target {target} anywhere below {search_max}")]
    EnvelopeFailure { target: u64, search_max: u64 },

    #[error("{0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cache file: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
