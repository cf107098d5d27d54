use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u32, reason: String },
    #[error("unsupported type: {0}")]
    UnsupportedType(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("datum check failed: {0}")]
    DatumCheckFailed(String),
    #[error("tau construction failed: {0}")]
    TauConstructionFailed(String),
    #[error("no integral rho")]
    NoIntegralRho,
    #[error("weight {0} lies outside the window")]
    WindowTooSmall(String),
    #[error("algebra is not local")]
    NotLocal,
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("not idempotent")]
    NotIdempotent,
    #[error("head is not simple")]
    NotUniqueMax,
    #[error("fitting split failed after {0} attempts")]
    SplitFailedRetry(usize),
    #[error("isomorphism search inconclusive")]
    Inconclusive,
    #[error("wrong subalgebra: {0}")]
    WrongSubalgebra(String),
    #[error("unsupported induction pair {0} -> {1}")]
    UnsupportedPair(String, String),
    #[error("weights are not in the same orbit")]
    NotInOrbit,
    #[error("pi(h_alpha) does not vanish on the required roots")]
    LeviVanishingViolated,
    #[error("no known Z-filtration: {0}")]
    NoKnownZFiltration(String),
    #[error("not projective: {0}")]
    NotProjective(String),
    #[error("requires a field as base algebra")]
    NeedsField,
}

pub type Result<T> = std::result::Result<T, Error>;
