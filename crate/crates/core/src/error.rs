use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid autocorrelation model: {0}")]
    InvalidModel(String),

    #[error("spectral density is negative: S({omega:.6}) = {min:.6e} (tolerance {tol:.1e})")]
    PsdViolation { omega: f64, min: f64, tol: f64 },

    #[error("channel pair ({k}, {l}): {source}")]
    Pair {
        k: usize,
        l: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("channel pair ({k}, {l}) is ephemeral (2*phi = {two_phi:.6e} <= R(0)^2 = {r0_sq:.6e}); result requires a nonephemeral channel")]
    Ephemeral {
        k: usize,
        l: usize,
        two_phi: f64,
        r0_sq: f64,
    },

    #[error("grid oracle supports at most 3 transmit antennas, got {0}")]
    OracleDimension(usize),

    #[error("covariance factorization failed after jitter {jitter:.1e}")]
    Factorization { jitter: f64 },

    #[error("unsupported input scheme for mutual information estimation: {0}")]
    UnsupportedScheme(String),
}

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
