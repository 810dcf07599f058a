use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inadmissible exponent pair (p = {p}, r = {r}): need p < ∞, or p = r = ∞")]
    InadmissibleExponents { p: f64, r: f64 },

    #[error("invalid measure space: {0}")]
    InvalidMeasure(String),

    #[error("invalid step function: {0}")]
    InvalidFunction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("norm {norm} cannot act on a {domain} domain")]
    DomainMismatch { norm: String, domain: &'static str },

    #[error("brute-force search limited to {limit} free variables, got {atoms}")]
    TooManyAtoms { atoms: usize, limit: usize },

    #[error("descent stalled at {descent} above the brute-force value {brute}")]
    NonConvergence { descent: f64, brute: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("malformed document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
