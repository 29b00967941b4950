use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A strategy broke the game rules (wrote a star, an out-of-alphabet symbol, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Bob's output did not contain the last arrival.
    #[error("decoder violation: last arrival {last} not in output {output:?} (sigma = {sigma:?}, b = {b})")]
    DecoderViolation {
        sigma: Vec<usize>,
        b: u8,
        last: usize,
        output: Vec<usize>,
    },

    /// Requested size exceeds the exhaustive limit for the chosen mode.
    #[error("{what}: n = {n} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("protocol is not order-oblivious: {0}")]
    NotOrderOblivious(String),

    #[error("protocol is not assignment-oblivious: {0}")]
    NotAssignmentOblivious(String),

    #[error("protocol is not monotone: {0}")]
    NotMonotone(String),

    #[error("array is not admissible: no completion has zero syndrome")]
    Inadmissible,

    #[error("decode failure: {0}")]
    Decode(String),

    #[error("code unavailable: {0}")]
    CodeUnavailable(String),
}

impl Error {
    /// Whether the error is a size-limit rejection rather than a contract failure.
    pub fn is_size_rejection(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }
}
