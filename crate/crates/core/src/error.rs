use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} requires n >= {min}, got {n}")]
    IndexTooSmall { what: &'static str, n: u128, min: u128 },

    #[error("resolution mismatch: {left} vs {right}")]
    ResolutionMismatch { left: u32, right: u32 },

    #[error("{what} = {value} is not representable at resolution {resolution}")]
    ExceedsResolution {
        what: &'static str,
        value: u128,
        resolution: u32,
    },

    #[error("resolution {0} exceeds the supported maximum")]
    ResolutionTooLarge(u32),

    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },

    #[error("exact harmonic numbers are limited to n <= {limit}, got {n}")]
    ExactLimit { n: u128, limit: u128 },

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("sequence `{name}` overflows 128 bits at A = {a}")]
    SequenceOverflow { name: &'static str, a: u32 },

    #[error("{0}")]
    Range(String),

    #[error("Nörlund normaliser Q_n vanishes")]
    ZeroNormaliser,

    #[error("{0} is not available in exact mode")]
    ExactUnsupported(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
