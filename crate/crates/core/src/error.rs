use thiserror::Error;

/// Errors shared by every construction and verifier in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid seed word {0:?}: it must contain at least one 1")]
    InvalidSeed(String),

    #[error("invalid cylinder: {0}")]
    InvalidCylinder(String),

    #[error("capacity exceeded for {what}: {required} symbols required, budget is {budget}")]
    Capacity {
        what: String,
        required: u128,
        budget: u128,
    },

    #[error("backward iteration requested but the system has no inverse")]
    UnsupportedDirection,

    #[error(
        "horizon {horizon} reaches 2^{circles}: the truncated annulus returns exactly there, \
         which the full system does not"
    )]
    TruncationArtifact { horizon: u64, circles: u32 },

    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    #[error("insufficient series depth: {detail} (need J >= {needed})")]
    InsufficientDepth { needed: usize, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Capacity-like failures are reported with a distinct exit status by the CLI.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. } | Error::InsufficientDepth { .. })
    }
}
