use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input fell outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),
    /// A quantity that must be divisible by 8 (a signature or a μ̄ value) was not.
    #[error("parity error: {0}")]
    Parity(String),
    /// The mod-2 linking form is degenerate, so no unique Wu class exists.
    #[error("singular form: {0}")]
    Singular(String),
    /// A calculus move was requested where its preconditions do not hold.
    #[error("move error: {0}")]
    Move(String),
    /// A scan tuple does not yield three exceptional fibers.
    #[error("extraction hypothesis: {0}")]
    Hypothesis(String),
    /// A graph or trace document could not be read.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
