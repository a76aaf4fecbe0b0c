use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("ground state is degenerate: E0 = {e0}, E1 = {e1}")]
    DegenerateGround { e0: f64, e1: f64 },

    #[error("non-finite amplitude at step {step}, basis index {index}")]
    NonFinite { step: usize, index: usize },

    #[error("nothing to fit: {0}")]
    NothingToFit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("cannot serialize config: {0}")]
    Serialize(#[from] toml::ser::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by bad user input rather than numerics.
    pub fn is_configuration(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Parse(_) | Error::Serialize(_))
    }
}
