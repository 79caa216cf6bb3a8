use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("contour error: {0}")]
    Contour(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("certificate violated: {0}")]
    Certificate(String),
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by invalid input rather than numerical trouble.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Contour(_)
                | Error::Config(_)
                | Error::Certificate(_)
                | Error::Usage(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
