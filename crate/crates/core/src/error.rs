use thiserror::Error;

/// Errors raised by state construction, distribution evaluation and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("superposition is degenerate (norm {norm:e} below 1e-14)")]
    Degenerate { norm: f64 },

    #[error("scaling fit is degenerate: {0}")]
    DegenerateFit(String),

    #[error("phase grid too coarse: {n_grid} points, need at least {required}")]
    GridTooCoarse { n_grid: usize, required: usize },

    #[error("numerical consistency failure: {0}")]
    Consistency(String),

    #[error("distribution has no peak")]
    NoPeak,

    #[error("half-maximum region is ambiguous: {0}")]
    Ambiguous(String),

    #[error("peak is narrower than the grid spacing; refine the grid")]
    Resolution,

    #[error("circular mean undefined (resultant length {0:e})")]
    UndefinedMean(f64),

    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
