use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into input problems (bad files, bad arguments) and
/// numerical failures; [`Error::is_numerical`] tells them apart so the
/// command-line front end can pick an exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("format error: {0}")]
    Format(String),

    #[error("record error at row {row}: {message}")]
    Record { row: usize, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("sampler initialization failed: {0}")]
    Initialization(String),

    #[error("fit did not converge: {0}")]
    Fit(String),

    #[error("grid construction failed: {0}")]
    Grid(String),

    #[error("numerical failure in {op}: {context}")]
    Numerical { op: &'static str, context: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Infeasible(_)
                | Error::Initialization(_)
                | Error::Fit(_)
                | Error::Grid(_)
                | Error::Numerical { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
