use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The objective returned a non-finite value where one was required.
    #[error("objective returned {value} at position {position:?}")]
    Evaluation { value: f64, position: Vec<f64> },

    #[error("training diverged at epoch {epoch} (loss = {loss})")]
    Training { epoch: usize, loss: f64 },

    #[error("{metric}: division by zero model value at index {index}")]
    DivisionGuard { metric: &'static str, index: usize },

    #[error("r2 undefined: actual series is constant")]
    R2Undefined,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("series has gaps; missing dates: {}", format_dates(.missing))]
    Gap { missing: Vec<NaiveDate> },

    #[error("incompatible model and data: {0}")]
    Compatibility(String),

    #[error("model record: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

fn format_dates(dates: &[NaiveDate]) -> String {
    dates
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
