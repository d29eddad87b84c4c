use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("column `{0}` not found in the header")]
    MissingColumn(String),

    #[error("row {row}: `{value}` is not a number")]
    BadNumber { row: usize, value: String },

    #[error("row {0}: prices must be positive")]
    NonPositivePrice(usize),

    #[error("need at least two prices to form a return")]
    FewerThanTwoPrices,

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] alsm::Error),
}

impl CliError {
    /// 2 for bad input, 3 when the model itself could not be fitted.
    pub fn exit_code(&self) -> u8 {
        use alsm::Error as E;
        match self {
            CliError::Model(
                E::DegenerateSupport
                | E::BracketFailure { .. }
                | E::PosteriorUnderflow { .. }
                | E::QuadratureNonConvergence { .. }
                | E::NestingViolation { .. }
                | E::DegenerateTruncation { .. }
                | E::Overflow(_),
            ) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
