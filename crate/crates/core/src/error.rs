use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("overflow in {0}")]
    Overflow(&'static str),

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate}, error {abs_error})")]
    QuadratureNonConvergence {
        estimate: f64,
        abs_error: f64,
        subdivisions: usize,
    },

    #[error("truncated gamma has normalizing mass below 1e-300 on ({lo}, {hi})")]
    DegenerateTruncation { lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("E(1/W^{r}) does not exist for {law} with theta = {theta}")]
    MomentDoesNotExist {
        law: &'static str,
        r: f64,
        theta: f64,
    },

    #[error("degenerate support: the location optimum is an extreme order statistic")]
    DegenerateSupport,

    #[error("posterior normalizer vanished at observation {index}")]
    PosteriorUnderflow { index: usize },

    #[error("no finite objective value found for theta in [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("operation requires the {expected} mixing law")]
    WrongVariant { expected: &'static str },

    #[error("nesting violation: alternative loglik {alt} below null loglik {null}")]
    NestingViolation { null: f64, alt: f64 },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("unknown model tag `{0}`")]
    UnknownModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain {
        func,
        msg: msg.into(),
    }
}
