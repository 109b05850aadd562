use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Operand dimensions do not fit the requested operation.
    #[error("shape error in {op}: {detail}")]
    Shape { op: &'static str, detail: String },

    /// A stated precondition on the operands (PSD, Hermitian, normal, ...) does not hold.
    #[error("hypothesis `{name}` failed: {detail}")]
    Hypothesis { name: String, detail: String },

    #[error("{routine} did not converge after {sweeps} sweeps")]
    Convergence { routine: &'static str, sweeps: usize },

    /// The requested function value is undefined (e.g. a negative power of a singular matrix).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("expected {expected} input matrices, got {got}")]
    Arity { expected: String, got: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unknown identifier `{0}`")]
    Lookup(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Shape {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn hypothesis(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Hypothesis {
            name: name.into(),
            detail: detail.into(),
        }
    }

    /// Stable snake_case label used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Shape { .. } => "shape",
            Error::Hypothesis { .. } => "hypothesis",
            Error::Convergence { .. } => "convergence",
            Error::Domain(_) => "domain",
            Error::Parameter(_) => "parameter",
            Error::Arity { .. } => "arity",
            Error::Contract(_) => "contract",
            Error::Lookup(_) => "lookup",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}
