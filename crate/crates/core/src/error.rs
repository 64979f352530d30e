use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("operator is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("Kraus operators are not trace preserving (max deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("family states psi[{i}][{j}] and psi[{i}][{k}] are not orthonormal (inner product magnitude {overlap:.3e})")]
    NotOrthonormal {
        i: usize,
        j: usize,
        k: usize,
        overlap: f64,
    },

    #[error("enumeration needs {required} entries, budget is {budget}")]
    BudgetExceeded { required: u128, budget: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable code for each error family.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DuplicateLabel(_) | Error::UnknownLabel(_) => "layout",
            Error::DimensionMismatch(_) => "dimension",
            Error::InvalidState(_) => "invalid_state",
            Error::NotUnitary(_) | Error::NotTracePreserving(_) => "invalid_operator",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidDistribution(_) | Error::NotOrthonormal { .. } => "invalid_input",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Invariant(_) => "invariant_violation",
            Error::Format(_) | Error::Json(_) | Error::Csv(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
