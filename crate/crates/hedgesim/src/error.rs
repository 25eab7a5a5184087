//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    /// An input value violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A scenario configuration is malformed or inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// A portfolio state handed to the ledger does not satisfy its own
    /// accounting identity.
    #[error("ledger invariant violated: {0}")]
    LedgerInvariant(String),

    /// The storage dispatch problem has no feasible exercise plan.
    /// `period` is the earliest delivery period at which the terminal
    /// volume becomes unreachable.
    #[error("infeasible storage dispatch at period {period}: {reason}")]
    Infeasible { period: usize, reason: String },

    /// A diagnostic was requested from a run that did not record the
    /// required per-path data.
    #[error("diagnostics unavailable: {0}")]
    Unavailable(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config parse error: {0}")]
    TomlParse(#[from] toml::de::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, EngineError>;

impl EngineError {
    /// Stable machine-readable error category used in the CLI's JSON
    /// error output.
    pub fn kind(&self) -> &'static str {
        match self {
            EngineError::InvalidInput(_) => "invalid_input",
            EngineError::Config(_) => "config",
            EngineError::LedgerInvariant(_) => "ledger_invariant",
            EngineError::Infeasible { .. } => "infeasible",
            EngineError::Unavailable(_) => "unavailable",
            EngineError::Io(_) => "io",
            EngineError::Json(_) => "json",
            EngineError::TomlParse(_) => "config_parse",
            EngineError::Csv(_) => "csv",
        }
    }
}
