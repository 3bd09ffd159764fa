use thiserror::Error;
use upcheck_automata::AutomataError;
use upcheck_core::CoreError;
use upcheck_padic::PadicError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("inconclusive (strict mode): {0}")]
    StrictInconclusive(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(CoreError),
    #[error(transparent)]
    Automata(AutomataError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ValidationFailed(m) => CliError::Validation(m),
            e @ (CoreError::NotSubsetOfNumerationLanguage { .. }
            | CoreError::InvalidSystem(_)
            | CoreError::NotIncreasing { .. }
            | CoreError::Parse { .. }) => CliError::Validation(e.to_string()),
            CoreError::Automata(e) => e.into(),
            e => CliError::Core(e),
        }
    }
}

impl From<AutomataError> for CliError {
    fn from(e: AutomataError) -> Self {
        match e {
            e @ (AutomataError::Parse { .. } | AutomataError::Malformed(_)) => CliError::Validation(e.to_string()),
            e => CliError::Automata(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::StrictInconclusive(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
