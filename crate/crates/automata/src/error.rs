use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("more than {cap} accepted words")]
    CapExceeded { cap: usize },
    #[error("subset construction exceeded {cap} states")]
    StateBlowup { cap: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed machine: {0}")]
    Malformed(String),
}
