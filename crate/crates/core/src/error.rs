use thiserror::Error;
use upcheck_automata::AutomataError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("invalid numeration system: {0}")]
    InvalidSystem(String),
    #[error("sequence is not increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("gap sequence is not non-decreasing from any index up to the horizon {horizon}")]
    H3ViolatedBeyondCandidate { horizon: usize },
    #[error("no real root above 1 matches the growth of the sequence")]
    NoDominantRoot,
    #[error("language check failed: {0}")]
    ValidationFailed(String),
    #[error("expansion of 1 is not eventually periodic within {cutoff} digits")]
    BertrandCutoffExceeded { cutoff: usize },
    #[error("residues of the sequence modulo {modulus} are not eventually zero")]
    NotZeroPeriod { modulus: u64 },
    #[error("inequality test fails: {0}")]
    TestInequalityFails(String),
    #[error("accepted language is not contained in the numeration language (witness {word:?})")]
    NotSubsetOfNumerationLanguage { word: Vec<u32> },
    #[error("limit exceeded: {0}")]
    Cap(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

pub type Result<T> = std::result::Result<T, CoreError>;
