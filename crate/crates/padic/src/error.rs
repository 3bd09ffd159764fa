use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("Hensel criterion fails at seed {seed}: v(P) = {value_val}, v(P') = {deriv_val}")]
    HenselConditionFails {
        seed: String,
        value_val: String,
        deriv_val: String,
    },
    #[error("argument outside the convergence domain (valuation {numerator}/{denominator})")]
    OutsideConvergenceDomain { numerator: i64, denominator: u32 },
    #[error("precision loss: needed {needed} digits, certified {achieved} ({budget})")]
    PrecisionLoss {
        needed: i64,
        achieved: i64,
        budget: String,
    },
    #[error("division by an element indistinguishable from zero")]
    DivisionByZero,
    #[error("modulus is not Eisenstein at {p}")]
    NotEisenstein { p: u32 },
    #[error("{0}")]
    Invalid(String),
}
