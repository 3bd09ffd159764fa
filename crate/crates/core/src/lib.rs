//! Linear numeration systems, their recognizable sets, and a decision
//! procedure for ultimate periodicity.

pub mod bounds;
pub mod decider;
pub mod error;
mod graph;
pub mod hypotheses;
pub mod interval;
pub mod langs;
pub mod numsys;
pub mod poly;
pub mod reduce;
pub mod soittola;

pub use error::{CoreError, Result};
pub use hypotheses::{check_hypotheses, HypothesisReport};
pub use langs::{numeration_dfa, LangSource, NumerationLanguage, Provenance};
pub use numsys::{builtin, parse_system, NumerationSystem, Word};
pub use soittola::{soittola_params, SoittolaParams};
