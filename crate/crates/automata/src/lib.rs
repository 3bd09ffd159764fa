//! Deterministic and nondeterministic finite automata over the digit
//! alphabets `{0, .., m-1}`, plus subsequential (letter-to-word)
//! transducers.
//!
//! Every [`Dfa`] is complete: each state has one successor per digit, so a
//! rejecting sink is an ordinary state. Minimization renumbers states in
//! breadth-first order from the initial state, exploring digits in
//! increasing order, which makes minimal machines canonical.

mod dfa;
mod error;
mod nfa;
mod partition;
mod text;
mod transducer;

pub use dfa::{Dfa, Finiteness, ProductMode};
pub use error::AutomataError;
pub use nfa::{reverse_determinize, Nfa};
pub use transducer::Transducer;

/// A single digit. Words are slices of digits; whether they are read most
/// or least significant digit first is up to the caller.
pub type Digit = u32;

/// Default bound on the number of subsets explored by determinization.
pub const DEFAULT_STATE_CAP: usize = 1 << 20;
