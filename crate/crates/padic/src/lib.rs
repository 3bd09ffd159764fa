//! Fixed-precision `p`-adic arithmetic for valuations of linear
//! recurrences: residues, Hensel lifting, Eisenstein extensions with
//! logarithm and exponential, and the analysis of `U_{i+3} = 12U_{i+2} +
//! 6U_{i+1} + 12U_i` built on them.

mod error;
mod ext;
mod hensel;
mod int;
mod num;
mod recurrence;
mod theorems;
mod zeta;

pub use error::PadicError;
pub use ext::{ExtElem, ExtField};
pub use hensel::hensel_root;
pub use int::{valuation_of, PadicInt, Valuation};
pub use num::PadicNum;
pub use recurrence::{valuation_peaks, Recurrence};
pub use theorems::{
    direct_valuations, nu3_closed_form, ppp_recurrence, t_sequence_mod9, toy_recurrence,
    toy_variant_recurrence, verify_t_period, T_PERIOD,
};
pub use zeta::{
    block_lengths, check_block_conjecture, log_upper_bound_check, longest_zero_block,
    nu2_closed_form, two_adic, zeta_toy, zeta_toy_labeled, BlockReport, Labeling, LogBoundReport,
    ZetaBudget, ZetaValue,
};
