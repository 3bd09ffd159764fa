//! Numeration-language automata, congruence machines, `γ_Q`, and residue
//! profiles of the sequence.

mod bertrand;
mod congruence;
mod learn;
pub mod profile;
pub mod residue;

pub use bertrand::{chain_dfa, expansion_of_one, Expansion};
pub use congruence::{congruence_dfa, congruence_dfa_forward, gamma};
pub use learn::learn_dfa;
pub use profile::{mod_profile, mod_profile_capped, residues, ModProfile};
pub use residue::ResidueProduct;

use upcheck_automata::Dfa;

use crate::error::{CoreError, Result};
use crate::numsys::NumerationSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    User,
    Bertrand,
    /// Residual merging: the result is validated but not proven.
    Learned,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::User => "user",
            Provenance::Bertrand => "bertrand",
            Provenance::Learned => "learned",
        }
    }
}

#[derive(Clone, Debug)]
pub enum LangSource {
    User(Dfa),
    Bertrand { cutoff: usize },
    Learn { max_depth: usize },
    /// Bertrand, then learning if that fails.
    Auto,
}

/// Limits for checking a candidate language against greedy enumeration.
#[derive(Clone, Copy, Debug)]
pub struct ValidationConfig {
    /// Every `n ≤ value_horizon` must be accepted (padded or not).
    pub value_horizon: u64,
    /// Accepted-word counts are compared with `U_ℓ` for `ℓ ≤ count_len`.
    pub count_len: usize,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            value_horizon: 5000,
            count_len: 40,
        }
    }
}

/// Minimal complete DFA for `0^* rep_U(ℕ)`.
#[derive(Clone, Debug)]
pub struct NumerationLanguage {
    pub dfa: Dfa,
    pub provenance: Provenance,
}

impl NumerationLanguage {
    /// State count of the minimal complete machine.
    pub fn c(&self) -> usize {
        self.dfa.state_count()
    }

    pub fn is_heuristic(&self) -> bool {
        self.provenance == Provenance::Learned
    }
}

pub const DEFAULT_BERTRAND_CUTOFF: usize = 64;
pub const DEFAULT_LEARN_DEPTH: usize = 8;

pub fn numeration_dfa(sys: &NumerationSystem, source: LangSource) -> Result<NumerationLanguage> {
    numeration_dfa_with(sys, source, &ValidationConfig::default())
}

pub fn numeration_dfa_with(
    sys: &NumerationSystem,
    source: LangSource,
    cfg: &ValidationConfig,
) -> Result<NumerationLanguage> {
    let (dfa, provenance) = match source {
        LangSource::User(d) => {
            let c = sys.alphabet_bound() as usize;
            let d = if d.alphabet() < c { d.widen(c) } else { d };
            (d.pad_closure(0), Provenance::User)
        }
        LangSource::Bertrand { cutoff } => {
            let e = expansion_of_one(sys, cutoff)?;
            (chain_dfa(&e, sys.alphabet_bound() as usize), Provenance::Bertrand)
        }
        LangSource::Learn { max_depth } => return learn_dfa(sys, max_depth, cfg),
        LangSource::Auto => {
            let bert = numeration_dfa_with(
                sys,
                LangSource::Bertrand {
                    cutoff: DEFAULT_BERTRAND_CUTOFF,
                },
                cfg,
            );
            return match bert {
                Ok(l) => Ok(l),
                Err(_) => learn_dfa(sys, DEFAULT_LEARN_DEPTH, cfg),
            };
        }
    };
    validate_language(sys, &dfa, cfg)?;
    Ok(NumerationLanguage {
        dfa: dfa.minimize(),
        provenance,
    })
}

/// Checks `dfa` against greedy enumeration: all small values are
/// accepted with and without padding, each length `ℓ` has exactly `U_ℓ`
/// accepted words, and for lengths whose words are all small, every
/// padded word is accepted (so the two sets coincide at that length).
pub fn validate_language(sys: &NumerationSystem, dfa: &Dfa, cfg: &ValidationConfig) -> Result<()> {
    let fail = |msg: String| Err(CoreError::ValidationFailed(msg));
    let c = sys.alphabet_bound() as usize;
    if dfa.alphabet() < c {
        return fail(format!("alphabet {} is smaller than C_U = {c}", dfa.alphabet()));
    }
    for n in 0..=cfg.value_horizon {
        let w = sys.rep(n);
        if !dfa.accepts(&w) {
            return fail(format!("rejects rep({n}) = {w:?}"));
        }
        let mut padded = vec![0];
        padded.extend(&w);
        if !dfa.accepts(&padded) {
            return fail(format!("rejects padded rep({n}) = {padded:?}"));
        }
    }
    let terms = sys.small_terms();
    let counts = dfa.count_by_length(cfg.count_len);
    for (ell, &count) in counts.iter().enumerate() {
        let Some(&expected) = terms.get(ell) else { break };
        if expected == u128::MAX || count == u128::MAX {
            break;
        }
        if count != expected {
            // find an offending word among the small lengths when possible
            return fail(format!("length {ell}: {count} accepted words, expected U_{ell} = {expected}"));
        }
        if expected <= cfg.value_horizon as u128 + 1 {
            for n in 0..expected as u64 {
                let w = sys.rep_padded(n, ell);
                if !dfa.accepts(&w) {
                    return fail(format!("rejects {w:?} (value {n})"));
                }
            }
        }
    }
    Ok(())
}
