//! Residue-class sublanguages of the numeration language and `γ_Q`.

use upcheck_automata::{reverse_determinize, Dfa, Nfa};

use super::profile::mod_profile;
use super::residue::{ResidueProduct, DEFAULT_PRODUCT_CAP};
use super::NumerationLanguage;
use crate::error::{CoreError, Result};
use crate::numsys::NumerationSystem;

/// Words of the language with value `≡ r (mod q)`.
///
/// Built least-significant-digit first over states (clamped index into
/// the residue profile, partial value mod `q`), then reversed and
/// determinized, intersected with the language and minimized.
pub fn congruence_dfa(
    sys: &NumerationSystem,
    q: u64,
    r: u64,
    lang: &NumerationLanguage,
    cap: usize,
) -> Result<Dfa> {
    check(q, r)?;
    let profile = mod_profile(sys, q)?;
    let width = profile.preperiod + profile.period;
    let m = lang.dfa.alphabet();
    let qs = q as usize;
    let id = |i: usize, v: usize| i * qs + v;
    let mut nfa = Nfa::new(m);
    for _ in 0..width {
        for v in 0..qs {
            nfa.add_state(v as u64 == r);
        }
    }
    for i in 0..width {
        let next = profile.clamp(i + 1);
        let ui = profile.values[i];
        for v in 0..qs {
            for d in 0..m as u64 {
                let nv = ((v as u128 + d as u128 * ui as u128) % q as u128) as usize;
                nfa.add_edge(id(i, v), d as u32, id(next, nv));
            }
        }
    }
    nfa.add_initial(id(0, 0));
    let msdf = reverse_determinize(&nfa, cap)?;
    Ok(msdf.intersect(&lang.dfa)?)
}

/// Same language, read off the forward residue product.
pub fn congruence_dfa_forward(
    sys: &NumerationSystem,
    q: u64,
    r: u64,
    lang: &NumerationLanguage,
) -> Result<Dfa> {
    check(q, r)?;
    let p = ResidueProduct::build(sys, &lang.dfa, q, DEFAULT_PRODUCT_CAP)?;
    Ok(p.dfa(|v| v == r).minimize())
}

fn check(q: u64, r: u64) -> Result<()> {
    if q == 0 || r >= q {
        return Err(CoreError::InvalidSystem(format!("residue {r} modulo {q}")));
    }
    Ok(())
}

/// `γ_Q`: the largest minimal state count over the `Q` class languages.
pub fn gamma(sys: &NumerationSystem, q: u64, lang: &NumerationLanguage) -> Result<usize> {
    check(q, 0)?;
    let p = ResidueProduct::build(sys, &lang.dfa, q, DEFAULT_PRODUCT_CAP)?;
    Ok((0..q)
        .map(|r| p.dfa(|v| v == r).minimize().state_count())
        .max()
        .unwrap_or(1))
}
