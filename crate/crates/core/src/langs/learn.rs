//! Residual learning of `0^* rep_U(ℕ)` from the greedy membership test.
//!
//! Two prefixes are merged when they agree on every suffix of length at
//! most `D`. Depths are tried in increasing order until the merged machine
//! passes validation.

use std::collections::HashMap;

use upcheck_automata::Dfa;

use super::{validate_language, NumerationLanguage, Provenance, ValidationConfig};
use crate::error::{CoreError, Result};
use crate::numsys::NumerationSystem;

/// Limit on `states × suffixes` membership queries per depth.
const WORK_CAP: usize = 40_000_000;
const STATE_CAP: usize = 4096;

fn suffixes(alphabet: usize, depth: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(layer.len() * alphabet);
        for w in &layer {
            for d in 0..alphabet as u32 {
                let mut v: Vec<u32> = w.clone();
                v.push(d);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn learn_at_depth(sys: &NumerationSystem, alphabet: usize, depth: usize) -> Option<Dfa> {
    let tests = suffixes(alphabet, depth);
    let signature = |p: &[u32]| -> Vec<bool> {
        let mut w = p.to_vec();
        tests
            .iter()
            .map(|s| {
                w.truncate(p.len());
                w.extend_from_slice(s);
                sys.is_padded_greedy(&w)
            })
            .collect()
    };
    // state 0 is the sink (empty signature)
    let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
    index.insert(vec![false; tests.len()], 0);
    let mut reps: Vec<Option<Vec<u32>>> = vec![None];
    let mut accepting = vec![false];
    let root_sig = signature(&[]);
    let root = *index.entry(root_sig).or_insert_with(|| {
        reps.push(Some(Vec::new()));
        accepting.push(true);
        1
    });
    let mut trans: Vec<usize> = vec![0; alphabet];
    let mut i = 1;
    while i < reps.len() {
        if reps.len() * tests.len() > WORK_CAP || reps.len() > STATE_CAP {
            return None;
        }
        let p = reps[i].clone().expect("non-sink representative");
        for d in 0..alphabet as u32 {
            let mut q = p.clone();
            q.push(d);
            let sig = signature(&q);
            let next = match index.get(&sig) {
                Some(&s) => s,
                None => {
                    let s = reps.len();
                    accepting.push(sig[0]);
                    index.insert(sig, s);
                    reps.push(Some(q));
                    s
                }
            };
            trans.push(next);
        }
        i += 1;
    }
    if root == 0 {
        return Some(Dfa::empty(alphabet));
    }
    let n = reps.len();
    let dfa = Dfa::from_parts(alphabet, root, accepting, trans).ok()?;
    debug_assert_eq!(dfa.state_count(), n);
    Some(dfa.minimize())
}

pub fn learn_dfa(sys: &NumerationSystem, max_depth: usize, cfg: &ValidationConfig) -> Result<NumerationLanguage> {
    let alphabet = sys.alphabet_bound() as usize;
    let mut last = String::from("no depth tried");
    for depth in 1..=max_depth {
        let Some(dfa) = learn_at_depth(sys, alphabet, depth) else {
            last = format!("work cap reached at depth {depth}");
            break;
        };
        match validate_language(sys, &dfa, cfg) {
            Ok(()) => {
                return Ok(NumerationLanguage {
                    dfa,
                    provenance: Provenance::Learned,
                })
            }
            Err(CoreError::ValidationFailed(msg)) => last = format!("depth {depth}: {msg}"),
            Err(e) => return Err(e),
        }
    }
    Err(CoreError::ValidationFailed(format!("learning failed ({last})")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numsys::builtin;

    #[test]
    fn merge_language_is_learned() {
        let lang = learn_dfa(&builtin("merge").unwrap(), 6, &ValidationConfig::default()).unwrap();
        // (ε+0+1)((0+1+2)(0+1))^* closed under leading zeros
        assert!(lang.dfa.accepts(&[1, 2, 1]));
        assert!(lang.dfa.accepts(&[0, 0, 2, 1]));
        assert!(!lang.dfa.accepts(&[2, 0, 0]));
        assert!(!lang.dfa.accepts(&[1, 2]));
    }
}
