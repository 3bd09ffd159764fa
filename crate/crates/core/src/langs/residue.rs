//! Forward (MSDF) residue machine joined with the numeration language.
//!
//! After reading `w` the machine holds `S_c(w) = Σ_j w_j U_{j+c} mod Q`
//! for `c < N + k`, where `w_j` is the digit of weight `U_j`. Appending a
//! digit `a` gives `S'_c = S_{c+1} + a U_c`, and `S_{N+k}` comes from the
//! recurrence applied to `S_N, …, S_{N+k-1}`. `S_0` is the value mod `Q`.

use rustc_hash::FxHashMap;
use upcheck_automata::Dfa;

use crate::error::{CoreError, Result};
use crate::langs::profile::{reduce, residues};
use crate::numsys::NumerationSystem;

/// Default bound on explored product states.
pub const DEFAULT_PRODUCT_CAP: usize = 8_000_000;

/// Reachable part of (residue vector, language state), with every dead
/// language state folded into one sink.
#[derive(Clone, Debug)]
pub struct ResidueProduct {
    pub modulus: u64,
    alphabet: usize,
    trans: Vec<u32>,
    residue: Vec<u32>,
    lang_accepting: Vec<bool>,
    lang_state: Vec<u32>,
    sink: u32,
}

impl ResidueProduct {
    pub fn build(sys: &NumerationSystem, lang: &Dfa, q: u64, cap: usize) -> Result<Self> {
        if q == 0 || q > u32::MAX as u64 {
            return Err(CoreError::Cap(format!("modulus {q} out of range")));
        }
        let kk = sys.span();
        let k = sys.order();
        let n0 = sys.offset();
        let m = lang.alphabet();
        let u: Vec<u64> = residues(sys, q, kk);
        let a: Vec<u64> = (0..k).map(|t| reduce(sys.coeff(t), q)).collect();
        let live = lang.useful();
        let qq = q as u128;

        // state 0 is the shared sink
        let mut vectors: Vec<u32> = vec![0; kk];
        let mut lstate: Vec<u32> = vec![u32::MAX];
        let mut index: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
        let mut trans: Vec<u32> = Vec::new();
        let start_vec = vec![0u32; kk];
        let l0 = lang.initial();
        let start = if live[l0] {
            let mut key = start_vec.clone();
            key.push(l0 as u32);
            vectors.extend_from_slice(&start_vec);
            lstate.push(l0 as u32);
            index.insert(key, 1);
            1
        } else {
            0
        };
        let mut next_vec = vec![0u32; kk];
        let mut key: Vec<u32> = Vec::with_capacity(kk + 1);
        let mut i = 0usize;
        while i < lstate.len() {
            if i == 0 {
                trans.extend(std::iter::repeat(0).take(m));
                i += 1;
                continue;
            }
            let l = lstate[i] as usize;
            let base = i * kk;
            let mut s_top: u128 = 0;
            for t in 0..k {
                s_top = (s_top + a[t] as u128 * vectors[base + n0 + t] as u128) % qq;
            }
            for d in 0..m {
                let nl = lang.next(l, d as u32);
                if !live[nl] {
                    trans.push(0);
                    continue;
                }
                for c in 0..kk {
                    let upper = if c + 1 < kk {
                        vectors[base + c + 1] as u128
                    } else {
                        s_top
                    };
                    next_vec[c] = ((upper + d as u128 * u[c] as u128) % qq) as u32;
                }
                key.clear();
                key.extend_from_slice(&next_vec);
                key.push(nl as u32);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = lstate.len() as u32;
                        if lstate.len() >= cap {
                            return Err(CoreError::Cap(format!(
                                "residue product modulo {q} exceeds {cap} states"
                            )));
                        }
                        index.insert(key.clone(), id);
                        vectors.extend_from_slice(&next_vec);
                        lstate.push(nl as u32);
                        id
                    }
                };
                trans.push(id);
            }
            i += 1;
        }
        let n = lstate.len();
        let residue = (0..n).map(|s| vectors[s * kk]).collect();
        let lang_accepting = (0..n)
            .map(|s| s != 0 && lang.is_accepting(lstate[s] as usize))
            .collect();
        let mut out = ResidueProduct {
            modulus: q,
            alphabet: m,
            trans,
            residue,
            lang_accepting,
            lang_state: lstate,
            sink: 0,
        };
        if start == 0 {
            out.sink = 0;
        }
        out.reorder_initial(start);
        Ok(out)
    }

    /// Makes `start` the initial state (index 0 after the swap).
    fn reorder_initial(&mut self, start: u32) {
        if start == 0 {
            return;
        }
        let n = self.residue.len();
        let m = self.alphabet;
        let swap = |s: u32| -> u32 {
            if s == start {
                0
            } else if s == 0 {
                start
            } else {
                s
            }
        };
        for t in self.trans.iter_mut() {
            *t = swap(*t);
        }
        for d in 0..m {
            self.trans.swap(d, start as usize * m + d);
        }
        self.residue.swap(0, start as usize);
        self.lang_accepting.swap(0, start as usize);
        self.lang_state.swap(0, start as usize);
        self.sink = start;
        debug_assert!(n > start as usize);
    }

    pub fn state_count(&self) -> usize {
        self.residue.len()
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn next(&self, s: usize, d: u32) -> usize {
        self.trans[s * self.alphabet + d as usize] as usize
    }

    /// Value modulo `Q` of the words reaching `s`.
    pub fn residue(&self, s: usize) -> u64 {
        self.residue[s] as u64
    }

    pub fn lang_accepts(&self, s: usize) -> bool {
        self.lang_accepting[s]
    }

    /// State of the driving machine, `None` on the sink.
    pub fn lang_state(&self, s: usize) -> Option<usize> {
        let l = self.lang_state[s];
        (l != u32::MAX).then_some(l as usize)
    }

    pub fn is_sink(&self, s: usize) -> bool {
        s == self.sink as usize && !self.lang_accepting[s]
    }

    /// Unminimized machine accepting the language words whose state
    /// satisfies `accept(residue)`.
    pub fn dfa(&self, accept: impl Fn(u64) -> bool) -> Dfa {
        let n = self.state_count();
        let accepting = (0..n)
            .map(|s| self.lang_accepting[s] && accept(self.residue[s] as u64))
            .collect();
        let trans = self.trans.iter().map(|&t| t as usize).collect();
        Dfa::from_parts(self.alphabet, 0, accepting, trans).expect("well-formed product")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numsys::builtin;

    #[test]
    fn residues_track_values() {
        let sys = builtin("toy").unwrap();
        let lang = Dfa::universal(13);
        let p = ResidueProduct::build(&sys, &lang, 7, 1 << 20).unwrap();
        for n in 0..500u64 {
            let w = sys.rep(n);
            let s = w.iter().fold(0, |s, &d| p.next(s, d));
            assert_eq!(p.residue(s), n % 7);
        }
    }
}
