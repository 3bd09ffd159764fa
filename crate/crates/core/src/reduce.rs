//! Systems with `U_{i+u} = b·U_i` for `i ≥ N` recognize the same sets as
//! base `b`: cut a representation into `u`-blocks, read each block as one
//! oversized base-`b` digit, then propagate carries.
//!
//! Transducers work least significant digit first; the boundaries reverse.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use upcheck_automata::{Dfa, Nfa, Transducer, DEFAULT_STATE_CAP};

use crate::error::{CoreError, Result};
use crate::langs::NumerationLanguage;
use crate::numsys::NumerationSystem;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MergeForm {
    pub b: u64,
    pub u: usize,
    pub n: usize,
    /// Implied by the recurrence, not only observed up to the horizon.
    pub exact: bool,
}

/// Largest block length tried.
pub const MAX_BLOCK: usize = 12;

/// Smallest `u`, then smallest `N`, with `U_{i+u} = b U_i` for
/// `N ≤ i ≤ horizon − u`.
pub fn detect_merge_form(sys: &NumerationSystem, horizon: usize) -> Result<Option<MergeForm>> {
    let terms = sys.extend_sequence(horizon)?;
    for u in 1..=MAX_BLOCK.min(horizon / 2) {
        // the identity is hereditary upward, so find the last failure
        let fails = |i: usize| {
            let (q, r) = (&terms[i + u] / &terms[i], &terms[i + u] % &terms[i]);
            (q, r.is_zero())
        };
        let (b, ok) = fails(horizon - u);
        if !ok || b < BigUint::from(2u32) {
            continue;
        }
        let n = (0..=horizon - u)
            .rev()
            .find(|&i| terms[i + u] != &b * &terms[i])
            .map_or(0, |i| i + 1);
        if n + 2 * u > horizon {
            continue;
        }
        let b = b
            .to_u64()
            .ok_or_else(|| CoreError::Cap("merge base exceeds 64 bits".into()))?;
        return Ok(Some(MergeForm {
            b,
            u,
            n,
            exact: divides_shifted(sys, u, b),
        }));
    }
    Ok(None)
}

/// Whether the characteristic polynomial divides `x^j (x^u − b)` for some `j`.
fn divides_shifted(sys: &NumerationSystem, u: usize, b: u64) -> bool {
    let p = Poly::from_ints(&sys.char_poly());
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut q: Vec<BigRational> = vec![int(0); u + 1];
    q[0] = int(-(b as i64));
    q[u] = int(1);
    let mut q = Poly::new(q);
    let x = Poly::new(vec![int(0), int(1)]);
    for _ in 0..=sys.order() {
        if q.rem(&p).is_zero() {
            return true;
        }
        q = q.mul(&x);
    }
    false
}

/// LSDF transducer from padded representations of length `N + ju`,
/// `j ≥ 1`, to base-`b` words over oversized digits `0..U_{N+u}`.
pub fn chunking_transducer(sys: &NumerationSystem, form: &MergeForm) -> Result<Transducer> {
    let head = form.n + form.u;
    let terms = sys.extend_sequence(head)?;
    let small: Vec<u64> = terms
        .iter()
        .map(|t| t.to_u64().ok_or_else(|| CoreError::Cap("block value exceeds 64 bits".into())))
        .collect::<Result<_>>()?;
    let out = small[head];
    if out > 1 << 16 {
        return Err(CoreError::Cap(format!("output alphabet {out} too large")));
    }
    let input = sys.alphabet_bound() as usize;
    // state keys: (in_head, position, partial value)
    let mut index: FxHashMap<(bool, usize, u64), usize> = FxHashMap::default();
    let mut keys = vec![(true, 0usize, 0u64)];
    index.insert(keys[0], 0);
    let mut edges: Vec<(usize, u32, usize, Vec<u32>)> = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let (in_head, pos, val) = keys[i];
        for d in 0..input as u32 {
            let weight = if in_head { small[pos] } else { small[form.n + pos] };
            let v = val + d as u64 * weight;
            if v >= out {
                continue;
            }
            let width = if in_head { head } else { form.u };
            let (target, emit) = if pos + 1 == width {
                ((false, 0, 0), vec![v as u32])
            } else {
                ((in_head, pos + 1, v), Vec::new())
            };
            let id = *index.entry(target).or_insert_with(|| {
                keys.push(target);
                keys.len() - 1
            });
            edges.push((i, d, id, emit));
        }
        i += 1;
    }
    let mut t = Transducer::new(input, out as usize, keys.len(), 0);
    for (from, d, to, emit) in edges {
        t.set_transition(from, d, to, emit);
    }
    if let Some(&q) = index.get(&(false, 0, 0)) {
        t.set_final(q, Vec::new());
    }
    Ok(t)
}

/// LSDF carry propagation from digits `0..=max_digit` to base `b`.
pub fn normalization_transducer(b: u64, max_digit: u64) -> Result<Transducer> {
    if b < 2 || max_digit < b - 1 {
        return Err(CoreError::InvalidSystem(format!("base {b} with maximal digit {max_digit}")));
    }
    let carries = max_digit.div_ceil(b - 1) as usize + 1;
    let mut t = Transducer::new(max_digit as usize + 1, b as usize, carries, 0);
    for c in 0..carries as u64 {
        for x in 0..=max_digit {
            let s = x + c;
            t.set_transition(c as usize, x as u32, (s / b) as usize, vec![(s % b) as u32]);
        }
        let mut tail = Vec::new();
        let mut r = c;
        while r > 0 {
            tail.push((r % b) as u32);
            r /= b;
        }
        t.set_final(c as usize, tail);
    }
    Ok(t)
}

/// Padded words whose length is `N + ju` with `j ≥ 1`.
fn length_dfa(alphabet: usize, form: &MergeForm) -> Dfa {
    let head = form.n + form.u;
    // states 0..head count the head, then head..head+u track the phase
    Dfa::from_fn(
        alphabet,
        head + form.u,
        0,
        |q| q == head,
        |q, _| {
            if q + 1 < head + form.u {
                q + 1
            } else {
                head
            }
        },
    )
}

/// Minimal DFA for `0^* rep_b(X)` given a DFA for `rep_U(X)`.
pub fn reduce_to_base(sys: &NumerationSystem, form: &MergeForm, dfa: &Dfa, lang: &NumerationLanguage) -> Result<Dfa> {
    let m = lang.dfa.alphabet();
    if dfa.alphabet() > m {
        return Err(CoreError::InvalidSystem(format!(
            "input alphabet {} exceeds C_U = {m}",
            dfa.alphabet()
        )));
    }
    let a = dfa.widen(m).pad_closure(0).intersect(&lang.dfa)?;
    let shaped = a.intersect(&length_dfa(m, form))?;
    let lsdf = shaped.reverse().determinize(DEFAULT_STATE_CAP)?.minimize();
    let chunk = chunking_transducer(sys, form)?;
    let norm = normalization_transducer(form.b, chunk.output_alphabet() as u64 - 1)?;
    let t = chunk.compose(&norm)?;
    let image = t.image(&lsdf)?;
    let msdf = image.reverse().determinize(DEFAULT_STATE_CAP)?;
    Ok(strip_leading_zeros(&msdf)?.pad_closure(0))
}

/// Every word `w` with `0^j w` accepted for some `j`.
fn strip_leading_zeros(d: &Dfa) -> Result<Dfa> {
    let mut nfa: Nfa = d.to_nfa();
    let mut q = d.initial();
    let mut seen = vec![false; d.state_count()];
    while !seen[q] {
        seen[q] = true;
        nfa.add_initial(q);
        q = d.next(q, 0);
    }
    Ok(nfa.determinize(DEFAULT_STATE_CAP)?.minimize())
}

/// MSDF base-`b` words (leading zeros allowed) with value `≡ r (mod q)`.
pub fn base_residue_dfa(b: u64, q: u64, r: u64) -> Dfa {
    Dfa::from_fn(
        b as usize,
        q as usize,
        0,
        |v| v as u64 == r % q,
        |v, d| ((v as u64 * b + d as u64) % q) as usize,
    )
    .minimize()
}

/// MSDF base-`b` digits of `n`, empty for zero.
pub fn base_rep(b: u64, mut n: u64) -> Vec<u32> {
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % b) as u32);
        n /= b;
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numsys::builtin;

    #[test]
    fn detects_merge_forms() {
        let f = detect_merge_form(&builtin("merge").unwrap(), 60).unwrap().unwrap();
        assert_eq!((f.b, f.u, f.n, f.exact), (6, 2, 0, true));
        let f = detect_merge_form(&builtin("h2ok").unwrap(), 60).unwrap().unwrap();
        assert_eq!((f.b, f.u, f.n, f.exact), (4, 3, 0, true));
        assert_eq!(detect_merge_form(&builtin("toy").unwrap(), 60).unwrap(), None);
    }

    #[test]
    fn chunks_and_normalizes() {
        let sys = builtin("merge").unwrap();
        let f = detect_merge_form(&sys, 60).unwrap().unwrap();
        let t = chunking_transducer(&sys, &f).unwrap();
        // LSDF 1,0,1 padded to 1,0,1,0 is 1 + 6 = 7
        assert_eq!(t.run(&[1, 0, 1, 0]), Some(vec![1, 1]));
        let n = normalization_transducer(6, 7).unwrap();
        assert_eq!(n.run(&[7]), Some(vec![1, 1]));
        assert_eq!(n.run(&[3, 5, 0]), Some(vec![3, 5, 0]));
    }
}
