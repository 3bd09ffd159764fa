use std::collections::HashMap;

use crate::dfa::Dfa;
use crate::error::AutomataError;
use crate::nfa::Nfa;
use crate::Digit;

/// Subsequential transducer: deterministic on input, each transition emits
/// a (possibly empty) word, and final states emit a last word when the
/// input ends. Missing transitions reject.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    input: usize,
    output: usize,
    initial: usize,
    trans: Vec<Option<(usize, Vec<Digit>)>>,
    finals: Vec<Option<Vec<Digit>>>,
}

impl Transducer {
    pub fn new(input: usize, output: usize, states: usize, initial: usize) -> Self {
        assert!(initial < states);
        Transducer {
            input,
            output,
            initial,
            trans: vec![None; states * input],
            finals: vec![None; states],
        }
    }

    /// Copies its input.
    pub fn identity(alphabet: usize) -> Self {
        let mut t = Transducer::new(alphabet, alphabet, 1, 0);
        for d in 0..alphabet as Digit {
            t.set_transition(0, d, 0, vec![d]);
        }
        t.set_final(0, Vec::new());
        t
    }

    pub fn input_alphabet(&self) -> usize {
        self.input
    }

    pub fn output_alphabet(&self) -> usize {
        self.output
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn set_transition(&mut self, from: usize, d: Digit, to: usize, out: Vec<Digit>) {
        assert!((d as usize) < self.input, "input digit {d} outside alphabet");
        assert!(to < self.state_count());
        assert!(
            out.iter().all(|&o| (o as usize) < self.output),
            "output digit outside alphabet"
        );
        self.trans[from * self.input + d as usize] = Some((to, out));
    }

    pub fn set_final(&mut self, q: usize, out: Vec<Digit>) {
        assert!(out.iter().all(|&o| (o as usize) < self.output));
        self.finals[q] = Some(out);
    }

    pub fn transition(&self, q: usize, d: Digit) -> Option<(usize, &[Digit])> {
        self.trans
            .get(q * self.input + d as usize)?
            .as_ref()
            .map(|(t, w)| (*t, w.as_slice()))
    }

    pub fn final_output(&self, q: usize) -> Option<&[Digit]> {
        self.finals[q].as_deref()
    }

    /// Reads `word` from `q`, returning the state reached and the emitted
    /// word (without the final output).
    pub fn read(&self, q: usize, word: &[Digit]) -> Option<(usize, Vec<Digit>)> {
        let mut q = q;
        let mut out = Vec::new();
        for &d in word {
            if d as usize >= self.input {
                return None;
            }
            let (t, w) = self.transition(q, d)?;
            out.extend_from_slice(w);
            q = t;
        }
        Some((q, out))
    }

    /// Full translation of `word`, or `None` if it is rejected.
    pub fn run(&self, word: &[Digit]) -> Option<Vec<Digit>> {
        let (q, mut out) = self.read(self.initial, word)?;
        out.extend_from_slice(self.final_output(q)?);
        Some(out)
    }

    /// `second ∘ self`: feeds the output of `self` into `second`.
    pub fn compose(&self, second: &Transducer) -> Result<Transducer, AutomataError> {
        if self.output > second.input {
            return Err(AutomataError::AlphabetMismatch {
                left: self.output,
                right: second.input,
            });
        }
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, second.initial)];
        index.insert(pairs[0], 0);
        let mut edges: Vec<(usize, Digit, (usize, usize), Vec<Digit>)> = Vec::new();
        let mut finals: Vec<(usize, Vec<Digit>)> = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            for d in 0..self.input as Digit {
                let Some((a2, w)) = self.transition(a, d) else {
                    continue;
                };
                let Some((b2, w2)) = second.read(b, w) else {
                    continue;
                };
                let target = (a2, b2);
                if !index.contains_key(&target) {
                    index.insert(target, pairs.len());
                    pairs.push(target);
                }
                edges.push((i, d, target, w2));
            }
            if let Some(f) = self.final_output(a) {
                if let Some((b2, mut w)) = second.read(b, f) {
                    if let Some(f2) = second.final_output(b2) {
                        w.extend_from_slice(f2);
                        finals.push((i, w));
                    }
                }
            }
            i += 1;
        }
        let mut out = Transducer::new(self.input, second.output, pairs.len(), 0);
        for (from, d, target, w) in edges {
            out.set_transition(from, d, index[&target], w);
        }
        for (q, w) in finals {
            out.set_final(q, w);
        }
        Ok(out)
    }

    /// NFA over the output alphabet recognizing `{ run(w) : w ∈ L(lang) }`.
    pub fn image(&self, lang: &Dfa) -> Result<Nfa, AutomataError> {
        if self.input != lang.alphabet() {
            return Err(AutomataError::AlphabetMismatch {
                left: self.input,
                right: lang.alphabet(),
            });
        }
        let mut nfa = Nfa::new(self.output);
        let accept = nfa.add_state(true);
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let start = (self.initial, lang.initial());
        let mut pairs = vec![start];
        let s0 = nfa.add_state(false);
        index.insert(start, s0);
        nfa.add_initial(s0);
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            i += 1;
            let from = index[&(a, b)];
            for d in 0..self.input as Digit {
                let Some((a2, w)) = self.transition(a, d) else {
                    continue;
                };
                let target = (a2, lang.next(b, d));
                let to = match index.get(&target) {
                    Some(&q) => q,
                    None => {
                        let q = nfa.add_state(false);
                        index.insert(target, q);
                        pairs.push(target);
                        q
                    }
                };
                let w = w.to_vec();
                nfa.add_word_path(from, &w, to);
            }
            if lang.is_accepting(b) {
                if let Some(f) = self.final_output(a) {
                    let f = f.to_vec();
                    nfa.add_word_path(from, &f, accept);
                }
            }
        }
        Ok(nfa)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Doubles a binary number read least significant digit first.
    fn doubler() -> Transducer {
        let mut t = Transducer::new(2, 2, 2, 0);
        for carry in 0..2 {
            for d in 0..2u32 {
                let v = 2 * d + carry as u32;
                t.set_transition(carry, d, (v / 2) as usize, vec![v % 2]);
            }
        }
        t.set_final(0, vec![]);
        t.set_final(1, vec![1]);
        t
    }

    #[test]
    fn run_and_compose() {
        let t = doubler();
        assert_eq!(t.run(&[1, 1]), Some(vec![0, 1, 1]));
        let quad = t.compose(&t).unwrap();
        assert_eq!(quad.run(&[1, 1]), Some(vec![0, 0, 1, 1]));
        let id = Transducer::identity(2);
        let same = id.compose(&t).unwrap();
        for w in [&[][..], &[1], &[0, 1, 1], &[1, 0, 1]] {
            assert_eq!(same.run(w), t.run(w));
        }
    }

    #[test]
    fn identity_image_is_the_language() {
        let l = Dfa::from_fn(3, 2, 0, |q| q == 1, |_, d| (d == 2) as usize);
        let img = Transducer::identity(3).image(&l).unwrap();
        let d = img.determinize(100).unwrap();
        assert!(d.equivalent(&l).unwrap());
        assert!(matches!(
            Transducer::identity(2).image(&l),
            Err(AutomataError::AlphabetMismatch { .. })
        ));
    }
}
