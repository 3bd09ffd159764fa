use std::collections::HashMap;

use crate::dfa::Dfa;
use crate::error::AutomataError;
use crate::Digit;

/// Nondeterministic automaton with ε-moves and a set of initial states.
#[derive(Clone, Debug, Default)]
pub struct Nfa {
    alphabet: usize,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    edges: Vec<Vec<(Digit, usize)>>,
    eps: Vec<Vec<usize>>,
}

impl Nfa {
    pub fn new(alphabet: usize) -> Self {
        Nfa {
            alphabet,
            ..Default::default()
        }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn add_state(&mut self, accepting: bool) -> usize {
        self.accepting.push(accepting);
        self.edges.push(Vec::new());
        self.eps.push(Vec::new());
        self.accepting.len() - 1
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accepting[q] = accepting;
    }

    pub fn add_initial(&mut self, q: usize) {
        self.initial.push(q);
    }

    pub fn add_edge(&mut self, from: usize, d: Digit, to: usize) {
        assert!((d as usize) < self.alphabet, "digit {d} outside alphabet");
        self.edges[from].push((d, to));
    }

    pub fn add_epsilon(&mut self, from: usize, to: usize) {
        self.eps[from].push(to);
    }

    /// Adds a path spelling `word` from `from` to `to`, creating
    /// intermediate states as needed (an ε-move for the empty word).
    pub fn add_word_path(&mut self, from: usize, word: &[Digit], to: usize) {
        match word {
            [] => self.add_epsilon(from, to),
            [d] => self.add_edge(from, *d, to),
            [first, rest @ ..] => {
                let mid = self.add_state(false);
                self.add_edge(from, *first, mid);
                self.add_word_path(mid, rest, to);
            }
        }
    }

    pub fn accepts(&self, word: &[Digit]) -> bool {
        let mut mark = vec![false; self.state_count()];
        let mut cur = self.start_set(&mut mark);
        for &d in word {
            let mut next = Vec::new();
            for &q in &cur {
                for &(e, t) in &self.edges[q] {
                    if e == d && !mark[t] {
                        mark[t] = true;
                        next.push(t);
                    }
                }
            }
            cur = self.close_marked(next, &mut mark);
        }
        cur.iter().any(|&q| self.accepting[q])
    }

    fn start_set(&self, mark: &mut [bool]) -> Vec<usize> {
        let mut set = Vec::new();
        for &q in &self.initial {
            if !mark[q] {
                mark[q] = true;
                set.push(q);
            }
        }
        self.close_marked(set, mark)
    }

    /// ε-closure of `set`, whose members must already be marked; clears
    /// the marks and returns the closure sorted.
    fn close_marked(&self, mut set: Vec<usize>, mark: &mut [bool]) -> Vec<usize> {
        let mut stack = set.clone();
        while let Some(q) = stack.pop() {
            for &t in &self.eps[q] {
                if !mark[t] {
                    mark[t] = true;
                    set.push(t);
                    stack.push(t);
                }
            }
        }
        for &q in &set {
            mark[q] = false;
        }
        set.sort_unstable();
        set
    }

    /// Mirror automaton: edges flipped, initial and accepting swapped.
    pub fn reverse(&self) -> Nfa {
        let n = self.state_count();
        let mut rev = Nfa::new(self.alphabet);
        for _ in 0..n {
            rev.add_state(false);
        }
        for q in &self.initial {
            rev.accepting[*q] = true;
        }
        for q in 0..n {
            if self.accepting[q] {
                rev.initial.push(q);
            }
            for &(d, t) in &self.edges[q] {
                rev.edges[t].push((d, q));
            }
            for &t in &self.eps[q] {
                rev.eps[t].push(q);
            }
        }
        rev
    }

    /// Subset construction (complete, with the empty subset as sink).
    /// Fails once more than `cap` subsets have been created.
    pub fn determinize(&self, cap: usize) -> Result<Dfa, AutomataError> {
        let n = self.state_count();
        let m = self.alphabet;
        let mut mark = vec![false; n];
        let start = self.start_set(&mut mark);
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut trans: Vec<usize> = Vec::new();
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut i = 0;
        while i < subsets.len() {
            for b in buckets.iter_mut() {
                b.clear();
            }
            for &q in &subsets[i] {
                for &(d, t) in &self.edges[q] {
                    buckets[d as usize].push(t);
                }
            }
            i += 1;
            for bucket in buckets.iter_mut() {
                let mut set: Vec<usize> = Vec::with_capacity(bucket.len());
                for &t in bucket.iter() {
                    if !mark[t] {
                        mark[t] = true;
                        set.push(t);
                    }
                }
                let set = self.close_marked(set, &mut mark);
                let id = match index.get(&set) {
                    Some(&id) => id,
                    None => {
                        if subsets.len() >= cap {
                            return Err(AutomataError::StateBlowup { cap });
                        }
                        index.insert(set.clone(), subsets.len());
                        subsets.push(set);
                        subsets.len() - 1
                    }
                };
                trans.push(id);
            }
        }
        let accepting = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q]))
            .collect();
        Dfa::from_parts(m, 0, accepting, trans)
    }
}

/// Minimal DFA for the mirror image of `L(nfa)`.
pub fn reverse_determinize(nfa: &Nfa, cap: usize) -> Result<Dfa, AutomataError> {
    Ok(nfa.reverse().determinize(cap)?.minimize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversal_of_single_word() {
        let d = Dfa::from_words(2, [&[1, 0][..]]);
        let r = reverse_determinize(&d.to_nfa(), 1000).unwrap();
        assert!(r.accepts(&[0, 1]));
        assert!(!r.accepts(&[1, 0]));
        let back = reverse_determinize(&r.to_nfa(), 1000).unwrap();
        assert!(back.equivalent(&d).unwrap());
        let e = reverse_determinize(&Dfa::empty(2).to_nfa(), 1000).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn epsilon_paths() {
        let mut nfa = Nfa::new(3);
        let a = nfa.add_state(false);
        let b = nfa.add_state(true);
        nfa.add_initial(a);
        nfa.add_word_path(a, &[2, 1, 0], b);
        nfa.add_word_path(a, &[], b);
        assert!(nfa.accepts(&[]));
        assert!(nfa.accepts(&[2, 1, 0]));
        assert!(!nfa.accepts(&[2, 1]));
        let d = nfa.determinize(100).unwrap();
        assert!(d.accepts(&[]) && d.accepts(&[2, 1, 0]) && !d.accepts(&[2]));
    }

    #[test]
    fn blowup_is_reported() {
        // (0|1)* 1 (0|1)^6 needs 2^7 subsets
        let mut nfa = Nfa::new(2);
        let s: Vec<usize> = (0..8).map(|i| nfa.add_state(i == 7)).collect();
        nfa.add_initial(s[0]);
        nfa.add_edge(s[0], 0, s[0]);
        nfa.add_edge(s[0], 1, s[0]);
        nfa.add_edge(s[0], 1, s[1]);
        for i in 1..7 {
            nfa.add_edge(s[i], 0, s[i + 1]);
            nfa.add_edge(s[i], 1, s[i + 1]);
        }
        assert!(matches!(
            nfa.determinize(64),
            Err(AutomataError::StateBlowup { cap: 64 })
        ));
        assert_eq!(nfa.determinize(1 << 10).unwrap().minimize().state_count(), 128);
    }
}
