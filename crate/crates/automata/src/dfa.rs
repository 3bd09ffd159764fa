use std::collections::{HashMap, VecDeque};

use crate::error::AutomataError;
use crate::nfa::Nfa;
use crate::partition::Partition;
use crate::Digit;

/// Complete DFA over digits `0..alphabet`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: usize,
    initial: usize,
    accepting: Vec<bool>,
    trans: Vec<usize>,
}

/// Boolean combination used by [`Dfa::product`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMode {
    And,
    Diff,
    Or,
    Xor,
}

impl ProductMode {
    fn combine(self, a: bool, b: bool) -> bool {
        match self {
            ProductMode::And => a && b,
            ProductMode::Diff => a && !b,
            ProductMode::Or => a || b,
            ProductMode::Xor => a != b,
        }
    }
}

/// Outcome of [`Dfa::is_finite`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finiteness {
    /// All accepted words, in radix order.
    Finite(Vec<Vec<Digit>>),
    /// `prefix · cycle^k · suffix` is accepted for every `k ≥ 0`.
    Infinite {
        prefix: Vec<Digit>,
        cycle: Vec<Digit>,
        suffix: Vec<Digit>,
    },
}

impl Dfa {
    /// Builds a machine from a flat transition table indexed by
    /// `state * alphabet + digit`.
    pub fn from_parts(
        alphabet: usize,
        initial: usize,
        accepting: Vec<bool>,
        trans: Vec<usize>,
    ) -> Result<Self, AutomataError> {
        let n = accepting.len();
        if alphabet == 0 {
            return Err(AutomataError::Malformed("empty alphabet".into()));
        }
        if n == 0 || initial >= n {
            return Err(AutomataError::Malformed("initial state out of range".into()));
        }
        if trans.len() != n * alphabet {
            return Err(AutomataError::Malformed(format!(
                "expected {} transitions, got {}",
                n * alphabet,
                trans.len()
            )));
        }
        if let Some(&bad) = trans.iter().find(|&&t| t >= n) {
            return Err(AutomataError::Malformed(format!("target {bad} out of range")));
        }
        Ok(Dfa {
            alphabet,
            initial,
            accepting,
            trans,
        })
    }

    /// Builds a machine from closures; `next` must return states `< states`.
    pub fn from_fn(
        alphabet: usize,
        states: usize,
        initial: usize,
        accept: impl Fn(usize) -> bool,
        next: impl Fn(usize, Digit) -> usize,
    ) -> Self {
        let mut trans = Vec::with_capacity(states * alphabet);
        for q in 0..states {
            for d in 0..alphabet {
                trans.push(next(q, d as Digit));
            }
        }
        let accepting = (0..states).map(accept).collect();
        Dfa::from_parts(alphabet, initial, accepting, trans).expect("from_fn: invalid machine")
    }

    /// The machine accepting nothing.
    pub fn empty(alphabet: usize) -> Self {
        Dfa::from_fn(alphabet, 1, 0, |_| false, |_, _| 0)
    }

    /// The machine accepting every word.
    pub fn universal(alphabet: usize) -> Self {
        Dfa::from_fn(alphabet, 1, 0, |_| true, |_, _| 0)
    }

    /// The (minimal) machine accepting exactly the given finite set of words.
    pub fn from_words<'a>(
        alphabet: usize,
        words: impl IntoIterator<Item = &'a [Digit]>,
    ) -> Self {
        // state 0 is the sink, state 1 the root of the trie
        let mut trans = vec![0usize; 2 * alphabet];
        let mut accepting = vec![false, false];
        for w in words {
            let mut q = 1;
            for &d in w {
                assert!((d as usize) < alphabet, "digit {d} outside alphabet");
                let slot = q * alphabet + d as usize;
                if trans[slot] == 0 {
                    let fresh = accepting.len();
                    accepting.push(false);
                    trans.extend(std::iter::repeat(0).take(alphabet));
                    trans[slot] = fresh;
                }
                q = trans[slot];
            }
            accepting[q] = true;
        }
        Dfa {
            alphabet,
            initial: 1,
            accepting,
            trans,
        }
        .minimize()
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.state_count()).filter(move |&q| self.accepting[q])
    }

    #[inline]
    pub fn next(&self, q: usize, d: Digit) -> usize {
        self.trans[q * self.alphabet + d as usize]
    }

    /// State reached from `q` by reading `word`; digits outside the
    /// alphabet yield `None`.
    pub fn run_from(&self, q: usize, word: &[Digit]) -> Option<usize> {
        let mut q = q;
        for &d in word {
            if d as usize >= self.alphabet {
                return None;
            }
            q = self.next(q, d);
        }
        Some(q)
    }

    pub fn accepts(&self, word: &[Digit]) -> bool {
        self.run_from(self.initial, word)
            .is_some_and(|q| self.accepting[q])
    }

    /// Same machine with a different acceptance predicate.
    pub fn with_accepting(&self, accept: impl Fn(usize) -> bool) -> Dfa {
        Dfa {
            accepting: (0..self.state_count()).map(accept).collect(),
            ..self.clone()
        }
    }

    /// Same alphabet, widened: the new digits lead to a rejecting sink.
    pub fn widen(&self, alphabet: usize) -> Dfa {
        assert!(alphabet >= self.alphabet);
        if alphabet == self.alphabet {
            return self.clone();
        }
        let n = self.state_count();
        let sink = n;
        Dfa::from_fn(
            alphabet,
            n + 1,
            self.initial,
            |q| q < n && self.accepting[q],
            |q, d| {
                if q == sink || d as usize >= self.alphabet {
                    sink
                } else {
                    self.next(q, d)
                }
            },
        )
    }

    /// States reachable from the initial state, in canonical BFS order.
    fn bfs_order(&self) -> Vec<usize> {
        let n = self.state_count();
        let mut seen = vec![false; n];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for d in 0..self.alphabet {
                let t = self.trans[q * self.alphabet + d];
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut r = vec![false; self.state_count()];
        for q in self.bfs_order() {
            r[q] = true;
        }
        r
    }

    /// States from which some accepting state can be reached.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for d in 0..self.alphabet {
                preds[self.trans[q * self.alphabet + d]].push(q);
            }
        }
        let mut co = self.accepting.clone();
        let mut stack: Vec<usize> = self.accepting_states().collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !co[p] {
                    co[p] = true;
                    stack.push(p);
                }
            }
        }
        co
    }

    /// Reachable and co-reachable states.
    pub fn useful(&self) -> Vec<bool> {
        let r = self.reachable();
        let c = self.coreachable();
        r.iter().zip(c).map(|(a, b)| *a && b).collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.useful()[self.initial]
    }

    /// Minimal equivalent machine in canonical form (Hopcroft refinement,
    /// then BFS renumbering with digits explored in increasing order).
    pub fn minimize(&self) -> Dfa {
        let m = self.alphabet;
        let order = self.bfs_order();
        let n = order.len();
        let mut index = vec![usize::MAX; self.state_count()];
        for (i, &q) in order.iter().enumerate() {
            index[q] = i;
        }
        let mut trans = vec![0usize; n * m];
        for (i, &q) in order.iter().enumerate() {
            for d in 0..m {
                trans[i * m + d] = index[self.trans[q * m + d]];
            }
        }
        let accepting: Vec<bool> = order.iter().map(|&q| self.accepting[q]).collect();

        let blocks = hopcroft(n, m, &trans, &accepting);

        // canonical renumbering of blocks, starting from the block of state 0
        let mut block_index = vec![usize::MAX; blocks.set_count()];
        let mut reps = vec![0usize];
        block_index[blocks.set_of(0)] = 0;
        let mut i = 0;
        while i < reps.len() {
            let q = reps[i];
            i += 1;
            for d in 0..m {
                let t = trans[q * m + d];
                let b = blocks.set_of(t);
                if block_index[b] == usize::MAX {
                    block_index[b] = reps.len();
                    reps.push(t);
                }
            }
        }
        let k = reps.len();
        let mut out_trans = vec![0usize; k * m];
        for (i, &q) in reps.iter().enumerate() {
            for d in 0..m {
                out_trans[i * m + d] = block_index[blocks.set_of(trans[q * m + d])];
            }
        }
        Dfa {
            alphabet: m,
            initial: 0,
            accepting: reps.iter().map(|&q| accepting[q]).collect(),
            trans: out_trans,
        }
    }

    fn check_alphabet(&self, other: &Dfa) -> Result<(), AutomataError> {
        if self.alphabet != other.alphabet {
            return Err(AutomataError::AlphabetMismatch {
                left: self.alphabet,
                right: other.alphabet,
            });
        }
        Ok(())
    }

    /// Reachable part of the product machine (not minimized).
    pub fn product(&self, other: &Dfa, mode: ProductMode) -> Result<Dfa, AutomataError> {
        self.check_alphabet(other)?;
        let m = self.alphabet;
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert(pairs[0], 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            i += 1;
            for d in 0..m as Digit {
                let t = (self.next(a, d), other.next(b, d));
                let id = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    pairs.len() - 1
                });
                trans.push(id);
            }
        }
        let accepting = pairs
            .iter()
            .map(|&(a, b)| mode.combine(self.accepting[a], other.accepting[b]))
            .collect();
        Dfa::from_parts(m, 0, accepting, trans)
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa, AutomataError> {
        Ok(self.product(other, ProductMode::And)?.minimize())
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa, AutomataError> {
        Ok(self.product(other, ProductMode::Or)?.minimize())
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa, AutomataError> {
        Ok(self.product(other, ProductMode::Diff)?.minimize())
    }

    /// `ambient \ self`. This is the complement to use for sets of
    /// integers, since it stays inside the ambient numeration language.
    pub fn complement_within(&self, ambient: &Dfa) -> Result<Dfa, AutomataError> {
        ambient.difference(self)
    }

    /// Complement over all digit words, including words that are not
    /// representations of anything; prefer [`Dfa::complement_within`].
    pub fn complement_absolute(&self) -> Dfa {
        self.with_accepting(|q| !self.accepting[q])
    }

    /// A shortest word accepted by exactly one of the machines (the least
    /// one in lexicographic order among the shortest), or `None` when the
    /// languages coincide.
    pub fn separating_word(&self, other: &Dfa) -> Result<Option<Vec<Digit>>, AutomataError> {
        self.check_alphabet(other)?;
        let mut parent: HashMap<(usize, usize), Option<((usize, usize), Digit)>> = HashMap::new();
        let start = (self.initial, other.initial);
        parent.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some(pair @ (a, b)) = queue.pop_front() {
            if self.accepting[a] != other.accepting[b] {
                let mut word = Vec::new();
                let mut cur = pair;
                while let Some(Some((prev, d))) = parent.get(&cur) {
                    word.push(*d);
                    cur = *prev;
                }
                word.reverse();
                return Ok(Some(word));
            }
            for d in 0..self.alphabet as Digit {
                let t = (self.next(a, d), other.next(b, d));
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(t) {
                    e.insert(Some((pair, d)));
                    queue.push_back(t);
                }
            }
        }
        Ok(None)
    }

    pub fn equivalent(&self, other: &Dfa) -> Result<bool, AutomataError> {
        Ok(self.separating_word(other)?.is_none())
    }

    /// True when the language is finite (no cycle through a useful state).
    pub fn language_is_finite(&self) -> bool {
        self.find_useful_cycle().is_none()
    }

    fn find_useful_cycle(&self) -> Option<usize> {
        let useful = self.useful();
        let n = self.state_count();
        // iterative DFS, colors: 0 white, 1 on stack, 2 done
        let mut color = vec![0u8; n];
        for root in 0..n {
            if !useful[root] || color[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            color[root] = 1;
            while let Some(&mut (q, ref mut d)) = stack.last_mut() {
                if *d == self.alphabet {
                    color[q] = 2;
                    stack.pop();
                    continue;
                }
                let t = self.trans[q * self.alphabet + *d];
                *d += 1;
                if !useful[t] {
                    continue;
                }
                match color[t] {
                    0 => {
                        color[t] = 1;
                        stack.push((t, 0));
                    }
                    1 => return Some(t),
                    _ => {}
                }
            }
        }
        None
    }

    /// Shortest path (as a word) from `from` to any state satisfying
    /// `target`, moving only through states allowed by `allowed`.
    fn path_to(
        &self,
        from: usize,
        allowed: &[bool],
        target: impl Fn(usize) -> bool,
        nonempty: bool,
    ) -> Option<Vec<Digit>> {
        let n = self.state_count();
        let mut parent: Vec<Option<(usize, Digit)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        if !nonempty && target(from) {
            return Some(Vec::new());
        }
        // seed with successors so that a nonempty path back to `from` is found
        for d in 0..self.alphabet as Digit {
            let t = self.next(from, d);
            if allowed[t] && !seen[t] {
                seen[t] = true;
                parent[t] = Some((usize::MAX, d));
                queue.push_back(t);
            }
        }
        while let Some(q) = queue.pop_front() {
            if target(q) {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((p, d)) = parent[cur] {
                    word.push(d);
                    if p == usize::MAX {
                        break;
                    }
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for d in 0..self.alphabet as Digit {
                let t = self.next(q, d);
                if allowed[t] && !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((q, d));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Finiteness test. A finite language is enumerated (at most `cap`
    /// words, else [`AutomataError::CapExceeded`]); an infinite one comes
    /// with a pumpable witness.
    pub fn is_finite(&self, cap: usize) -> Result<Finiteness, AutomataError> {
        if let Some(q) = self.find_useful_cycle() {
            let all = vec![true; self.state_count()];
            let useful = self.useful();
            let prefix = self
                .path_to(self.initial, &all, |t| t == q, false)
                .expect("cycle state is reachable");
            let cycle = self
                .path_to(q, &useful, |t| t == q, true)
                .expect("cycle state lies on a cycle");
            let suffix = self
                .path_to(q, &useful, |t| self.accepting[t], false)
                .expect("cycle state is co-reachable");
            return Ok(Finiteness::Infinite {
                prefix,
                cycle,
                suffix,
            });
        }
        let useful = self.useful();
        let mut words = Vec::new();
        if useful[self.initial] {
            let mut word = Vec::new();
            self.enumerate(self.initial, &useful, &mut word, &mut words, cap)?;
        }
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(Finiteness::Finite(words))
    }

    fn enumerate(
        &self,
        q: usize,
        useful: &[bool],
        word: &mut Vec<Digit>,
        out: &mut Vec<Vec<Digit>>,
        cap: usize,
    ) -> Result<(), AutomataError> {
        if self.accepting[q] {
            if out.len() == cap {
                return Err(AutomataError::CapExceeded { cap });
            }
            out.push(word.clone());
        }
        for d in 0..self.alphabet as Digit {
            let t = self.next(q, d);
            if useful[t] {
                word.push(d);
                self.enumerate(t, useful, word, out, cap)?;
                word.pop();
            }
        }
        Ok(())
    }

    /// Number of accepted words of each length `0..=max_len`, saturating.
    pub fn count_by_length(&self, max_len: usize) -> Vec<u128> {
        let n = self.state_count();
        let mut counts = vec![0u128; n];
        counts[self.initial] = 1;
        let mut out = Vec::with_capacity(max_len + 1);
        for len in 0..=max_len {
            out.push(
                self.accepting_states()
                    .fold(0u128, |acc, q| acc.saturating_add(counts[q])),
            );
            if len == max_len {
                break;
            }
            let mut next = vec![0u128; n];
            for q in 0..n {
                if counts[q] == 0 {
                    continue;
                }
                for d in 0..self.alphabet as Digit {
                    let t = self.next(q, d);
                    next[t] = next[t].saturating_add(counts[q]);
                }
            }
            counts = next;
        }
        out
    }

    /// The machine as an NFA with a single initial state.
    pub fn to_nfa(&self) -> Nfa {
        let mut nfa = Nfa::new(self.alphabet);
        for q in 0..self.state_count() {
            nfa.add_state(self.accepting[q]);
        }
        for q in 0..self.state_count() {
            for d in 0..self.alphabet as Digit {
                nfa.add_edge(q, d, self.next(q, d));
            }
        }
        nfa.add_initial(self.initial);
        nfa
    }

    /// NFA for the mirror language.
    pub fn reverse(&self) -> Nfa {
        self.to_nfa().reverse()
    }

    /// Minimal machine for `pad* · L`, i.e. the language closed under
    /// prepending any number of `pad` digits.
    pub fn pad_closure(&self, pad: Digit) -> Dfa {
        let mut nfa = self.to_nfa();
        let lead = nfa.add_state(false);
        nfa.add_edge(lead, pad, lead);
        nfa.add_epsilon(lead, self.initial);
        nfa.add_initial(lead);
        nfa.determinize(usize::MAX)
            .expect("padding closure of a DFA cannot blow up")
            .minimize()
    }
}

/// Coarsest partition of `0..n` compatible with acceptance and transitions.
fn hopcroft(n: usize, m: usize, trans: &[usize], accepting: &[bool]) -> Partition {
    // inverse transitions, one CSR table per digit
    let mut start = vec![0usize; m * (n + 1) + 1];
    for q in 0..n {
        for d in 0..m {
            start[d * (n + 1) + trans[q * m + d] + 1] += 1;
        }
    }
    for i in 1..start.len() {
        start[i] += start[i - 1];
    }
    let mut fill = start.clone();
    let mut sources = vec![0usize; n * m];
    for q in 0..n {
        for d in 0..m {
            let slot = d * (n + 1) + trans[q * m + d];
            sources[fill[slot]] = q;
            fill[slot] += 1;
        }
    }

    let mut blocks = Partition::new(n, 2, |q| accepting[q] as usize);
    let mut in_work = vec![false; blocks.set_count()];
    let mut work = Vec::new();
    if blocks.set_count() == 2 {
        let smaller = if blocks.size(0) <= blocks.size(1) { 0 } else { 1 };
        work.push(smaller);
        in_work[smaller] = true;
    }
    while let Some(a) = work.pop() {
        in_work[a] = false;
        let splitter = blocks.members(a).to_vec();
        for d in 0..m {
            for &t in &splitter {
                let slot = d * (n + 1) + t;
                for &s in &sources[start[slot]..start[slot + 1]] {
                    blocks.mark(s);
                }
            }
            for (old, new) in blocks.split() {
                in_work.resize(blocks.set_count(), false);
                if in_work[old] {
                    in_work[new] = true;
                    work.push(new);
                } else {
                    let pick = if blocks.size(old) <= blocks.size(new) {
                        old
                    } else {
                        new
                    };
                    in_work[pick] = true;
                    work.push(pick);
                }
            }
        }
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ends_in_one() -> Dfa {
        Dfa::from_fn(2, 2, 0, |q| q == 1, |_, d| d as usize)
    }

    #[test]
    fn empty_minimizes_to_single_sink() {
        let d = Dfa::from_fn(2, 3, 0, |_| false, |q, d| (q + d as usize + 1) % 3);
        let m = d.minimize();
        assert_eq!(m.state_count(), 1);
        assert!(!m.is_accepting(0));
    }

    #[test]
    fn isomorphic_inputs_give_identical_output() {
        let a = ends_in_one();
        // same language, states permuted and a redundant copy added
        let b = Dfa::from_fn(2, 3, 2, |q| q != 2, |q, d| match (q, d) {
            (_, 0) => 2,
            (0, _) => 1,
            _ => 0,
        });
        assert_eq!(a.minimize(), b.minimize());
    }

    #[test]
    fn unreachable_accepting_state_is_dropped() {
        let d = Dfa::from_fn(2, 3, 0, |q| q == 2, |_, _| 0);
        let m = d.minimize();
        assert_eq!(m.state_count(), 1);
        assert!(m.is_empty());
    }

    #[test]
    fn product_identities() {
        let a = ends_in_one();
        assert!(a.intersect(&a).unwrap().equivalent(&a).unwrap());
        assert!(a.difference(&a).unwrap().is_empty());
        assert!(a
            .intersect(&Dfa::universal(2))
            .unwrap()
            .equivalent(&a)
            .unwrap());
        assert!(matches!(
            a.product(&Dfa::universal(3), ProductMode::And),
            Err(AutomataError::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn finiteness_examples() {
        let f = Dfa::from_words(2, [&[][..], &[1, 0][..]]);
        assert_eq!(
            f.is_finite(10).unwrap(),
            Finiteness::Finite(vec![vec![], vec![1, 0]])
        );
        // 0*1
        let inf = Dfa::from_fn(2, 3, 0, |q| q == 1, |q, d| match (q, d) {
            (0, 0) => 0,
            (0, 1) => 1,
            _ => 2,
        });
        match inf.is_finite(10).unwrap() {
            Finiteness::Infinite {
                prefix,
                cycle,
                suffix,
            } => {
                for k in 0..4 {
                    let mut w = prefix.clone();
                    for _ in 0..k {
                        w.extend(&cycle);
                    }
                    w.extend(&suffix);
                    assert!(inf.accepts(&w));
                }
                assert!(!cycle.is_empty());
            }
            other => panic!("expected infinite, got {other:?}"),
        }
        assert_eq!(
            Dfa::empty(3).is_finite(10).unwrap(),
            Finiteness::Finite(vec![])
        );
        assert!(matches!(
            f.is_finite(1),
            Err(AutomataError::CapExceeded { cap: 1 })
        ));
    }

    #[test]
    fn separating_words() {
        let a = ends_in_one();
        assert_eq!(a.separating_word(&a).unwrap(), None);
        let w = [0, 0, 1, 0];
        let plus = a.union(&Dfa::from_words(2, [&w[..]])).unwrap();
        assert_eq!(a.separating_word(&plus).unwrap(), Some(w.to_vec()));
        assert_eq!(
            Dfa::empty(2).separating_word(&Dfa::universal(2)).unwrap(),
            Some(vec![])
        );
    }

    #[test]
    fn pad_closure_adds_leading_zeros() {
        let one = Dfa::from_words(2, [&[1, 1][..]]);
        let padded = one.pad_closure(0);
        assert!(padded.accepts(&[1, 1]));
        assert!(padded.accepts(&[0, 0, 0, 1, 1]));
        assert!(!padded.accepts(&[0, 1]));
    }

    #[test]
    fn counting() {
        let a = ends_in_one();
        assert_eq!(a.count_by_length(4), vec![0, 1, 2, 4, 8]);
    }
}
