//! Ultimate periodicity of `X` given a DFA for `rep_U(X)`.
//!
//! Positive answers always come with a witness `(a, π, R, E)` that has
//! been checked for equivalence against the input. Negative answers come
//! from one of three refutations: density (the input or its complement
//! grows polynomially while the numeration language grows exponentially),
//! slices (both `X` and its complement contain arbitrarily long runs of
//! consecutive integers), or an exhausted complete candidate set.

use std::fmt;

use num_traits::ToPrimitive;
use rustc_hash::{FxHashMap, FxHashSet};
use upcheck_automata::{Dfa, ProductMode};

use crate::bounds::{
    classify_primes, enumerate_candidate_periods, fit_certificate, maximal_under_divisibility, period_bounds,
    BoundInputs, ExponentBound, PeriodBoundReport, ValuationCertificate, CERT_HORIZON,
};
use crate::error::{CoreError, Result};
use crate::graph;
use crate::hypotheses::{check_hypotheses, GSource};
use crate::langs::residue::{ResidueProduct, DEFAULT_PRODUCT_CAP};
use crate::langs::NumerationLanguage;
use crate::numsys::NumerationSystem;
use crate::soittola::soittola_params;

/// `X = {n : (n mod π ∈ R) xor (n < a and n ∈ E)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpSetSpec {
    pub preperiod: u64,
    pub period: u64,
    /// Sorted residues modulo the period.
    pub residues: Vec<u64>,
    /// Sorted values below the preperiod whose membership is flipped.
    pub exceptions: Vec<u64>,
}

impl UpSetSpec {
    pub fn new(preperiod: u64, period: u64, mut residues: Vec<u64>, mut exceptions: Vec<u64>) -> Result<Self> {
        if period == 0 {
            return Err(CoreError::InvalidSystem("period must be positive".into()));
        }
        residues.sort_unstable();
        residues.dedup();
        exceptions.sort_unstable();
        exceptions.dedup();
        if residues.last().is_some_and(|&r| r >= period) {
            return Err(CoreError::InvalidSystem(format!("residue outside 0..{period}")));
        }
        if exceptions.last().is_some_and(|&e| e >= preperiod) {
            return Err(CoreError::InvalidSystem(format!("exception at or above preperiod {preperiod}")));
        }
        Ok(UpSetSpec {
            preperiod,
            period,
            residues,
            exceptions,
        })
    }

    fn in_residues(&self, n: u64) -> bool {
        self.residues.binary_search(&(n % self.period)).is_ok()
    }

    pub fn contains(&self, n: u64) -> bool {
        let flipped = n < self.preperiod && self.exceptions.binary_search(&n).is_ok();
        self.in_residues(n) != flipped
    }

    /// The same set with least period and least preperiod.
    pub fn canonical(&self) -> UpSetSpec {
        let pi = self.period;
        let mask: Vec<bool> = (0..pi).map(|r| self.residues.binary_search(&r).is_ok()).collect();
        let d = (1..=pi)
            .filter(|d| pi % d == 0)
            .find(|&d| (0..pi).all(|r| mask[r as usize] == mask[((r + d) % pi) as usize]))
            .unwrap_or(pi);
        let residues: Vec<u64> = (0..d).filter(|&r| mask[r as usize]).collect();
        let tail = |n: u64| residues.binary_search(&(n % d)).is_ok();
        let a = (0..self.preperiod)
            .rev()
            .find(|&n| self.contains(n) != tail(n))
            .map_or(0, |n| n + 1);
        let exceptions = (0..a).filter(|&n| self.contains(n) != tail(n)).collect();
        UpSetSpec {
            preperiod: a,
            period: d,
            residues,
            exceptions,
        }
    }

    fn residue_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.period as usize];
        for &r in &self.residues {
            m[r as usize] = true;
        }
        m
    }
}

impl fmt::Display for UpSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={} pi={} R={{{}}} E={{{}}}",
            self.preperiod,
            self.period,
            join(&self.residues),
            join(&self.exceptions)
        )
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    UltimatelyPeriodic,
    NotUltimatelyPeriodic,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::UltimatelyPeriodic => "UltimatelyPeriodic",
            Outcome::NotUltimatelyPeriodic => "NotUltimatelyPeriodic",
            Outcome::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Flag {
    ConditionalCertificates,
    HeuristicLanguage,
    HorizonVerifiedH3,
}

impl Flag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flag::ConditionalCertificates => "conditional-certificates",
            Flag::HeuristicLanguage => "heuristic-language",
            Flag::HorizonVerifiedH3 => "horizon-verified-H3",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// `X` (or its complement, when `complement`) is infinite but has
    /// polynomially many elements below `U_ℓ`.
    Sparse { complement: bool },
    /// After `full` every long enough completion is in `X`, after `empty`
    /// none is, with unboundedly many completions in both cases.
    Slices { full: Vec<u32>, empty: Vec<u32> },
    /// Every maximal candidate period failed.
    Exhaustive { candidates: usize },
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = |v: &[u32]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".");
        match self {
            Refutation::Sparse { complement: false } => f.write_str("sparse"),
            Refutation::Sparse { complement: true } => f.write_str("co-sparse"),
            Refutation::Slices { full, empty } => write!(f, "slices full=[{}] empty=[{}]", w(full), w(empty)),
            Refutation::Exhaustive { candidates } => write!(f, "exhaustive candidates={candidates}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: Option<UpSetSpec>,
    pub report: Option<PeriodBoundReport>,
    /// State count of the padded, minimized input.
    pub states: usize,
    pub candidates_tested: usize,
    pub caps_hit: Vec<String>,
    pub refutation: Option<Refutation>,
    pub flags: Vec<Flag>,
}

impl Verdict {
    pub fn to_machine(&self) -> String {
        let mut s = format!("outcome={}\n", self.outcome.as_str());
        if let Some(w) = &self.witness {
            s.push_str(&format!(
                "period={}\npreperiod={}\nresidues={}\nexceptions={}\n",
                w.period,
                w.preperiod,
                join(&w.residues),
                join(&w.exceptions)
            ));
        }
        if let Some(r) = &self.refutation {
            s.push_str(&format!("refutation={r}\n"));
        }
        let flags: Vec<&str> = self.flags.iter().map(|f| f.as_str()).collect();
        s.push_str(&format!("flags={}\n", flags.join(",")));
        s.push_str(&format!("states={}\n", self.states));
        s.push_str(&format!("candidates_tested={}\n", self.candidates_tested));
        for c in &self.caps_hit {
            s.push_str(&format!("cap={c}\n"));
        }
        s
    }
}

#[derive(Clone, Debug, Default)]
pub enum CertificatePolicy {
    /// T2 exponents stay unbounded.
    None,
    /// Fit one certificate per T2 prime from valuation data.
    #[default]
    Auto,
    Given(Vec<ValuationCertificate>),
}

#[derive(Clone, Debug)]
pub struct DecideConfig {
    /// Largest period examined by any method.
    pub period_cap: u64,
    /// Bound on residue-product states.
    pub state_cap: usize,
    /// First and last oracle prefix lengths for witness guessing.
    pub oracle_start: u64,
    pub oracle_max: u64,
    /// Subset iterations per state in the slice refuter.
    pub slice_step_cap: usize,
    pub certificates: CertificatePolicy,
    /// Exponent used for primes whose bound is unknown or conditional.
    pub t2_exponent_cap: u32,
    pub hypothesis_horizon: usize,
    /// Compute the period-bound report (and allow the exhaustive search).
    pub bounds: bool,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            period_cap: 4096,
            state_cap: 2_000_000,
            oracle_start: 4096,
            oracle_max: 65536,
            slice_step_cap: 1024,
            certificates: CertificatePolicy::Auto,
            t2_exponent_cap: 4,
            hypothesis_horizon: 200,
            bounds: true,
        }
    }
}

/// Reachable product of several machines, accepting where `machines[acc]`
/// accepts.
struct Joint {
    dfa: Dfa,
    arity: usize,
    comps: Vec<usize>,
}

impl Joint {
    fn new(machines: &[&Dfa], acc: usize) -> Joint {
        let m = machines[0].alphabet();
        let arity = machines.len();
        let start: Vec<usize> = machines.iter().map(|d| d.initial()).collect();
        let mut index: FxHashMap<Vec<usize>, usize> = FxHashMap::default();
        index.insert(start.clone(), 0);
        let mut comps = start;
        let mut trans = Vec::new();
        let mut i = 0;
        let mut key = vec![0; arity];
        while i * arity < comps.len() {
            for d in 0..m as u32 {
                for (j, mach) in machines.iter().enumerate() {
                    key[j] = mach.next(comps[i * arity + j], d);
                }
                let next = comps.len() / arity;
                let id = *index.entry(key.clone()).or_insert_with(|| {
                    comps.extend_from_slice(&key);
                    next
                });
                trans.push(id);
            }
            i += 1;
        }
        let n = comps.len() / arity;
        let accepting = (0..n).map(|s| machines[acc].is_accepting(comps[s * arity + acc])).collect();
        Joint {
            dfa: Dfa::from_parts(m, 0, accepting, trans).expect("well-formed product"),
            arity,
            comps,
        }
    }

    fn comp(&self, s: usize, i: usize) -> usize {
        self.comps[s * self.arity + i]
    }
}

/// Input and language over a common alphabet, both closed under leading
/// zeros and minimized.
struct Prepared {
    a: Dfa,
    l: Dfa,
}

fn prepare(dfa: &Dfa, lang: &NumerationLanguage) -> Result<Prepared> {
    let m = dfa.alphabet().max(lang.dfa.alphabet());
    let a = dfa.widen(m).pad_closure(0);
    let l = lang.dfa.widen(m).minimize();
    let diff = a.difference(&l)?;
    if let Some(word) = diff.separating_word(&Dfa::empty(m))? {
        return Err(CoreError::NotSubsetOfNumerationLanguage { word });
    }
    Ok(Prepared { a, l })
}

fn accepts_word(d: &Dfa, w: &[u32]) -> bool {
    w.iter().all(|&x| (x as usize) < d.alphabet()) && d.accepts(w)
}

/// Bit `n` is set iff the padded representation of `n` is accepted.
pub fn oracle_membership(sys: &NumerationSystem, dfa: &Dfa, n_max: u64) -> Vec<bool> {
    let a = dfa.pad_closure(0);
    (0..=n_max).map(|n| accepts_word(&a, &sys.rep(n))).collect()
}

fn exceptions_dfa(sys: &NumerationSystem, spec: &UpSetSpec, alphabet: usize) -> Dfa {
    let words: Vec<Vec<u32>> = spec.exceptions.iter().map(|&e| sys.rep(e)).collect();
    Dfa::from_words(alphabet, words.iter().map(|w| w.as_slice())).pad_closure(0)
}

/// Minimal machine for the padded representations of the set.
pub fn build_up_set_dfa(sys: &NumerationSystem, spec: &UpSetSpec, lang: &NumerationLanguage) -> Result<Dfa> {
    let mask = spec.residue_mask();
    let rp = ResidueProduct::build(sys, &lang.dfa, spec.period, DEFAULT_PRODUCT_CAP)?;
    let base = rp.dfa(|r| mask[r as usize]);
    let t = exceptions_dfa(sys, spec, lang.dfa.alphabet());
    Ok(base.product(&t, ProductMode::Xor)?.minimize())
}

/// Myhill–Nerode lower bound on the minimal complete machine for the
/// padded representations of `{n : member(n)}`, without building it.
///
/// Live prefixes up to `prefix_len` are told apart by their membership
/// rows over all suffixes up to `suffix_len`; distinct rows need distinct
/// states.
pub fn residual_lower_bound(
    sys: &NumerationSystem,
    lang: &NumerationLanguage,
    member: impl Fn(u64) -> bool,
    prefix_len: usize,
    suffix_len: usize,
) -> usize {
    let m = lang.dfa.alphabet() as u32;
    let mut suffixes: Vec<Vec<u32>> = vec![Vec::new()];
    let mut layer = suffixes.clone();
    for _ in 0..suffix_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..m).map(move |d| {
                    let mut v = w.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
        suffixes.extend(layer.iter().cloned());
    }
    let live = lang.dfa.useful();
    let row = |word: &[u32]| -> Vec<u64> {
        let mut row = vec![0u64; suffixes.len().div_ceil(64)];
        for (j, t) in suffixes.iter().enumerate() {
            let mut w = word.to_vec();
            w.extend_from_slice(t);
            let hit = accepts_word(&lang.dfa, &w)
                && sys.value_small(&w).and_then(|v| u64::try_from(v).ok()).is_some_and(&member);
            if hit {
                row[j / 64] |= 1 << (j % 64);
            }
        }
        row
    };
    let mut rows = FxHashSet::default();
    let mut dead = false;
    walk_live(&lang.dfa, &live, lang.dfa.initial(), &mut Vec::new(), prefix_len, &mut |w| {
        rows.insert(row(w));
    }, &mut dead);
    if dead {
        // dead prefixes share the empty row
        rows.insert(vec![0u64; suffixes.len().div_ceil(64)]);
    }
    rows.len()
}

fn walk_live(
    d: &Dfa,
    live: &[bool],
    q: usize,
    word: &mut Vec<u32>,
    max_len: usize,
    f: &mut impl FnMut(&[u32]),
    dead: &mut bool,
) {
    f(word);
    if word.len() == max_len {
        return;
    }
    for a in 0..d.alphabet() as u32 {
        let nq = d.next(q, a);
        if !live[nq] {
            *dead = true;
            continue;
        }
        word.push(a);
        walk_live(d, live, nq, word, max_len, f, dead);
        word.pop();
    }
}

/// Padded representations of the terms `U_i`, i.e. `0^* 1 0^*`.
pub fn fixture_powers(lang: &NumerationLanguage) -> Dfa {
    let m = lang.dfa.alphabet();
    // 0: leading zeros, 1: after the one, 2: sink
    Dfa::from_fn(
        m,
        3,
        0,
        |q| q == 1,
        |q, d| match (q, d) {
            (0, 0) => 0,
            (0, 1) | (1, 0) => 1,
            _ => 2,
        },
    )
}

/// Values whose greedy representation has even length.
pub fn fixture_even_length(lang: &NumerationLanguage) -> Result<Dfa> {
    let m = lang.dfa.alphabet();
    // 0: not started (even), 1: odd, 2: even
    let parity = Dfa::from_fn(
        m,
        3,
        0,
        |q| q != 1,
        |q, d| match (q, d) {
            (0, 0) => 0,
            (0, _) | (2, _) => 1,
            _ => 2,
        },
    );
    Ok(parity.intersect(&lang.dfa)?)
}

/// Eventual residues and least preperiod for a successful period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodTest {
    pub preperiod: u64,
    pub residues: Vec<u64>,
}

/// Whether `X` is ultimately periodic with period dividing `pi`.
pub fn period_test(
    sys: &NumerationSystem,
    dfa: &Dfa,
    lang: &NumerationLanguage,
    pi: u64,
    state_cap: usize,
) -> Result<Option<PeriodTest>> {
    period_test_prepared(sys, &prepare(dfa, lang)?, pi, state_cap)
}

/// Every class `n ≡ r (mod π)` must be eventually inside or eventually
/// outside `X`. Words are read from a virtual start node that forbids a
/// leading zero, so distinct paths are distinct integers; a class side is
/// infinite iff one of its states is reachable from a cycle.
fn period_test_prepared(sys: &NumerationSystem, p: &Prepared, pi: u64, cap: usize) -> Result<Option<PeriodTest>> {
    let joint = Joint::new(&[&p.a, &p.l], 1);
    let rp = ResidueProduct::build(sys, &joint.dfa, pi, cap)?;
    let n = rp.state_count();
    let m = rp.alphabet();
    let root = n;
    let rp = &rp;
    let succ = |v: usize| {
        let (src, lo) = if v == root { (0, 1) } else { (v, 0) };
        (lo..m).map(move |d| rp.next(src, d as u32))
    };
    let mut seed = vec![false; n + 1];
    seed[root] = true;
    let reach = graph::closure(n + 1, &seed, succ);
    let cyc = graph::cyclic(n + 1, succ);
    let seeds: Vec<bool> = (0..=n).map(|v| reach[v] && cyc[v]).collect();
    let pump = graph::closure(n + 1, &seeds, succ);
    let in_x = |s: usize| rp.lang_state(s).is_some_and(|j| p.a.is_accepting(joint.comp(j, 0)));
    let piu = pi as usize;
    let (mut inf_x, mut inf_c) = (vec![false; piu], vec![false; piu]);
    for s in 0..n {
        if reach[s] && pump[s] && rp.lang_accepts(s) {
            let r = rp.residue(s) as usize;
            if in_x(s) {
                inf_x[r] = true;
            } else {
                inf_c[r] = true;
            }
        }
    }
    if (0..piu).any(|r| inf_x[r] && inf_c[r]) {
        return Ok(None);
    }
    let bad = |s: usize| reach[s] && rp.lang_accepts(s) && in_x(s) != inf_x[rp.residue(s) as usize];
    let bad_zero = p.a.accepts(&[]) != inf_x[0];

    // longest, then lexicographically largest, word to a bad state through
    // the acyclic non-pumpable part
    const NONE: i64 = -1;
    let in_dag = |v: usize| v == root || (reach[v] && !pump[v]);
    let mut lenb = vec![NONE; n + 1];
    let mut done = vec![false; n + 1];
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        let lo = if v == root { 1 } else { 0 };
        let d = lo.max(*next);
        if d < m {
            *next = d + 1;
            let w = rp.next(if v == root { 0 } else { v }, d as u32);
            if in_dag(w) && !done[w] {
                stack.push((w, 0));
            }
            continue;
        }
        stack.pop();
        let mut best = if v != root && bad(v) { 0 } else { NONE };
        for d in lo..m {
            let w = rp.next(if v == root { 0 } else { v }, d as u32);
            if in_dag(w) && lenb[w] != NONE {
                best = best.max(lenb[w] + 1);
            }
        }
        lenb[v] = best;
        done[v] = true;
    }
    let mut preperiod = u64::from(bad_zero);
    if lenb[root] != NONE {
        let mut word = Vec::new();
        let mut v = root;
        let mut left = lenb[root];
        while left > 0 {
            let lo = if v == root { 1 } else { 0 };
            let src = if v == root { 0 } else { v };
            let d = (lo..m)
                .rev()
                .find(|&d| {
                    let w = rp.next(src, d as u32);
                    in_dag(w) && lenb[w] == left - 1
                })
                .expect("longest path continues");
            word.push(d as u32);
            v = rp.next(src, d as u32);
            left -= 1;
        }
        let value = sys
            .value_of(&word)
            .to_u64()
            .ok_or_else(|| CoreError::Cap("preperiod exceeds 64 bits".into()))?;
        preperiod = preperiod.max(value + 1);
    }
    Ok(Some(PeriodTest {
        preperiod,
        residues: (0..pi).filter(|&r| inf_x[r as usize]).collect(),
    }))
}

/// Exact equivalence of the input with the set described by `spec`.
fn verify_spec(sys: &NumerationSystem, p: &Prepared, spec: &UpSetSpec, cap: usize) -> Result<bool> {
    let mask = spec.residue_mask();
    let rp = ResidueProduct::build(sys, &p.l, spec.period, cap)?;
    let base = rp.dfa(|r| mask[r as usize]);
    let t = exceptions_dfa(sys, spec, p.a.alphabet());
    let w = base.product(&t, ProductMode::Xor)?.minimize();
    Ok(w.equivalent(&p.a)?)
}

/// Least `π` under which the second half of `bits` is periodic, with the
/// preperiod, residues and exceptions read off the data.
fn guess_spec(bits: &[bool], period_cap: u64) -> Option<UpSetSpec> {
    let n = bits.len();
    let half = n / 2;
    let top = (n / 4).min(period_cap as usize);
    for pi in 1..=top {
        if (half..n - pi).any(|i| bits[i] != bits[i + pi]) {
            continue;
        }
        let a = (0..n - pi).rev().find(|&i| bits[i] != bits[i + pi]).map_or(0, |i| i + 1);
        let residues: Vec<u64> = (a..a + pi).filter(|&i| bits[i]).map(|i| (i % pi) as u64).collect();
        let mut mask = vec![false; pi];
        for &r in &residues {
            mask[r as usize] = true;
        }
        let exceptions = (0..a).filter(|&i| bits[i] != mask[i % pi]).map(|i| i as u64).collect();
        return UpSetSpec::new(a as u64, pi as u64, residues, exceptions).ok();
    }
    None
}

/// Nontrivial strongly connected component with more internal edges than
/// states among the useful states.
fn exponential_growth(d: &Dfa) -> bool {
    let n = d.state_count();
    let m = d.alphabet();
    let useful = &d.useful();
    let succ = |v: usize| {
        let ok = useful[v];
        (0..m)
            .map(move |x| d.next(v, x as u32))
            .filter(move |&w| ok && useful[w])
    };
    let comp = graph::scc(n, succ);
    let mut states = vec![0usize; n];
    let mut edges = vec![0usize; n];
    for v in (0..n).filter(|&v| useful[v]) {
        states[comp[v]] += 1;
        edges[comp[v]] += succ(v).filter(|&w| comp[w] == comp[v]).count();
    }
    (0..n).any(|c| states[c] > 0 && edges[c] > states[c])
}

/// Whether a padded machine accepts infinitely many integers.
fn infinitely_many_values(d: &Dfa) -> bool {
    let n = d.state_count();
    let m = d.alphabet();
    let root = n;
    let succ = |v: usize| {
        let (src, lo) = if v == root { (d.initial(), 1) } else { (v, 0) };
        (lo..m).map(move |x| d.next(src, x as u32))
    };
    let mut seed = vec![false; n + 1];
    seed[root] = true;
    let reach = graph::closure(n + 1, &seed, succ);
    let cyc = graph::cyclic(n + 1, succ);
    let co = d.coreachable();
    (0..n).any(|v| reach[v] && cyc[v] && co[v])
}

fn sparse_refuter(p: &Prepared) -> Result<Option<Refutation>> {
    if !exponential_growth(&p.l) {
        return Ok(None);
    }
    if !exponential_growth(&p.a) && infinitely_many_values(&p.a) {
        return Ok(Some(Refutation::Sparse { complement: false }));
    }
    let c = p.l.difference(&p.a)?;
    if !exponential_growth(&c) && infinitely_many_values(&c) {
        return Ok(Some(Refutation::Sparse { complement: true }));
    }
    Ok(None)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SliceKind {
    Full,
    Empty,
}

struct SliceSearch<'a> {
    joint: &'a Joint,
    a: &'a Dfa,
    useful: Vec<bool>,
    step_cap: usize,
}

impl SliceSearch<'_> {
    fn in_x(&self, s: usize) -> bool {
        self.a.is_accepting(self.joint.comp(s, 0))
    }

    fn lacc(&self, s: usize) -> bool {
        self.joint.dfa.is_accepting(s)
    }

    fn holds(&self, set: &[u32], kind: SliceKind) -> bool {
        set.iter().all(|&s| {
            let s = s as usize;
            !self.lacc(s) || self.in_x(s) == (kind == SliceKind::Full)
        })
    }

    /// Kinds of unbounded slices below state `s`: sets `P_m` of states
    /// reached by completions of length `m` are eventually periodic; on a
    /// cycle position where the condition holds, the completion counts must
    /// at least double along some multiple of the cycle length.
    fn kinds(&self, s: usize) -> (bool, bool) {
        let d = &self.joint.dfa;
        let m = d.alphabet();
        let mut seen: FxHashMap<Vec<u32>, usize> = FxHashMap::default();
        let mut sets: Vec<Vec<u32>> = vec![vec![s as u32]];
        let (m0, t) = loop {
            let k = sets.len() - 1;
            if let Some(&j) = seen.get(&sets[k]) {
                break (j, k - j);
            }
            if k >= self.step_cap {
                return (false, false);
            }
            seen.insert(sets[k].clone(), k);
            let mut next: Vec<u32> = sets[k]
                .iter()
                .flat_map(|&q| (0..m).map(move |x| d.next(q as usize, x as u32) as u32))
                .filter(|&q| self.useful[q as usize])
                .collect();
            next.sort_unstable();
            next.dedup();
            if next.is_empty() {
                return (false, false);
            }
            sets.push(next);
        };
        let mut out = [false, false];
        for (i, kind) in [SliceKind::Full, SliceKind::Empty].into_iter().enumerate() {
            out[i] = (m0..m0 + t).any(|k| self.holds(&sets[k], kind) && self.grows(s, k, t));
        }
        (out[0], out[1])
    }

    fn grows(&self, s: usize, start: usize, t: usize) -> bool {
        const ROUNDS: usize = 24;
        let d = &self.joint.dfa;
        let n = d.state_count();
        let m = d.alphabet();
        let mut v = vec![0u128; n];
        v[s] = 1;
        let step = |v: &[u128]| -> Option<Vec<u128>> {
            let mut w = vec![0u128; n];
            for (q, &c) in v.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for x in 0..m {
                    let r = d.next(q, x as u32);
                    if self.useful[r] {
                        w[r] = w[r].checked_add(c)?;
                    }
                }
            }
            Some(w)
        };
        for _ in 0..start {
            match step(&v) {
                Some(w) => v = w,
                None => return false,
            }
        }
        let mut history: Vec<Vec<u128>> = vec![v.clone()];
        for _ in 0..ROUNDS {
            for _ in 0..t {
                match step(&v) {
                    Some(w) => v = w,
                    None => return false,
                }
            }
            for old in &history {
                let x_old: u128 = (0..n).filter(|&q| self.lacc(q)).map(|q| old[q]).fold(0, u128::saturating_add);
                if x_old > 0 && (0..n).all(|q| v[q] >= old[q].saturating_mul(2)) {
                    return true;
                }
            }
            history.push(v.clone());
        }
        false
    }
}

fn slice_refuter(p: &Prepared, step_cap: usize) -> Option<Refutation> {
    let joint = Joint::new(&[&p.a, &p.l], 1);
    let search = SliceSearch {
        joint: &joint,
        a: &p.a,
        useful: joint.dfa.useful(),
        step_cap,
    };
    let d = &joint.dfa;
    let m = d.alphabet();
    // breadth-first, remembering a word to each state
    let mut word: Vec<Option<Vec<u32>>> = vec![None; d.state_count()];
    word[0] = Some(Vec::new());
    let mut order = vec![0usize];
    let mut i = 0;
    let (mut full, mut empty): (Option<Vec<u32>>, Option<Vec<u32>>) = (None, None);
    while i < order.len() {
        let s = order[i];
        i += 1;
        if !search.useful[s] {
            continue;
        }
        let w = word[s].clone().expect("visited");
        let (f, e) = search.kinds(s);
        if f && full.is_none() {
            full = Some(w.clone());
        }
        if e && empty.is_none() {
            empty = Some(w.clone());
        }
        if let (Some(full), Some(empty)) = (&full, &empty) {
            return Some(Refutation::Slices {
                full: full.clone(),
                empty: empty.clone(),
            });
        }
        for x in 0..m as u32 {
            let t = d.next(s, x);
            if word[t].is_none() {
                let mut wt = w.clone();
                wt.push(x);
                word[t] = Some(wt);
                order.push(t);
            }
        }
    }
    None
}

fn bounds_report(sys: &NumerationSystem, s: usize, lang: &NumerationLanguage, cfg: &DecideConfig) -> Result<(PeriodBoundReport, bool)> {
    let t2 = classify_primes(sys)?;
    let certs: Vec<ValuationCertificate> = match &cfg.certificates {
        CertificatePolicy::None => Vec::new(),
        CertificatePolicy::Given(v) => v.clone(),
        CertificatePolicy::Auto => t2
            .iter()
            .filter_map(|c| fit_certificate(sys, c.p, CERT_HORIZON).ok())
            .collect(),
    };
    let hyp = if t2.is_empty() {
        None
    } else {
        check_hypotheses(sys, cfg.hypothesis_horizon, Some(lang.c())).ok()
    };
    let soit = if t2.is_empty() {
        None
    } else {
        soittola_params(sys, cfg.hypothesis_horizon).ok()
    };
    let inputs = BoundInputs {
        certificates: &certs,
        z: hyp.as_ref().and_then(|h| h.z),
        soittola: soit.as_ref(),
        c: lang.c(),
    };
    let report = period_bounds(sys, s, &inputs)?;
    let h3_horizon = hyp.is_some_and(|h| h.g_source == GSource::Horizon);
    Ok((report, h3_horizon))
}

/// The period-bound report `decide` would use for `dfa`.
pub fn period_bound_report(
    sys: &NumerationSystem,
    dfa: &Dfa,
    lang: &NumerationLanguage,
    cfg: &DecideConfig,
) -> Result<PeriodBoundReport> {
    let p = prepare(dfa, lang)?;
    Ok(bounds_report(sys, p.a.state_count(), lang, cfg)?.0)
}

pub fn decide(sys: &NumerationSystem, dfa: &Dfa, lang: &NumerationLanguage, cfg: &DecideConfig) -> Result<Verdict> {
    let p = prepare(dfa, lang)?;
    let mut v = Verdict {
        outcome: Outcome::Inconclusive,
        witness: None,
        report: None,
        states: p.a.state_count(),
        candidates_tested: 0,
        caps_hit: Vec::new(),
        refutation: None,
        flags: Vec::new(),
    };
    if lang.is_heuristic() {
        v.flags.push(Flag::HeuristicLanguage);
    }
    let mut h3_horizon = false;
    if cfg.bounds {
        match bounds_report(sys, v.states, lang, cfg) {
            Ok((r, h3)) => {
                v.report = Some(r);
                h3_horizon = h3;
            }
            Err(e) => v.caps_hit.push(format!("bounds: {e}")),
        }
    }

    // witness guessed from the characteristic sequence, then checked exactly
    let mut n = cfg.oracle_start.max(16);
    let mut tried = Vec::new();
    loop {
        let bits: Vec<bool> = (0..n).map(|i| accepts_word(&p.a, &sys.rep(i))).collect();
        if let Some(spec) = guess_spec(&bits, cfg.period_cap) {
            if !tried.contains(&spec) {
                v.candidates_tested += 1;
                match verify_spec(sys, &p, &spec, cfg.state_cap) {
                    Ok(true) => return finish_up(sys, &p, spec, v, cfg),
                    Ok(false) => {}
                    Err(CoreError::Cap(c)) => v.caps_hit.push(c),
                    Err(e) => return Err(e),
                }
                tried.push(spec);
            }
        }
        if n >= cfg.oracle_max {
            break;
        }
        n = (n * 2).min(cfg.oracle_max);
    }

    if let Some(r) = sparse_refuter(&p)? {
        v.outcome = Outcome::NotUltimatelyPeriodic;
        v.refutation = Some(r);
        return Ok(v);
    }
    if let Some(r) = slice_refuter(&p, cfg.slice_step_cap) {
        v.outcome = Outcome::NotUltimatelyPeriodic;
        v.refutation = Some(r);
        return Ok(v);
    }

    // maximal candidates of the period-bound report
    let Some(report) = v.report.clone() else {
        return Ok(v);
    };
    let universe = report.universe(cfg.t2_exponent_cap);
    let cands = enumerate_candidate_periods(&universe, cfg.period_cap);
    let exact_bounds = report.complete
        && report
            .primes
            .iter()
            .all(|c| matches!(c.exponent_bound, ExponentBound::Bounded(_)));
    let exhaustive = exact_bounds && !cands.cap_exceeded;
    if cands.cap_exceeded {
        v.caps_hit.push(format!("candidate periods exceed {}", cfg.period_cap));
    }
    let maximal = maximal_under_divisibility(&cands.periods);
    let mut all_failed = true;
    for &pi in &maximal {
        v.candidates_tested += 1;
        match period_test_prepared(sys, &p, pi, cfg.state_cap) {
            Ok(Some(t)) => {
                if t.preperiod > 1 << 22 {
                    v.caps_hit.push(format!("preperiod {} too large to tabulate", t.preperiod));
                    return Ok(v);
                }
                let mask: Vec<bool> = (0..pi).map(|r| t.residues.binary_search(&r).is_ok()).collect();
                let exceptions = (0..t.preperiod)
                    .filter(|&i| accepts_word(&p.a, &sys.rep(i)) != mask[(i % pi) as usize])
                    .collect();
                let spec = UpSetSpec::new(t.preperiod, pi, t.residues, exceptions)?;
                return finish_up(sys, &p, spec, v, cfg);
            }
            Ok(None) => {}
            Err(CoreError::Cap(c)) => {
                v.caps_hit.push(c);
                all_failed = false;
            }
            Err(e) => return Err(e),
        }
    }
    if exhaustive && all_failed {
        v.outcome = Outcome::NotUltimatelyPeriodic;
        v.refutation = Some(Refutation::Exhaustive {
            candidates: maximal.len(),
        });
        if report.conditional {
            v.flags.push(Flag::ConditionalCertificates);
            if h3_horizon {
                v.flags.push(Flag::HorizonVerifiedH3);
            }
        }
    }
    Ok(v)
}

fn finish_up(sys: &NumerationSystem, p: &Prepared, spec: UpSetSpec, mut v: Verdict, cfg: &DecideConfig) -> Result<Verdict> {
    let spec = spec.canonical();
    if !verify_spec(sys, p, &spec, cfg.state_cap)? {
        return Err(CoreError::ValidationFailed(format!("canonical witness {spec} fails the self-check")));
    }
    v.outcome = Outcome::UltimatelyPeriodic;
    v.witness = Some(spec);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let s = UpSetSpec::new(6, 3, vec![0], vec![5]).unwrap();
        let bits: Vec<bool> = (0..9).map(|n| s.contains(n)).collect();
        assert_eq!(bits, vec![true, false, false, true, false, true, true, false, false]);
        assert_eq!(s.canonical(), s);
        let s = UpSetSpec::new(4, 6, vec![0, 3], vec![3]).unwrap().canonical();
        assert_eq!((s.preperiod, s.period, s.residues.clone()), (4, 3, vec![0]));
        assert_eq!(s.exceptions, vec![3]);
    }

    #[test]
    fn guesses_from_bits() {
        let s = UpSetSpec::new(6, 3, vec![0], vec![5]).unwrap();
        let bits: Vec<bool> = (0..400).map(|n| s.contains(n)).collect();
        assert_eq!(guess_spec(&bits, 100), Some(s));
    }
}
