//! Linear numeration systems: exact sequence, greedy representations,
//! values, and the canonical alphabet bound.

use std::fmt::Write as _;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{CoreError, Result};

/// Digits are stored most significant first.
pub type Word = Vec<u32>;

/// Terms kept in the `u128` fast table at most.
const SMALL_TABLE_MAX: usize = 4096;

pub const DEFAULT_HORIZON: usize = 200;

/// `U_{i+k} = a_{k-1} U_{i+k-1} + … + a_0 U_i` for `i ≥ N`, with
/// `U_0 ..= U_{N+k-1}` given.
#[derive(Debug)]
pub struct NumerationSystem {
    name: Option<String>,
    coeffs: Vec<BigInt>,
    offset: usize,
    initial: Vec<BigInt>,
    alphabet_bound: Option<u32>,
    g: Option<usize>,
    horizon: usize,
    cache: RwLock<Vec<BigUint>>,
    small: OnceLock<Vec<u128>>,
}

impl Clone for NumerationSystem {
    fn clone(&self) -> Self {
        NumerationSystem {
            name: self.name.clone(),
            coeffs: self.coeffs.clone(),
            offset: self.offset,
            initial: self.initial.clone(),
            alphabet_bound: self.alphabet_bound,
            g: self.g,
            horizon: self.horizon,
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
            small: self.small.clone(),
        }
    }
}

/// `C_U` together with whether the ceiling of the ratios had settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphabetBound {
    pub value: u32,
    pub stable: bool,
    pub user_supplied: bool,
}

impl NumerationSystem {
    /// `coeffs` lists `a_{k-1}` first.
    pub fn new(coeffs: Vec<BigInt>, offset: usize, initial: Vec<BigInt>) -> Result<Self> {
        let k = coeffs.len();
        if k == 0 {
            return Err(CoreError::InvalidSystem("no coefficients".into()));
        }
        if coeffs[k - 1].is_zero() {
            return Err(CoreError::InvalidSystem("a_0 must be non-zero".into()));
        }
        if initial.len() != offset + k {
            return Err(CoreError::InvalidSystem(format!(
                "expected {} initial terms (offset {offset}, order {k}), got {}",
                offset + k,
                initial.len()
            )));
        }
        if !initial[0].is_one() {
            return Err(CoreError::InvalidSystem("U_0 must be 1".into()));
        }
        let mut terms = Vec::with_capacity(initial.len());
        for (i, t) in initial.iter().enumerate() {
            let t = t
                .to_biguint()
                .ok_or_else(|| CoreError::InvalidSystem(format!("U_{i} is negative")))?;
            if i > 0 && t <= terms[i - 1] {
                return Err(CoreError::NotIncreasing { index: i - 1 });
            }
            terms.push(t);
        }
        Ok(NumerationSystem {
            name: None,
            coeffs,
            offset,
            initial,
            alphabet_bound: None,
            g: None,
            horizon: DEFAULT_HORIZON,
            cache: RwLock::new(terms),
            small: OnceLock::new(),
        })
    }

    pub fn from_i64(coeffs: &[i64], offset: usize, initial: &[i64]) -> Result<Self> {
        NumerationSystem::new(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            offset,
            initial.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn with_alphabet_bound(mut self, c: u32) -> Self {
        self.alphabet_bound = Some(c);
        self
    }

    pub fn with_g(mut self, g: usize) -> Self {
        self.g = Some(g);
        self
    }

    pub fn with_horizon(mut self, h: usize) -> Self {
        self.horizon = h.max(self.offset + self.order() + 1);
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// `a_{k-1}, …, a_0`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient `a_t` of `U_{i+t}`.
    pub fn coeff(&self, t: usize) -> &BigInt {
        &self.coeffs[self.order() - 1 - t]
    }

    pub fn initial(&self) -> &[BigInt] {
        &self.initial
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn user_g(&self) -> Option<usize> {
        self.g
    }

    pub fn user_alphabet_bound(&self) -> Option<u32> {
        self.alphabet_bound
    }

    /// `N + k`: length of the state vector of the recurrence.
    pub fn span(&self) -> usize {
        self.offset + self.order()
    }

    /// `x^k - a_{k-1} x^{k-1} - … - a_0`, constant term first.
    pub fn char_poly(&self) -> Vec<BigInt> {
        let k = self.order();
        let mut p: Vec<BigInt> = (0..k).map(|t| -self.coeff(t)).collect();
        p.push(BigInt::one());
        p
    }

    /// gcd of all coefficients.
    pub fn coeff_gcd(&self) -> BigUint {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, a| g.gcd(a))
            .magnitude()
            .clone()
    }

    /// Exact terms `U_0 ..= U_n`.
    pub fn extend_sequence(&self, n: usize) -> Result<Vec<BigUint>> {
        self.ensure(n)?;
        Ok(self.cache.read().expect("cache lock")[..=n].to_vec())
    }

    pub fn term(&self, i: usize) -> Result<BigUint> {
        self.ensure(i)?;
        Ok(self.cache.read().expect("cache lock")[i].clone())
    }

    fn ensure(&self, n: usize) -> Result<()> {
        if self.cache.read().expect("cache lock").len() > n {
            return Ok(());
        }
        let mut cache = self.cache.write().expect("cache lock");
        let k = self.order();
        while cache.len() <= n {
            let i = cache.len() - k;
            let mut next = BigInt::zero();
            for t in 0..k {
                next += self.coeff(t) * BigInt::from_biguint(Sign::Plus, cache[i + t].clone());
            }
            let last = cache.len() - 1;
            match next.to_biguint() {
                Some(v) if v > cache[last] => cache.push(v),
                _ => return Err(CoreError::NotIncreasing { index: last }),
            }
        }
        Ok(())
    }

    /// Terms that fit in `u128` (at most a few thousand of them).
    pub fn small_terms(&self) -> &[u128] {
        self.small.get_or_init(|| {
            let mut out = Vec::new();
            for i in 0..SMALL_TABLE_MAX {
                match self.term(i).ok().and_then(|t| t.to_u128()) {
                    Some(v) => out.push(v),
                    None => break,
                }
            }
            out
        })
    }

    /// Index of the largest term `≤ n`, extending the cache as needed.
    fn top_index(&self, n: &BigUint) -> Result<usize> {
        let mut i = 0;
        loop {
            if self.term(i + 1)? > *n {
                return Ok(i);
            }
            i += 1;
        }
    }

    /// Greedy representation; `ε` for zero.
    pub fn greedy_rep(&self, n: &BigUint) -> Result<Word> {
        if n.is_zero() {
            return Ok(Vec::new());
        }
        if let Some(v) = n.to_u128() {
            if let Some(w) = self.rep_small(v) {
                return Ok(w);
            }
        }
        let top = self.top_index(n)?;
        let terms = self.extend_sequence(top)?;
        let mut rest = n.clone();
        let mut word = Vec::with_capacity(top + 1);
        for t in terms.iter().rev() {
            let (q, r) = rest.div_rem(t);
            word.push(q.to_u32().expect("greedy digit fits in u32"));
            rest = r;
        }
        Ok(word)
    }

    fn rep_small(&self, n: u128) -> Option<Word> {
        let table = self.small_terms();
        // need a term strictly above n to know the length
        let top = table.partition_point(|&t| t <= n);
        if top == table.len() {
            return None;
        }
        let mut rest = n;
        let mut word = Vec::with_capacity(top);
        for &t in table[..top].iter().rev() {
            word.push((rest / t) as u32);
            rest %= t;
        }
        Some(word)
    }

    /// Greedy representation of a machine-sized integer.
    pub fn rep(&self, n: u64) -> Word {
        self.greedy_rep(&BigUint::from(n))
            .expect("greedy representation of a valid system")
    }

    /// `rep(n)` left-padded with zeros to `len` digits (never truncated).
    pub fn rep_padded(&self, n: u64, len: usize) -> Word {
        let w = self.rep(n);
        let mut out = vec![0; len.saturating_sub(w.len())];
        out.extend(w);
        out
    }

    /// `val_U(w) = Σ w_i U_i` (any digits).
    pub fn value_of(&self, w: &[u32]) -> BigUint {
        if let Some(v) = self.value_small(w) {
            return BigUint::from(v);
        }
        let n = w.len();
        let terms = if n == 0 {
            Vec::new()
        } else {
            self.extend_sequence(n - 1).expect("valid system")
        };
        w.iter()
            .rev()
            .zip(terms.iter())
            .fold(BigUint::zero(), |acc, (&d, t)| acc + t * d)
    }

    /// `val_U(w)` when it fits in `u128`.
    pub fn value_small(&self, w: &[u32]) -> Option<u128> {
        let table = self.small_terms();
        if w.len() > table.len() {
            // leading zeros may still make it representable
            let lead = w.len() - table.len();
            if w[..lead].iter().any(|&d| d != 0) {
                return None;
            }
            return self.value_small(&w[lead..]);
        }
        let mut acc: u128 = 0;
        for (&d, &t) in w.iter().rev().zip(table) {
            acc = acc.checked_add((d as u128).checked_mul(t)?)?;
        }
        Some(acc)
    }

    pub fn value_u64(&self, w: &[u32]) -> Option<u64> {
        self.value_small(w).and_then(|v| v.to_u64())
    }

    /// True iff `w` is the greedy representation of its value (no leading
    /// zero; `ε` is greedy).
    pub fn is_greedy(&self, w: &[u32]) -> bool {
        if w.first() == Some(&0) {
            return false;
        }
        self.suffix_sums_ok(w)
    }

    /// Greedy after stripping leading zeros.
    pub fn is_padded_greedy(&self, w: &[u32]) -> bool {
        let start = w.iter().position(|&d| d != 0).unwrap_or(w.len());
        self.suffix_sums_ok(&w[start..])
    }

    fn suffix_sums_ok(&self, w: &[u32]) -> bool {
        let table = self.small_terms();
        if w.len() < table.len() {
            let mut acc: u128 = 0;
            for (t, &d) in w.iter().rev().enumerate() {
                let add = (d as u128).checked_mul(table[t]);
                match add.and_then(|a| acc.checked_add(a)) {
                    Some(s) if s < table[t + 1] => acc = s,
                    Some(_) => return false,
                    None => return false,
                }
            }
            return true;
        }
        let terms = self.extend_sequence(w.len()).expect("valid system");
        let mut acc = BigUint::zero();
        for (t, &d) in w.iter().rev().enumerate() {
            acc += &terms[t] * d;
            if acc >= terms[t + 1] {
                return false;
            }
        }
        true
    }

    /// `C_U = max ⌈U_{i+1}/U_i⌉` over `i < horizon`, or the user's value.
    pub fn alphabet_report(&self) -> AlphabetBound {
        if let Some(c) = self.alphabet_bound {
            return AlphabetBound {
                value: c,
                stable: true,
                user_supplied: true,
            };
        }
        let h = self.horizon.max(8);
        let terms = self.extend_sequence(h).expect("valid system");
        let ceil = |i: usize| -> u32 {
            let (q, r) = terms[i + 1].div_rem(&terms[i]);
            let q = if r.is_zero() { q } else { q + 1u32 };
            q.to_u32().unwrap_or(u32::MAX)
        };
        let half = (0..h / 2).map(ceil).max().unwrap_or(1);
        let full = (0..h).map(ceil).max().unwrap_or(1);
        AlphabetBound {
            value: full,
            stable: half == full,
            user_supplied: false,
        }
    }

    pub fn alphabet_bound(&self) -> u32 {
        self.alphabet_report().value
    }

    /// Inverse of [`parse_system`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(s, "name = {name}");
        }
        let list = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        let _ = writeln!(s, "coefficients = {}", list(&self.coeffs));
        let _ = writeln!(s, "offset = {}", self.offset);
        let _ = writeln!(s, "initial = {}", list(&self.initial));
        if let Some(c) = self.alphabet_bound {
            let _ = writeln!(s, "alphabet_bound = {c}");
        }
        if let Some(g) = self.g {
            let _ = writeln!(s, "G = {g}");
        }
        let _ = writeln!(s, "horizon = {}", self.horizon);
        s
    }
}

/// Parses the `key = value` system format (see the README). Lists are
/// separated by commas and/or whitespace; `#` starts a comment.
pub fn parse_system(text: &str) -> Result<NumerationSystem> {
    let mut coeffs = None;
    let mut offset = 0usize;
    let mut initial = None;
    let mut alphabet = None;
    let mut g = None;
    let mut horizon = None;
    let mut name = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CoreError::Parse {
            line: lineno + 1,
            msg,
        };
        let (key, value) = line
            .split_once(['=', ':'])
            .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let value = value.trim();
        let ints = || -> Result<Vec<BigInt>> {
            value
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<BigInt>().map_err(|_| err(format!("bad integer `{t}`"))))
                .collect()
        };
        let num = || -> Result<usize> { value.parse().map_err(|_| err(format!("bad number `{value}`"))) };
        match key.trim() {
            "name" => name = Some(value.to_string()),
            "coefficients" => coeffs = Some(ints()?),
            "offset" => offset = num()?,
            "initial" => initial = Some(ints()?),
            "alphabet_bound" => alphabet = Some(num()? as u32),
            "G" => g = Some(num()?),
            "horizon" => horizon = Some(num()?),
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    let coeffs = coeffs.ok_or_else(|| CoreError::InvalidSystem("missing `coefficients`".into()))?;
    let initial = initial.ok_or_else(|| CoreError::InvalidSystem("missing `initial`".into()))?;
    let mut sys = NumerationSystem::new(coeffs, offset, initial)?;
    if let Some(n) = name {
        sys = sys.with_name(&n);
    }
    if let Some(c) = alphabet {
        sys = sys.with_alphabet_bound(c);
    }
    if let Some(g) = g {
        sys = sys.with_g(g);
    }
    if let Some(h) = horizon {
        sys = sys.with_horizon(h);
    }
    Ok(sys)
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "toy", "toy-variant", "ppp", "ex35", "merge", "noth2", "h2ok", "fib", "square", "jason",
];

/// Systems used throughout the tests and examples.
pub fn builtin(name: &str) -> Option<NumerationSystem> {
    let sys = match name {
        // U_{i+3} = 12 U_{i+2} + 6 U_{i+1} + 12 U_i
        "toy" => NumerationSystem::from_i64(&[12, 6, 12], 0, &[1, 13, 163]),
        "toy-variant" => NumerationSystem::from_i64(&[12, 6, 12], 0, &[1, 2, 3]),
        "ppp" => NumerationSystem::from_i64(&[2, 2, 0, 2], 0, &[1, 3, 9, 23]),
        "ex35" => NumerationSystem::from_i64(&[6, 3, -1, 6, 3], 0, &[1, 7, 45, 291, 1881]),
        "merge" => NumerationSystem::from_i64(&[0, 6], 0, &[1, 2]),
        "noth2" => NumerationSystem::from_i64(&[0, 5, 0, -4], 0, &[1, 2, 4, 5]),
        "h2ok" => NumerationSystem::from_i64(&[0, 0, 4], 0, &[1, 2, 3]),
        "fib" => NumerationSystem::from_i64(&[1, 1], 0, &[1, 2]),
        "square" => NumerationSystem::from_i64(&[4, -4], 0, &[1, 3]),
        // valid from index 1 only
        "jason" => NumerationSystem::from_i64(&[1, 1], 1, &[1, 4, 8]),
        _ => return None,
    };
    Some(sys.expect("built-in systems are valid").with_name(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_small_and_big_paths_agree() {
        let sys = builtin("toy").unwrap();
        let big = BigUint::from(10u32).pow(60) + 12345u32;
        let w = sys.greedy_rep(&big).unwrap();
        assert_eq!(sys.value_of(&w), big);
        assert!(sys.is_greedy(&w));
        for n in 0..3000u64 {
            let w = sys.rep(n);
            assert_eq!(sys.value_u64(&w), Some(n));
        }
    }

    #[test]
    fn parse_round_trip() {
        let sys = builtin("jason").unwrap().with_g(3);
        let back = parse_system(&sys.to_text()).unwrap();
        assert_eq!(back.to_text(), sys.to_text());
        assert!(parse_system("coefficients = 1 1\ninitial = 1 2\nbogus = 3").is_err());
    }
}
