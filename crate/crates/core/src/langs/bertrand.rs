//! Expansion of 1 in base `β` and the Parry chain automaton.
//!
//! Remainders live in `ℚ[x]/(P)` with `P` the squarefree characteristic
//! polynomial, so every digit and every zero test is decided exactly
//! against the isolated dominant root.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use upcheck_automata::Dfa;

use crate::error::{CoreError, Result};
use crate::numsys::NumerationSystem;
use crate::poly::{eval_rational_interval, real_roots, Poly, RealRoot};

/// Greedy expansion `d_β(1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expansion {
    /// `t_1 … t_m` followed by zeros.
    Finite(Vec<u32>),
    /// `pre · cycle^ω`.
    Periodic { pre: Vec<u32>, cycle: Vec<u32> },
}

impl Expansion {
    /// Quasi-greedy expansion `d*_β(1)` as `(pre, cycle)`.
    pub fn quasi_greedy(&self) -> (Vec<u32>, Vec<u32>) {
        match self {
            Expansion::Finite(t) => {
                let mut c = t.clone();
                *c.last_mut().expect("nonempty expansion") -= 1;
                (Vec::new(), c)
            }
            Expansion::Periodic { pre, cycle } => (pre.clone(), cycle.clone()),
        }
    }

    pub fn max_digit(&self) -> u32 {
        match self {
            Expansion::Finite(t) => t.iter().copied().max().unwrap_or(0),
            Expansion::Periodic { pre, cycle } => pre.iter().chain(cycle).copied().max().unwrap_or(0),
        }
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Dominant (largest) real root of the characteristic polynomial.
pub(crate) fn dominant_root(sys: &NumerationSystem) -> Result<RealRoot> {
    let p = Poly::from_ints(&sys.char_poly());
    let root = real_roots(&p).pop().ok_or(CoreError::NoDominantRoot)?;
    if root.bounds().1 <= &BigRational::one() {
        return Err(CoreError::NoDominantRoot);
    }
    Ok(root)
}

/// `⌊f(β)⌋`, exactly.
fn floor_at(root: &mut RealRoot, f: &Poly) -> i64 {
    root.refine(64);
    let (lo, hi) = eval_rational_interval(f, root.bounds().0, root.bounds().1);
    let mut t = ((lo + hi) / int(2)).floor().to_integer().to_i64().unwrap_or(0);
    while root.sign_of(&f.sub(&Poly::constant(int(t)))) == Ordering::Less {
        t -= 1;
    }
    while root.sign_of(&f.sub(&Poly::constant(int(t + 1)))) != Ordering::Less {
        t += 1;
    }
    t
}

/// Digits of `d_β(1)` until the remainder vanishes or repeats.
pub fn expansion_of_one(sys: &NumerationSystem, cutoff: usize) -> Result<Expansion> {
    let mut root = dominant_root(sys)?;
    let modulus = root.poly().clone();
    let x = Poly::new(vec![int(0), int(1)]);
    let mut rem = Poly::constant(int(1));
    let mut digits = Vec::new();
    let mut seen: Vec<Poly> = vec![rem.clone()];
    for _ in 0..cutoff {
        let f = x.mul(&rem).rem(&modulus);
        let t = floor_at(&mut root, &f);
        digits.push(u32::try_from(t).map_err(|_| CoreError::InvalidSystem(format!("digit {t} of d(1)")))?);
        rem = f.sub(&Poly::constant(int(t))).rem(&modulus);
        if root.is_root_of(&rem) {
            return Ok(Expansion::Finite(digits));
        }
        if let Some(i) = seen.iter().position(|s| root.is_root_of(&rem.sub(s))) {
            // r_j = r_i: digits after position i repeat
            let cycle = digits[i..].to_vec();
            digits.truncate(i);
            return Ok(Expansion::Periodic { pre: digits, cycle });
        }
        seen.push(rem.clone());
    }
    Err(CoreError::BertrandCutoffExceeded { cutoff })
}

/// Chain automaton for the words whose every suffix is lexicographically
/// at most the same-length prefix of `d*_β(1)`; state `j` has matched
/// `j` digits, a smaller digit restarts, a larger one dies.
pub fn chain_dfa(e: &Expansion, alphabet: usize) -> Dfa {
    let (pre, cycle) = e.quasi_greedy();
    let m = pre.len() + cycle.len();
    let alphabet = alphabet.max(e.max_digit() as usize + 1);
    let digit = |j: usize| if j < pre.len() { pre[j] } else { cycle[j - pre.len()] };
    let sink = m;
    Dfa::from_fn(
        alphabet,
        m + 1,
        0,
        |q| q != sink,
        |q, a| {
            if q == sink {
                return sink;
            }
            let c = digit(q);
            match a.cmp(&c) {
                Ordering::Less => 0,
                Ordering::Equal if q + 1 == m => pre.len(),
                Ordering::Equal => q + 1,
                Ordering::Greater => sink,
            }
        },
    )
    .minimize()
}
