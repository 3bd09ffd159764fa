//! Eventual period of `(U_i mod m)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{CoreError, Result};
use crate::numsys::NumerationSystem;

/// Default limit on recurrence steps while looking for a repeated tuple.
pub const DEFAULT_PROFILE_CAP: usize = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModProfile {
    pub modulus: u64,
    pub preperiod: usize,
    pub period: usize,
    /// `U_i mod m` for `i < preperiod + period`.
    pub values: Vec<u64>,
}

impl ModProfile {
    pub fn residue(&self, i: usize) -> u64 {
        self.values[self.clamp(i)]
    }

    /// Index with the same residue inside the stored window.
    pub fn clamp(&self, i: usize) -> usize {
        if i < self.preperiod + self.period {
            i
        } else {
            self.preperiod + (i - self.preperiod) % self.period
        }
    }

    pub fn periodic_part(&self) -> &[u64] {
        &self.values[self.preperiod..]
    }

    /// Eventually zero.
    pub fn is_zero_period(&self) -> bool {
        self.periodic_part().iter().all(|&v| v == 0)
    }
}

/// Reduces `a` into `[0, m)`.
pub fn reduce(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().expect("residue below modulus")
}

/// Steps the recurrence modulo `m` on the tuple `(U_i, …, U_{i+k-1})`.
pub(crate) struct TupleStepper {
    coeffs: Vec<u64>,
    m: u64,
}

impl TupleStepper {
    pub fn new(sys: &NumerationSystem, m: u64) -> Self {
        let k = sys.order();
        TupleStepper {
            coeffs: (0..k).map(|t| reduce(sys.coeff(t), m)).collect(),
            m,
        }
    }

    pub fn next_term(&self, tuple: &[u64]) -> u64 {
        let mut acc: u128 = 0;
        for (a, s) in self.coeffs.iter().zip(tuple) {
            acc += *a as u128 * *s as u128;
            acc %= self.m as u128;
        }
        acc as u64
    }

    fn step(&self, tuple: &mut Vec<u64>) {
        let next = self.next_term(tuple);
        tuple.remove(0);
        tuple.push(next);
    }
}

/// `U_0 .. U_{n-1}` modulo `m`.
pub fn residues(sys: &NumerationSystem, m: u64, n: usize) -> Vec<u64> {
    let k = sys.order();
    let stepper = TupleStepper::new(sys, m);
    let mut out: Vec<u64> = sys.initial().iter().take(n).map(|u| reduce(u, m)).collect();
    while out.len() < n {
        let i = out.len() - k;
        let next = stepper.next_term(&out[i..i + k]);
        out.push(next);
    }
    out
}

pub fn mod_profile(sys: &NumerationSystem, m: u64) -> Result<ModProfile> {
    mod_profile_capped(sys, m, DEFAULT_PROFILE_CAP)
}

/// Minimal preperiod and period, found by cycle detection on the state
/// tuples from index `N` (Brent), then shrinking to the scalar sequence.
pub fn mod_profile_capped(sys: &NumerationSystem, m: u64, cap: usize) -> Result<ModProfile> {
    if m == 0 {
        return Err(CoreError::InvalidSystem("modulus must be positive".into()));
    }
    let n0 = sys.offset();
    let k = sys.order();
    let stepper = TupleStepper::new(sys, m);
    let start: Vec<u64> = sys.initial()[n0..n0 + k].iter().map(|u| reduce(u, m)).collect();
    // Brent: cycle length λ
    let mut power = 1usize;
    let mut lam = 1usize;
    let mut tortoise = start.clone();
    let mut hare = start.clone();
    stepper.step(&mut hare);
    let mut steps = 0usize;
    while tortoise != hare {
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        stepper.step(&mut hare);
        lam += 1;
        steps += 1;
        if steps > cap {
            return Err(CoreError::Cap(format!("no repeated tuple modulo {m} within {cap} steps")));
        }
    }
    // tail length μ
    let mut tortoise = start.clone();
    let mut hare = start;
    for _ in 0..lam {
        stepper.step(&mut hare);
    }
    let mut mu = 0usize;
    while tortoise != hare {
        stepper.step(&mut tortoise);
        stepper.step(&mut hare);
        mu += 1;
    }
    let s = residues(sys, m, n0 + mu + 2 * lam + 1);
    let base = n0 + mu;
    let period = (1..=lam)
        .filter(|d| lam % d == 0)
        .find(|&d| (base..base + lam).all(|t| s[t] == s[t + d]))
        .expect("λ itself is a period");
    let mut pre = base;
    while pre > 0 && s[pre - 1] == s[pre - 1 + period] {
        pre -= 1;
    }
    Ok(ModProfile {
        modulus: m,
        preperiod: pre,
        period,
        values: s[..pre + period].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numsys::builtin;

    #[test]
    fn profile_matches_direct_residues() {
        let sys = builtin("jason").unwrap();
        for m in 1..40u64 {
            let p = mod_profile(&sys, m).unwrap();
            let direct = residues(&sys, m, p.preperiod + 3 * p.period + 5);
            for (i, v) in direct.iter().enumerate() {
                assert_eq!(p.residue(i), *v);
            }
        }
    }
}
