//! Empirical checks of the gap hypotheses and the constants `G`, `R`, `Z`.

use num_bigint::BigUint;

use crate::error::{CoreError, Result};
use crate::numsys::NumerationSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GSource {
    User,
    Horizon,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub horizon: usize,
    /// Last index `< horizon` at which the gap sequence reached a new
    /// maximum (evidence for unbounded gaps).
    pub h2_verified_to: usize,
    /// `None` when no stable `G` was found within the horizon.
    pub g: Option<usize>,
    pub g_source: GSource,
    pub r: Option<usize>,
    pub c: Option<usize>,
    pub z: Option<usize>,
}

impl HypothesisReport {
    pub fn h3_verified(&self) -> bool {
        self.g.is_some()
    }

    /// `G`, or an error when the gaps never settled.
    pub fn require_g(&self) -> Result<usize> {
        self.g.ok_or(CoreError::H3ViolatedBeyondCandidate {
            horizon: self.horizon,
        })
    }

    pub fn with_c(mut self, c: usize) -> Self {
        self.c = Some(c);
        self.z = self.r.map(|r| r.max(c));
        self
    }
}

/// `U_{i+1} - U_i` for `i < horizon`.
pub fn gaps(sys: &NumerationSystem, horizon: usize) -> Result<Vec<BigUint>> {
    let t = sys.extend_sequence(horizon)?;
    Ok(t.windows(2).map(|w| &w[1] - &w[0]).collect())
}

/// Checks the gap hypotheses up to `horizon`. `G` is the least index from
/// which gaps are non-decreasing through the horizon; it counts as
/// verified only if it lies in the first half of the window. A user `G`
/// is checked the same way and rejected if contradicted.
pub fn check_hypotheses(sys: &NumerationSystem, horizon: usize, c: Option<usize>) -> Result<HypothesisReport> {
    let horizon = horizon.max(sys.span() + 2);
    let g = gaps(sys, horizon)?;
    let n = g.len();
    let mut record = 0;
    for i in 1..n {
        if g[i] > g[record] {
            record = i;
        }
    }
    // least start of the final non-decreasing run
    let mut start = n - 1;
    while start > 0 && g[start - 1] <= g[start] {
        start -= 1;
    }
    let (gval, source) = match sys.user_g() {
        Some(user) => {
            if user < start {
                return Err(CoreError::H3ViolatedBeyondCandidate { horizon });
            }
            (Some(user), GSource::User)
        }
        None => ((start <= horizon / 2).then_some(start), GSource::Horizon),
    };
    let r = gval.and_then(|gv| {
        let mut best = BigUint::default();
        for (i, gap) in g.iter().enumerate() {
            if i >= gv && *gap >= best {
                return Some(i);
            }
            if *gap > best {
                best = gap.clone();
            }
        }
        None
    });
    let report = HypothesisReport {
        horizon,
        h2_verified_to: record,
        g: gval,
        g_source: source,
        r,
        c: None,
        z: None,
    };
    Ok(match c {
        Some(c) => report.with_c(c),
        None => report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numsys::builtin;

    #[test]
    fn r_dominates_earlier_gaps() {
        // noth2-like oscillation with a user G would be rejected
        let sys = builtin("noth2").unwrap().with_g(0);
        assert!(check_hypotheses(&sys, 30, None).is_err());
        let rep = check_hypotheses(&builtin("fib").unwrap(), 30, Some(3)).unwrap();
        assert_eq!(rep.g, Some(0));
        assert_eq!(rep.r, Some(0));
        assert_eq!(rep.z, Some(3));
    }
}
