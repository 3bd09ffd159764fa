//! The 2-adic integer `ζ` attracting the indices where `ν_2(U_i) - i/2` is
//! large, for `U_{i+3} = 12 U_{i+2} + 6 U_{i+1} + 12 U_i`, `U = 1, 13, 163, …`.
//!
//! With `β_1 ∈ Z_2` the root `≡ 2 (mod 4)` of `x^3 - 12x^2 - 6x - 12` and
//! `β_2, β_3` the roots of the quadratic cofactor `x^2 + Bx + C`
//! (`B = β_1 - 12`, `C = β_1^2 - 12 β_1 - 6`, an Eisenstein polynomial), the
//! sequence is `c_1 β_1^i + c_2 β_2^i + c_3 β_3^i` and
//! `ζ = 1 + 4 log(-c_2 β_2 / (c_3 β_3)) / log((β_3/β_2)^4)`.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};

use crate::error::PadicError;
use crate::ext::{ExtElem, ExtField};
use crate::hensel::hensel_root;
use crate::int::{PadicInt, Valuation};

/// Which root of the quadratic factor is called `β_2`. The generator `t`
/// of the extension has the smaller second coordinate, so it is the
/// default; the other choice must give the same `ζ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Labeling {
    Generator,
    Conjugate,
}

/// Valuations met along the way (numerators over 2) and the precision
/// bookkeeping behind the final digit count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaBudget {
    pub working_digits: i64,
    pub c_valuations: [i64; 3],
    pub ratio4_minus_one: i64,
    pub log_ratio4: i64,
    pub target_minus_one: i64,
    pub certified_digits: i64,
    pub residual_f1: i64,
}

#[derive(Clone, Debug)]
pub struct ZetaValue {
    value: PadicInt,
    budget: ZetaBudget,
}

impl ZetaValue {
    pub fn precision(&self) -> u64 {
        self.value.precision()
    }

    pub fn residue(&self) -> &BigUint {
        self.value.residue()
    }

    pub fn as_padic(&self) -> &PadicInt {
        &self.value
    }

    pub fn budget(&self) -> &ZetaBudget {
        &self.budget
    }

    /// Binary digits, least significant first.
    pub fn digits(&self) -> Vec<u32> {
        self.value.digits()
    }

    /// Binary expansion written most significant digit first.
    pub fn binary(&self) -> String {
        self.digits()
            .iter()
            .rev()
            .map(|d| char::from(b'0' + *d as u8))
            .collect()
    }
}

fn vnum(x: &ExtElem) -> i64 {
    x.valuation_num().0
}

fn attempt(precision: u64, guard: i64, labeling: Labeling) -> Result<ZetaValue, PadicError> {
    let w = precision as i64 + guard;
    let coeffs: Vec<BigInt> = [-12, -6, -12, 1].iter().map(|&c| BigInt::from(c)).collect();
    let beta1 = hensel_root(&coeffs, 2, &BigInt::from(2), w as u64)?.to_num();
    let twelve = crate::num::PadicNum::from_int(2, 12, w);
    let six = crate::num::PadicNum::from_int(2, 6, w);
    let b = beta1.sub(&twelve);
    let c = beta1.mul(&beta1).sub(&twelve.mul(&beta1)).sub(&six);
    let field: Arc<ExtField> = ExtField::new(2, vec![c, b.clone()])?;
    let int = |n: i64| ExtElem::from_int(&field, n, w);
    let t = ExtElem::generator(&field, w);
    let other = ExtElem::from_base(&field, b.neg()).sub(&t);
    let b1 = ExtElem::from_base(&field, beta1);
    let (b2, b3) = match labeling {
        Labeling::Generator => (t, other),
        Labeling::Conjugate => (other, t),
    };
    let (u0, u1, u2) = (int(1), int(13), int(163));
    // U_i = Σ c_j β_j^i solved from U_0, U_1, U_2
    let coef = |x: &ExtElem, y: &ExtElem, z: &ExtElem| -> Result<ExtElem, PadicError> {
        // coefficient of β_x, the other roots being y and z
        let num = u0.mul(y).mul(z).neg().add(&u1.mul(&y.add(z))).sub(&u2);
        let den = y.sub(x).mul(&x.sub(z));
        num.div(&den)
    };
    let c1 = coef(&b1, &b2, &b3)?;
    let c2 = coef(&b2, &b3, &b1)?;
    let c3 = coef(&b3, &b1, &b2)?;
    let ratio4 = b3.div(&b2)?.pow(4);
    let l = ratio4.log()?;
    let target = c2.mul(&b2).div(&c3.mul(&b3))?.neg();
    let x = target.log()?;
    let z = int(1).add(&x.div(&l)?.mul(&int(4)));
    let budget_base = |certified: i64, residual: i64| ZetaBudget {
        working_digits: w,
        c_valuations: [vnum(&c1), vnum(&c2), vnum(&c3)],
        ratio4_minus_one: vnum(&ratio4.sub(&int(1))),
        log_ratio4: vnum(&l),
        target_minus_one: vnum(&target.sub(&int(1))),
        certified_digits: certified,
        residual_f1: residual,
    };
    let zeta = z.coords()[0].clone();
    let certified = zeta.precision();
    if certified < precision as i64 {
        return Err(PadicError::PrecisionLoss {
            needed: precision as i64,
            achieved: certified,
            budget: format!("{:?}", budget_base(certified, 0)),
        });
    }
    if !z.coords()[1].is_zero() {
        return Err(PadicError::Invalid(format!(
            "ζ has a nonzero second coordinate {:?}",
            z.coords()[1]
        )));
    }
    // f_1(ζ) = c_2 + c_3 (β_3/β_2) exp(L (ζ - 1)/4) should vanish
    let xz = ExtElem::from_base(&field, zeta.sub(&crate::num::PadicNum::from_int(2, 1, w)))
        .div_int(&BigInt::from(4));
    let f1 = c2.add(&c3.mul(&b3.div(&b2)?).mul(&l.mul(&xz).exp()?));
    let residual = vnum(&f1);
    let residue = zeta
        .residue(precision)
        .ok_or_else(|| PadicError::Invalid("ζ is not integral".into()))?;
    Ok(ZetaValue {
        value: PadicInt::new(2, &BigInt::from(residue), precision),
        budget: budget_base(certified, residual),
    })
}

/// `ζ mod 2^precision`, retrying with more guard digits when the tracked
/// precision falls short.
pub fn zeta_toy(precision: u64) -> Result<ZetaValue, PadicError> {
    zeta_toy_labeled(precision, Labeling::Generator)
}

pub fn zeta_toy_labeled(precision: u64, labeling: Labeling) -> Result<ZetaValue, PadicError> {
    if precision < 8 {
        return Err(PadicError::Invalid("precision must be at least 8".into()));
    }
    let mut guard = 32;
    let mut last = None;
    for _ in 0..4 {
        match attempt(precision, guard, labeling) {
            Ok(z) => return Ok(z),
            Err(e @ PadicError::PrecisionLoss { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
        guard *= 2;
    }
    Err(last.expect("at least one attempt"))
}

/// `ν_2(U_i)` as predicted from `ζ` for `i ≥ 10`:
/// `⌊(i-1)/2⌋`, plus `ν_2(i - ζ)` when `i ≡ 1 (mod 4)`. The second term is
/// only a lower bound when it reaches the precision of `ζ`.
pub fn nu2_closed_form(i: u64, zeta: &PadicInt) -> Valuation {
    let base = (i - 1) / 2;
    if i % 4 != 1 {
        return Valuation::Exact(base);
    }
    let diff = PadicInt::new(2, &BigInt::from(i), zeta.precision()).sub(zeta);
    match diff.valuation() {
        Valuation::Exact(v) => Valuation::Exact(base + v),
        Valuation::AtLeast(v) => Valuation::AtLeast(base + v),
    }
}

/// `ℓ(a)` for every `a < precision`: the length of the run of zero digits
/// starting at `a`, or `None` when the run reaches the last known digit.
pub fn block_lengths(x: &PadicInt) -> Vec<Option<u32>> {
    let d = x.digits();
    let n = d.len();
    let mut out = vec![None; n];
    let mut run: Option<u32> = None;
    for a in (0..n).rev() {
        run = if d[a] != 0 {
            Some(0)
        } else {
            run.map(|r| r + 1)
        };
        out[a] = run;
    }
    out
}

/// Longest run of zero digits lying entirely in the first `n` digits.
pub fn longest_zero_block(x: &PadicInt, n: usize) -> u32 {
    let d = x.digits();
    let mut best = 0;
    let mut cur = 0;
    for &digit in d.iter().take(n) {
        cur = if digit == 0 { cur + 1 } else { 0 };
        best = best.max(cur);
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockReport {
    pub checked: usize,
    pub violations: Vec<(usize, u32)>,
    pub undetermined: Vec<usize>,
}

/// Tests `ℓ(a) ≤ (2/95) a + 18/5`, i.e. `95 ℓ(a) ≤ 2a + 342`, for `a < limit`.
pub fn check_block_conjecture(x: &PadicInt, limit: usize) -> BlockReport {
    let table = block_lengths(x);
    let mut report = BlockReport {
        checked: 0,
        violations: Vec::new(),
        undetermined: Vec::new(),
    };
    for (a, l) in table.iter().enumerate().take(limit) {
        match l {
            Some(l) => {
                report.checked += 1;
                if 95 * *l as usize > 2 * a + 342 {
                    report.violations.push((a, *l));
                }
            }
            None => report.undetermined.push(a),
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogBoundReport {
    /// `ℓ(a) ≤ C a + D` for all determined `2 ≤ a < precision`.
    pub block_condition: bool,
    /// `ν_p(n - x) ≤ (2C + D + 2) log(n) / log(p)` for all checked `n`.
    pub bound_holds: bool,
    pub violations: Vec<(u64, u64)>,
    /// Values of `n` agreeing with `x` to full precision.
    pub unresolved: Vec<u64>,
}

/// Checks the logarithmic bound on `ν_p(n - x)` for `p ≤ n ≤ n_max`.
pub fn log_upper_bound_check(x: &PadicInt, c: f64, d: f64, n_max: u64) -> LogBoundReport {
    assert!(c > 0.0 && d >= -(c + 1.0), "need C > 0 and D >= -(C + 1)");
    let p = x.prime();
    let block_condition = block_lengths(x)
        .iter()
        .enumerate()
        .skip(2)
        .all(|(a, l)| l.map_or(true, |l| l as f64 <= c * a as f64 + d));
    let slope = (2.0 * c + d + 2.0) / (p as f64).ln();
    let mut report = LogBoundReport {
        block_condition,
        bound_holds: true,
        violations: Vec::new(),
        unresolved: Vec::new(),
    };
    for n in p as u64..=n_max {
        let diff = PadicInt::new(p, &BigInt::from(n), x.precision()).sub(x);
        match diff.valuation() {
            Valuation::Exact(v) => {
                // small slack for rounding in the real bound
                if v as f64 > slope * (n as f64).ln() + 1e-9 {
                    report.bound_holds = false;
                    report.violations.push((n, v));
                }
            }
            Valuation::AtLeast(_) => report.unresolved.push(n),
        }
    }
    report
}

/// `n mod 2^k` as a 2-adic integer, for building test inputs.
pub fn two_adic(n: &BigUint, k: u64) -> PadicInt {
    PadicInt::new(2, &BigInt::from(n.clone()), k)
}
