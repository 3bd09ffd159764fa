//! Univariate polynomials over `Q` with Sturm sequences, and real
//! algebraic numbers given by an isolating interval.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::Interval;

/// Coefficients constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<BigRational>);

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Poly::new(c.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        self.eval(x).cmp(&BigRational::zero())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                    let b = other.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    /// `x^k · self`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); k];
        c.extend(self.0.iter().cloned());
        Poly(c)
    }

    /// Euclidean division.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().expect("nonzero");
        let mut r = self.0.clone();
        let mut q = vec![BigRational::zero(); r.len().saturating_sub(dd)];
        let lead = d.lead().clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = &r[top] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[top - dd + j] -= &c * dc;
                }
                q[top - dd] = c;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead().clone();
        Poly::new(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Sturm sequence `p, p', -rem(p, p'), …`.
    pub fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().expect("nonempty").is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq.retain(|p| !p.is_zero());
        seq
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> BigRational {
        let l = self.lead().abs();
        let m = self.0.iter().map(|c| c.abs() / &l).max().unwrap_or_else(BigRational::one);
        m + BigRational::one()
    }
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of `seq[0]` in `(a, b]`.
pub fn count_roots(seq: &[Poly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

/// A real root of a squarefree polynomial, isolated in `(lo, hi]`, or
/// known exactly when `lo == hi`.
#[derive(Clone, Debug)]
pub struct RealRoot {
    poly: Poly,
    sturm: Vec<Poly>,
    lo: BigRational,
    hi: BigRational,
}

impl RealRoot {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn bounds(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Halves the isolating interval (or pins the root when the midpoint
    /// is a root).
    pub fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let mid = (&self.lo + &self.hi) / rat(2);
        if self.poly.eval(&mid).is_zero() {
            // the only root in (lo, hi] is mid itself
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        if count_roots(&self.sturm, &self.lo, &mid) == 1 {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    /// Refines until the width is below `2^-bits`.
    pub fn refine(&mut self, bits: u32) {
        let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
        while !self.is_exact() && self.width() > eps {
            self.bisect();
        }
    }

    /// Outward-rounded enclosure.
    pub fn interval(&self) -> Interval {
        Interval::from_rationals(&self.lo, &self.hi)
    }

    pub fn approx(&self) -> f64 {
        ((&self.lo + &self.hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }

    /// True iff `f(self) = 0`, decided exactly: the root must also be a
    /// root of `gcd(f, poly)`, which is tested inside the isolating
    /// interval.
    pub fn is_root_of(&self, f: &Poly) -> bool {
        if f.is_zero() {
            return true;
        }
        if self.is_exact() {
            return f.eval(&self.lo).is_zero();
        }
        let g = f.gcd(&self.poly);
        if g.degree() == Some(0) {
            return false;
        }
        count_roots(&g.sturm(), &self.lo, &self.hi) == 1
    }

    /// Sign of `f(self)`, refining as needed.
    pub fn sign_of(&mut self, f: &Poly) -> Ordering {
        if self.is_root_of(f) {
            return Ordering::Equal;
        }
        loop {
            if self.is_exact() {
                return f.sign_at(&self.lo);
            }
            let bracket = eval_rational_interval(f, &self.lo, &self.hi);
            if bracket.0 > BigRational::zero() {
                return Ordering::Greater;
            }
            if bracket.1 < BigRational::zero() {
                return Ordering::Less;
            }
            self.bisect();
        }
    }
}

/// Real roots of `p` (any polynomial) in increasing order, each isolated.
pub fn real_roots(p: &Poly) -> Vec<RealRoot> {
    let sf = p.squarefree();
    if sf.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = sf.sturm();
    let b = sf.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match count_roots(&sturm, &lo, &hi) {
            0 => {}
            1 => out.push(RealRoot {
                poly: sf.clone(),
                sturm: sturm.clone(),
                lo,
                hi,
            }),
            _ => {
                let mid = (&lo + &hi) / rat(2);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    for r in &mut out {
        if r.poly.eval(&r.hi).is_zero() {
            r.lo = r.hi.clone();
        }
    }
    out.sort_by(|a, b| a.hi.cmp(&b.hi));
    out
}

/// Enclosure of `f` over `[lo, hi]` by interval Horner evaluation.
pub fn eval_rational_interval(f: &Poly, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in f.coeffs().iter().rev() {
        let cands = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mn = cands.iter().min().expect("nonempty").clone();
        let mx = cands.iter().max().expect("nonempty").clone();
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_toy_polynomial() {
        let p = Poly::from_i64(&[-12, -6, -12, 1]);
        let roots = real_roots(&p);
        assert_eq!(roots.len(), 1);
        let mut r = roots[0].clone();
        r.refine(60);
        assert!((r.approx() - 12.554).abs() < 1e-3);
    }

    #[test]
    fn exact_and_repeated_roots() {
        // (x - 2)^2 (x + 1)
        let p = Poly::from_i64(&[4, 0, -3, 1]);
        let roots = real_roots(&p);
        assert_eq!(roots.len(), 2);
        let mut two = roots[1].clone();
        two.refine(40);
        assert!(two.is_root_of(&Poly::from_i64(&[-2, 1])));
        assert!(!two.is_root_of(&Poly::from_i64(&[-3, 1])));
    }
}
