use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::PadicError;

/// `p^k` as a big integer.
pub fn pow_p(p: u32, k: u64) -> BigInt {
    BigInt::from(p).pow(k as u32)
}

/// Splits `n ≠ 0` into `(v_p(n), n / p^v)`.
pub fn split_p(p: u32, n: &BigInt) -> (u64, BigInt) {
    debug_assert!(!n.is_zero());
    if p == 2 {
        let v = n.trailing_zeros().unwrap_or(0);
        return (v, n >> v);
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

/// An element of `Q_p` known modulo `p^prec`: `unit · p^val + O(p^prec)`.
///
/// A value indistinguishable from zero is stored with `unit = 0` and
/// `val = prec`. Precision is absolute and propagates through every
/// operation, so the result of a computation states how many digits are
/// actually certified.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNum {
    p: u32,
    unit: BigInt,
    val: i64,
    prec: i64,
}

impl PadicNum {
    /// `n · p^shift + O(p^prec)`.
    pub fn new(p: u32, n: BigInt, shift: i64, prec: i64) -> Self {
        if n.is_zero() || shift >= prec {
            return PadicNum::zero(p, prec);
        }
        let (v, m) = split_p(p, &n);
        let val = shift + v as i64;
        if val >= prec {
            return PadicNum::zero(p, prec);
        }
        let modulus = pow_p(p, (prec - val) as u64);
        PadicNum {
            p,
            unit: m.mod_floor(&modulus),
            val,
            prec,
        }
    }

    pub fn zero(p: u32, prec: i64) -> Self {
        PadicNum {
            p,
            unit: BigInt::zero(),
            val: prec,
            prec,
        }
    }

    pub fn from_int(p: u32, n: impl Into<BigInt>, prec: i64) -> Self {
        PadicNum::new(p, n.into(), 0, prec)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Absolute precision: the value is known modulo `p^precision()`.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Valuation; equals the precision when the value is indistinguishable
    /// from zero.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// The `p`-adic unit part, reduced modulo `p^(prec - val)`.
    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// Representative `0 ≤ r < p^k` of an integral element, if the
    /// element is integral and known to at least `k` digits.
    pub fn residue(&self, k: u64) -> Option<BigUint> {
        if self.val < 0 || self.prec < k as i64 {
            return None;
        }
        if self.is_zero() || self.val >= k as i64 {
            return Some(BigUint::zero());
        }
        let n = (&self.unit * pow_p(self.p, self.val as u64)).mod_floor(&pow_p(self.p, k));
        n.to_biguint()
    }

    /// Lowers the precision to at most `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        PadicNum::new(self.p, self.unit.clone(), self.val, prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let prec = self.prec.min(other.prec);
        let base = self.val.min(other.val);
        let lift = |x: &PadicNum| {
            if x.is_zero() || x.val >= prec {
                BigInt::zero()
            } else {
                &x.unit * pow_p(x.p, (x.val - base) as u64)
            }
        };
        PadicNum::new(self.p, lift(self) + lift(other), base, prec)
    }

    pub fn neg(&self) -> Self {
        PadicNum::new(self.p, -&self.unit, self.val, self.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let prec = (self.val + other.prec).min(other.val + self.prec);
        PadicNum::new(self.p, &self.unit * &other.unit, self.val + other.val, prec)
    }

    /// Multiplication by an exact integer.
    pub fn scale(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return PadicNum::zero(self.p, i64::MAX / 4);
        }
        let (v, _) = split_p(self.p, n);
        PadicNum::new(
            self.p,
            &self.unit * n,
            self.val,
            self.prec + v as i64,
        )
    }

    /// Division by an exact nonzero integer; loses `v_p(n)` digits.
    pub fn div_int(&self, n: &BigInt) -> Self {
        assert!(!n.is_zero(), "division by zero");
        let (v, m) = split_p(self.p, n);
        let v = v as i64;
        if self.is_zero() {
            return PadicNum::zero(self.p, self.prec - v);
        }
        let r = (self.prec - self.val) as u64;
        let modulus = pow_p(self.p, r);
        let inv = modinv(&m, &modulus);
        PadicNum::new(self.p, &self.unit * inv, self.val - v, self.prec - v)
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let r = self.prec - self.val;
        let modulus = pow_p(self.p, r as u64);
        let inv = modinv(&self.unit, &modulus);
        Ok(PadicNum::new(self.p, inv, -self.val, -self.val + r))
    }

    pub fn div(&self, other: &Self) -> Result<Self, PadicError> {
        Ok(self.mul(&other.inv()?))
    }

    /// `self^k` for `k ≥ 1`.
    pub fn pow(&self, mut k: u64) -> Self {
        assert!(k >= 1, "pow: exponent must be positive");
        let mut base = self.clone();
        let mut acc: Option<PadicNum> = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base),
                    None => base.clone(),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc.expect("k >= 1")
    }
}

/// Inverse of `a` modulo `m`; `a` must be coprime to `m`.
pub fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "modinv: not invertible");
    e.x.mod_floor(m)
}

impl fmt::Debug for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O({}^{})", self.p, self.prec)
        } else {
            let sign = if self.unit.sign() == Sign::Minus { "-" } else { "" };
            write!(
                f,
                "{sign}{}*{}^{} + O({}^{})",
                self.unit.abs(),
                self.p,
                self.val,
                self.p,
                self.prec
            )
        }
    }
}
