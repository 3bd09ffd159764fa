use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::num::{pow_p, PadicNum};

/// Valuation of a residue: exact when below the precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Exact(u64),
    AtLeast(u64),
}

impl Valuation {
    pub fn exact(self) -> Option<u64> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// `p`-adic valuation of a residue modulo `p^prec`.
pub fn valuation_of(p: u32, residue: &BigUint, prec: u64) -> Valuation {
    if residue.is_zero() {
        return Valuation::AtLeast(prec);
    }
    if p == 2 {
        let v = residue.trailing_zeros().unwrap_or(0);
        return if v < prec { Valuation::Exact(v) } else { Valuation::AtLeast(prec) };
    }
    let pb = BigUint::from(p);
    let mut v = 0;
    let mut m = residue.clone();
    while v < prec {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Valuation::Exact(v);
        }
        m = q;
        v += 1;
    }
    Valuation::AtLeast(prec)
}

/// An element of `Z_p` modulo `p^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicInt {
    p: u32,
    prec: u64,
    residue: BigUint,
}

impl PadicInt {
    pub fn new(p: u32, n: &BigInt, prec: u64) -> Self {
        let r = n.mod_floor(&pow_p(p, prec));
        PadicInt {
            p,
            prec,
            residue: r.to_biguint().expect("nonnegative after mod_floor"),
        }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> u64 {
        self.prec
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn valuation(&self) -> Valuation {
        valuation_of(self.p, &self.residue, self.prec)
    }

    fn lift(&self) -> BigInt {
        BigInt::from(self.residue.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        PadicInt::new(self.p, &(self.lift() + other.lift()), prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        PadicInt::new(self.p, &(self.lift() - other.lift()), prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        PadicInt::new(self.p, &(self.lift() * other.lift()), prec)
    }

    pub fn to_num(&self) -> PadicNum {
        PadicNum::from_int(self.p, self.lift(), self.prec as i64)
    }

    /// Base-`p` digits, least significant first, `prec` of them.
    pub fn digits(&self) -> Vec<u32> {
        let pb = BigUint::from(self.p);
        let mut x = self.residue.clone();
        (0..self.prec)
            .map(|_| {
                let (q, r) = x.div_rem(&pb);
                x = q;
                r.try_into().expect("digit fits in u32")
            })
            .collect()
    }
}
