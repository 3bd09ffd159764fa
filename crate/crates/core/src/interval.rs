//! Closed `f64` intervals with outward rounding. Every operation widens
//! its result by one ulp on each side (two for `ln`, whose libm error is
//! below one ulp), so the true real value always lies inside.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

/// Largest `f64` not above `q`.
pub fn rational_floor_f64(q: &BigRational) -> f64 {
    let mut f = q.to_f64().unwrap_or(f64::NEG_INFINITY);
    while f.is_finite() && BigRational::from_f64(f).is_some_and(|r| &r > q) {
        f = down(f);
    }
    f
}

/// Smallest `f64` not below `q`.
pub fn rational_ceil_f64(q: &BigRational) -> f64 {
    let mut f = q.to_f64().unwrap_or(f64::INFINITY);
    while f.is_finite() && BigRational::from_f64(f).is_some_and(|r| &r < q) {
        f = up(f);
    }
    f
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn from_rationals(lo: &BigRational, hi: &BigRational) -> Self {
        Interval::new(rational_floor_f64(lo), rational_ceil_f64(hi))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Interval::from_rationals(q, q)
    }

    pub fn from_int(n: i64) -> Self {
        Interval::from_rational(&BigRational::from_integer(n.into()))
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(down(self.lo + o.lo), up(self.hi + o.hi))
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(down(self.lo - o.hi), up(self.hi - o.lo))
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }

    /// Division; the divisor must not contain zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by an interval containing 0");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }

    pub fn recip(&self) -> Interval {
        Interval::point(1.0).div(self)
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0.0, "logarithm of a non-positive interval");
        Interval::new(down(down(self.lo.ln())), up(up(self.hi.ln())))
    }

    /// `log_base(self)`.
    pub fn log(&self, base: &Interval) -> Interval {
        self.ln().div(&base.ln())
    }

    pub fn powi(&self, n: u32) -> Interval {
        (0..n).fold(Interval::point(1.0), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, k: f64) -> Interval {
        self.mul(&Interval::point(k))
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `Some(ordering)` when the comparison is decided for every pair of
    /// points, `None` when the intervals overlap.
    pub fn certified_cmp(&self, o: &Interval) -> Option<Ordering> {
        if self.lo > o.hi {
            Some(Ordering::Greater)
        } else if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo == self.hi && o.lo == o.hi && self.lo == o.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Smallest integer certainly `≥` every point.
    pub fn ceil_upper(&self) -> i64 {
        self.hi.ceil() as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn encloses_thirds() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let i = Interval::from_rational(&third);
        assert!(i.lo < i.hi);
        let sum = i.add(&i).add(&i);
        assert!(sum.contains(1.0));
        let l = Interval::from_int(8).log(&Interval::from_int(2));
        assert!(l.contains(3.0));
    }
}
