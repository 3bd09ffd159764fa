//! Totally ramified extensions `Q_p[t] / (t^e + m_{e-1} t^{e-1} + … + m_0)`
//! given by an Eisenstein polynomial, so that `t` is a uniformizer of
//! valuation `1/e`.
//!
//! Elements are stored in the power basis `1, t, …, t^{e-1}` with
//! [`PadicNum`] coordinates. Because the terms `e·v(a_j) + j` are pairwise
//! distinct modulo `e`, the valuation of `Σ a_j t^j` is exactly their
//! minimum, which is why valuations are kept as integer numerators over
//! the ramification index.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::PadicError;
use crate::num::PadicNum;

#[derive(Debug, PartialEq, Eq)]
pub struct ExtField {
    p: u32,
    /// `m_0, …, m_{e-1}` of the monic modulus.
    modulus: Vec<PadicNum>,
}

impl ExtField {
    /// Field defined by the monic polynomial with lower coefficients
    /// `modulus` (constant term first). The polynomial must be Eisenstein.
    pub fn new(p: u32, modulus: Vec<PadicNum>) -> Result<Arc<Self>, PadicError> {
        let eisenstein = !modulus.is_empty()
            && modulus.iter().all(|m| m.valuation() >= 1 && m.prime() == p)
            && modulus[0].valuation() == 1;
        if !eisenstein {
            return Err(PadicError::NotEisenstein { p });
        }
        Ok(Arc::new(ExtField { p, modulus }))
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Ramification index (the degree).
    pub fn degree(&self) -> usize {
        self.modulus.len()
    }

    pub fn modulus(&self) -> &[PadicNum] {
        &self.modulus
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElem {
    field: Arc<ExtField>,
    coords: Vec<PadicNum>,
}

/// Digits needed in each coordinate so that the element is known modulo
/// `t^num`.
fn coord_prec(num: i64, j: usize, e: usize) -> i64 {
    (num - j as i64).div_euclid(e as i64) + ((num - j as i64).rem_euclid(e as i64) != 0) as i64
}

impl ExtElem {
    pub fn from_coords(field: &Arc<ExtField>, coords: Vec<PadicNum>) -> Self {
        assert_eq!(coords.len(), field.degree(), "coordinate count");
        ExtElem {
            field: field.clone(),
            coords,
        }
    }

    pub fn from_base(field: &Arc<ExtField>, x: PadicNum) -> Self {
        let e = field.degree();
        let prec = x.precision();
        let mut coords = vec![PadicNum::zero(field.p, prec); e];
        coords[0] = x;
        ExtElem::from_coords(field, coords)
    }

    pub fn from_int(field: &Arc<ExtField>, n: impl Into<BigInt>, prec: i64) -> Self {
        ExtElem::from_base(field, PadicNum::from_int(field.p, n, prec))
    }

    /// The generator `t`, known to `prec` digits per coordinate.
    pub fn generator(field: &Arc<ExtField>, prec: i64) -> Self {
        let e = field.degree();
        if e == 1 {
            return ExtElem::from_base(field, field.modulus[0].neg().truncate(prec));
        }
        let mut coords = vec![PadicNum::zero(field.p, prec); e];
        coords[1] = PadicNum::from_int(field.p, 1, prec);
        ExtElem::from_coords(field, coords)
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn coords(&self) -> &[PadicNum] {
        &self.coords
    }

    fn e(&self) -> usize {
        self.field.degree()
    }

    /// The element is known modulo `t^precision_num()`.
    pub fn precision_num(&self) -> i64 {
        let e = self.e() as i64;
        self.coords
            .iter()
            .enumerate()
            .map(|(j, c)| e * c.precision() + j as i64)
            .min()
            .unwrap()
    }

    /// Valuation numerator over `e`, and whether it is exact (otherwise the
    /// element is zero to the available precision and the value is a lower
    /// bound).
    pub fn valuation_num(&self) -> (i64, bool) {
        let e = self.e() as i64;
        let prec = self.precision_num();
        let v = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| e * c.valuation() + j as i64)
            .min();
        match v {
            Some(v) if v < prec => (v, true),
            _ => (prec, false),
        }
    }

    pub fn is_zero(&self) -> bool {
        !self.valuation_num().1
    }

    /// Forgets everything beyond `t^num`.
    pub fn cap_precision(&self, num: i64) -> Self {
        let e = self.e();
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(j, c)| c.truncate(coord_prec(num, j, e)))
            .collect();
        ExtElem::from_coords(&self.field, coords)
    }

    pub fn add(&self, other: &Self) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.add(b))
            .collect();
        ExtElem::from_coords(&self.field, coords)
    }

    pub fn neg(&self) -> Self {
        let coords = self.coords.iter().map(PadicNum::neg).collect();
        ExtElem::from_coords(&self.field, coords)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let e = self.e();
        let p = self.field.p;
        let mut prod: Vec<Option<PadicNum>> = vec![None; 2 * e - 1];
        for (i, a) in self.coords.iter().enumerate() {
            for (j, b) in other.coords.iter().enumerate() {
                let t = a.mul(b);
                prod[i + j] = Some(match prod[i + j].take() {
                    Some(s) => s.add(&t),
                    None => t,
                });
            }
        }
        let mut prod: Vec<PadicNum> = prod.into_iter().map(|x| x.unwrap()).collect();
        // t^e = -(m_{e-1} t^{e-1} + … + m_0)
        for k in (e..2 * e - 1).rev() {
            let c = prod[k].clone();
            for (j, m) in self.field.modulus.iter().enumerate() {
                prod[k - e + j] = prod[k - e + j].sub(&c.mul(m));
            }
        }
        prod.truncate(e);
        debug_assert!(prod.iter().all(|c| c.prime() == p));
        ExtElem::from_coords(&self.field, prod)
    }

    pub fn scale(&self, x: &PadicNum) -> Self {
        let coords = self.coords.iter().map(|c| c.mul(x)).collect();
        ExtElem::from_coords(&self.field, coords)
    }

    pub fn div_int(&self, n: &BigInt) -> Self {
        let coords = self.coords.iter().map(|c| c.div_int(n)).collect();
        ExtElem::from_coords(&self.field, coords)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        assert!(k >= 1, "pow: exponent must be positive");
        let mut base = self.clone();
        let mut acc: Option<ExtElem> = None;
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

    /// Matrix of multiplication by `self`: column `j` holds `self · t^j`.
    fn mul_matrix(&self) -> Vec<Vec<PadicNum>> {
        let e = self.e();
        let prec = self.coords.iter().map(PadicNum::precision).max().unwrap();
        let t = ExtElem::generator(&self.field, prec + 2);
        let mut cols = Vec::with_capacity(e);
        let mut cur = self.clone();
        for j in 0..e {
            if j > 0 {
                cur = cur.mul(&t);
            }
            cols.push(cur.coords.clone());
        }
        (0..e)
            .map(|i| (0..e).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    /// Inverse through the adjugate of the multiplication matrix.
    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let e = self.e();
        if e == 2 {
            // a0 + a1 t has conjugate (a0 - m1 a1) - a1 t and norm
            // a0^2 - m1 a0 a1 + m0 a1^2
            let (a0, a1) = (&self.coords[0], &self.coords[1]);
            let (m0, m1) = (&self.field.modulus[0], &self.field.modulus[1]);
            let norm = a0.mul(a0).sub(&m1.mul(a0).mul(a1)).add(&m0.mul(a1).mul(a1));
            let ninv = norm.inv()?;
            let c0 = a0.sub(&m1.mul(a1)).mul(&ninv);
            let c1 = a1.neg().mul(&ninv);
            return Ok(ExtElem::from_coords(&self.field, vec![c0, c1]));
        }
        let m = self.mul_matrix();
        let det = determinant(&m);
        let dinv = det.inv()?;
        let coords = (0..e)
            .map(|i| {
                let minor: Vec<Vec<PadicNum>> = (1..e)
                    .map(|r| (0..e).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                    .collect();
                let cof = if minor.is_empty() {
                    PadicNum::from_int(self.field.p, 1, det.precision() + 64)
                } else {
                    determinant(&minor)
                };
                let cof = if i % 2 == 1 { cof.neg() } else { cof };
                cof.mul(&dinv)
            })
            .collect();
        Ok(ExtElem::from_coords(&self.field, coords))
    }

    pub fn div(&self, other: &Self) -> Result<Self, PadicError> {
        Ok(self.mul(&other.inv()?))
    }

    /// `log(self)` for `|self - 1| < 1`, by the series of `log(1 + x)`.
    pub fn log(&self) -> Result<Self, PadicError> {
        let e = self.e() as i64;
        let p = self.field.p;
        let one = ExtElem::from_int(&self.field, 1, self.precision_num() / e + 2);
        let x = self.sub(&one);
        let (v, exact) = x.valuation_num();
        let target = x.precision_num();
        if !exact {
            return Ok(ExtElem::from_int(&self.field, 0, target.div_euclid(e)).cap_precision(target));
        }
        if v < 1 {
            return Err(PadicError::OutsideConvergenceDomain {
                numerator: v,
                denominator: e as u32,
            });
        }
        // term n has valuation numerator >= n v - e floor(log_p n), which
        // increases once n > e / (v ln p)
        let settle = (e as f64 / (v as f64 * (p as f64).ln())).ceil() as u64 + 1;
        let bound = |n: u64| n as i64 * v - e * ilog(p, n);
        let mut last = settle.max(1);
        while bound(last + 1) < target {
            last += 1;
        }
        let mut sum = ExtElem::from_int(&self.field, 0, target.div_euclid(e) + 1);
        let mut power = x.clone();
        for n in 1..=last {
            let term = power.div_int(&BigInt::from(n));
            sum = if n % 2 == 1 { sum.add(&term) } else { sum.sub(&term) };
            if n < last {
                power = power.mul(&x);
            }
        }
        Ok(sum.cap_precision(target))
    }

    /// `exp(self)` for `|self| < p^{-1/(p-1)}`, i.e. valuation numerator
    /// `v` with `v (p - 1) > e`. In the ramified quadratic extension of
    /// `Q_2` this means `v ≥ 3`.
    pub fn exp(&self) -> Result<Self, PadicError> {
        let e = self.e() as i64;
        let p = self.field.p as i64;
        let (v, exact) = self.valuation_num();
        let target = self.precision_num();
        let one = ExtElem::from_int(&self.field, 1, target.div_euclid(e) + 2);
        if !exact {
            return Ok(one.cap_precision(target));
        }
        if v * (p - 1) <= e {
            return Err(PadicError::OutsideConvergenceDomain {
                numerator: v,
                denominator: e as u32,
            });
        }
        // v(x^n / n!) >= n v - e (n - 1) / (p - 1)
        let mut last = 0i64;
        while (last + 1) * v * (p - 1) - e * last < target * (p - 1) {
            last += 1;
        }
        let mut sum = one.clone();
        let mut term = one;
        for n in 1..=last {
            term = term.mul(self).div_int(&BigInt::from(n));
            sum = sum.add(&term);
        }
        Ok(sum.cap_precision(target))
    }
}

/// `⌊log_p n⌋` for `n ≥ 1`.
fn ilog(p: u32, n: u64) -> i64 {
    let mut k = 0;
    let mut x = n;
    while x >= p as u64 {
        x /= p as u64;
        k += 1;
    }
    k
}

fn determinant(m: &[Vec<PadicNum>]) -> PadicNum {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: Option<PadicNum> = None;
    for c in 0..n {
        let minor: Vec<Vec<PadicNum>> = (1..n)
            .map(|r| (0..n).filter(|&k| k != c).map(|k| m[r][k].clone()).collect())
            .collect();
        let t = m[0][c].mul(&determinant(&minor));
        let t = if c % 2 == 1 { t.neg() } else { t };
        acc = Some(match acc {
            Some(a) => a.add(&t),
            None => t,
        });
    }
    acc.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Q_2(√2)`-like field with modulus `t^2 - 2`.
    fn sqrt2(prec: i64) -> Arc<ExtField> {
        ExtField::new(
            2,
            vec![PadicNum::from_int(2, -2, prec), PadicNum::zero(2, prec)],
        )
        .unwrap()
    }

    #[test]
    fn generator_squares_to_two() {
        let k = sqrt2(40);
        let t = ExtElem::generator(&k, 40);
        assert_eq!(t.valuation_num(), (1, true));
        let two = t.mul(&t);
        assert_eq!(two.coords()[0].residue(30).unwrap(), 2u32.into());
        assert!(two.coords()[1].is_zero());
    }

    #[test]
    fn inverse_in_quadratic_and_cubic() {
        let k = sqrt2(60);
        let t = ExtElem::generator(&k, 60);
        let a = t.add(&ExtElem::from_int(&k, 5, 60)).mul(&t);
        let one = a.mul(&a.inv().unwrap());
        let diff = one.sub(&ExtElem::from_int(&k, 1, 60));
        assert!(diff.is_zero());
        assert!(diff.precision_num() >= 100);

        let cubic = ExtField::new(
            3,
            vec![
                PadicNum::from_int(3, -3, 40),
                PadicNum::zero(3, 40),
                PadicNum::zero(3, 40),
            ],
        )
        .unwrap();
        let u = ExtElem::generator(&cubic, 40);
        let b = u.mul(&u).add(&ExtElem::from_int(&cubic, 4, 40));
        let back = b.mul(&b.inv().unwrap()).sub(&ExtElem::from_int(&cubic, 1, 40));
        assert!(back.is_zero());
    }

    #[test]
    fn not_eisenstein() {
        let bad = ExtField::new(2, vec![PadicNum::from_int(2, -4, 20), PadicNum::zero(2, 20)]);
        assert_eq!(bad.unwrap_err(), PadicError::NotEisenstein { p: 2 });
    }

    #[test]
    fn log_of_one_is_zero_and_domain_checks() {
        let k = sqrt2(64);
        let one = ExtElem::from_int(&k, 1, 64);
        assert!(one.log().unwrap().is_zero());
        let t = ExtElem::generator(&k, 64);
        assert!(matches!(
            t.log(),
            Err(PadicError::OutsideConvergenceDomain { .. })
        ));
        // v(t^2) = 1 = 1/(p-1): exp diverges there
        assert!(matches!(
            t.mul(&t).exp(),
            Err(PadicError::OutsideConvergenceDomain { .. })
        ));
    }
}
