use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::PadicError;
use crate::int::{valuation_of, Valuation};
use crate::num::pow_p;

/// A linear recurrence `U_{i+k} = a_{k-1} U_{i+k-1} + … + a_0 U_i` valid for
/// `i ≥ offset`, with the terms `U_0 .. U_{offset+k-1}` given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    coeffs: Vec<BigInt>,
    offset: usize,
    initial: Vec<BigInt>,
}

/// `Z / m` with a fast path for powers of two.
struct Ring {
    modulus: BigUint,
    mask: Option<BigUint>,
}

impl Ring {
    fn new(modulus: BigUint) -> Self {
        let pow2 = modulus.count_ones() == 1;
        let mask = pow2.then(|| &modulus - 1u32);
        Ring { modulus, mask }
    }

    fn reduce(&self, x: BigUint) -> BigUint {
        match &self.mask {
            Some(mask) => x & mask,
            None => x % &self.modulus,
        }
    }

    fn lift(&self, x: &BigInt) -> BigUint {
        let m = BigInt::from(self.modulus.clone());
        x.mod_floor(&m).to_biguint().expect("nonnegative")
    }
}

impl Recurrence {
    /// `coeffs` lists `a_{k-1}` first.
    pub fn new(coeffs: Vec<BigInt>, offset: usize, initial: Vec<BigInt>) -> Result<Self, PadicError> {
        if coeffs.is_empty() {
            return Err(PadicError::Invalid("empty recurrence".into()));
        }
        if initial.len() != offset + coeffs.len() {
            return Err(PadicError::Invalid(format!(
                "expected {} initial terms, got {}",
                offset + coeffs.len(),
                initial.len()
            )));
        }
        Ok(Recurrence {
            coeffs,
            offset,
            initial,
        })
    }

    pub fn from_i64(coeffs: &[i64], offset: usize, initial: &[i64]) -> Result<Self, PadicError> {
        Recurrence::new(
            coeffs.iter().map(|&c| c.into()).collect(),
            offset,
            initial.iter().map(|&c| c.into()).collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn initial(&self) -> &[BigInt] {
        &self.initial
    }

    /// Exact terms `U_0 ..= U_n`.
    pub fn terms(&self, n: usize) -> Vec<BigInt> {
        let k = self.order();
        let mut out: Vec<BigInt> = self.initial.iter().take(n + 1).cloned().collect();
        while out.len() <= n {
            let i = out.len() - k;
            let next = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, a)| a * &out[i + k - 1 - j])
                .sum();
            out.push(next);
        }
        out
    }

    /// `U_0 ..= U_n` modulo `m`.
    pub fn terms_mod(&self, n: usize, m: &BigUint) -> Vec<BigUint> {
        let ring = Ring::new(m.clone());
        let k = self.order();
        let coeffs: Vec<BigUint> = self.coeffs.iter().map(|a| ring.lift(a)).collect();
        let mut out: Vec<BigUint> = self.initial.iter().take(n + 1).map(|u| ring.lift(u)).collect();
        while out.len() <= n {
            let i = out.len() - k;
            let mut s = BigUint::zero();
            for (j, a) in coeffs.iter().enumerate() {
                s += a * &out[i + k - 1 - j];
            }
            out.push(ring.reduce(s));
        }
        out
    }

    /// `U_i mod m` by exponentiation of `x` modulo the characteristic
    /// polynomial (Kitamasa), in `O(k^2 log i)` ring multiplications.
    pub fn term_mod(&self, i: u64, m: &BigUint) -> BigUint {
        let ring = Ring::new(m.clone());
        let k = self.order();
        if i < (self.offset + k) as u64 {
            return ring.lift(&self.initial[i as usize]);
        }
        let j = i - self.offset as u64;
        // x^k = Σ_r c_r x^r with c_r = a_r
        let c: Vec<BigUint> = (0..k).map(|r| ring.lift(&self.coeffs[k - 1 - r])).collect();
        let reduce_poly = |mut poly: Vec<BigUint>| -> Vec<BigUint> {
            for d in (k..poly.len()).rev() {
                let t = std::mem::take(&mut poly[d]);
                if t.is_zero() {
                    continue;
                }
                for r in 0..k {
                    if !c[r].is_zero() {
                        let add = &t * &c[r];
                        poly[d - k + r] += add;
                    }
                }
                let top = d - k;
                for r in top..top + k {
                    poly[r] = ring.reduce(std::mem::take(&mut poly[r]));
                }
            }
            poly.truncate(k);
            poly
        };
        let mut acc = vec![BigUint::zero(); k];
        acc[0] = BigUint::one();
        for bit in (0..64 - j.leading_zeros()).rev() {
            let mut sq = vec![BigUint::zero(); 2 * k - 1];
            for a in 0..k {
                if acc[a].is_zero() {
                    continue;
                }
                sq[2 * a] += ring.reduce(&acc[a] * &acc[a]);
                for b in a + 1..k {
                    if !acc[b].is_zero() {
                        sq[a + b] += ring.reduce((&acc[a] * &acc[b]) << 1);
                    }
                }
            }
            let sq: Vec<BigUint> = sq.into_iter().map(|x| ring.reduce(x)).collect();
            acc = reduce_poly(sq);
            if (j >> bit) & 1 == 1 {
                let mut shifted = vec![BigUint::zero()];
                shifted.extend(acc);
                acc = reduce_poly(shifted);
            }
        }
        let mut s = BigUint::zero();
        for (r, a) in acc.iter().enumerate() {
            s += a * ring.lift(&self.initial[self.offset + r]);
        }
        ring.reduce(s)
    }

    /// `ν_p(U_i)` from `U_i mod p^precision`.
    pub fn valuation(&self, p: u32, i: u64, precision: u64) -> Valuation {
        let m = pow_p(p, precision).to_biguint().expect("positive");
        let r = if i < 4096 {
            self.terms_mod(i as usize, &m).pop().expect("nonempty")
        } else {
            self.term_mod(i, &m)
        };
        valuation_of(p, &r, precision)
    }

    /// `ν_p(U_i)` for `i ∈ from ..= to`.
    pub fn valuations(&self, p: u32, from: usize, to: usize, precision: u64) -> Vec<Valuation> {
        let m = pow_p(p, precision).to_biguint().expect("positive");
        self.terms_mod(to, &m)[from..]
            .iter()
            .map(|r| valuation_of(p, r, precision))
            .collect()
    }
}

/// Checks `ν_p(U_i) = ν` for each pair, working modulo `p^{ν+64}`.
pub fn valuation_peaks(rec: &Recurrence, p: u32, pairs: &[(u64, u64)]) -> Vec<bool> {
    pairs
        .iter()
        .map(|&(i, nu)| {
            let m = pow_p(p, nu + 64).to_biguint().expect("positive");
            valuation_of(p, &rec.term_mod(i, &m), nu + 64) == Valuation::Exact(nu)
        })
        .collect()
}
