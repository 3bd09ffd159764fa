//! Growth parameters `(u, β, d)` with `U_{ui+r} ~ c_r i^d β^i`, and the
//! length-bound constants `K`, `L`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{CoreError, Result};
use crate::interval::Interval;
use crate::numsys::NumerationSystem;
use crate::poly::{real_roots, Poly, RealRoot};

/// Relative tolerance for ratio convergence.
pub const RATIO_TOLERANCE: f64 = 0.02;

/// Bits to which `ρ` is refined.
pub const ROOT_BITS: u32 = 128;

#[derive(Clone, Debug)]
pub struct SoittolaParams {
    pub u: usize,
    /// Real root of the characteristic polynomial with `β = ρ^u`.
    pub rho: RealRoot,
    pub beta: Interval,
    pub d: usize,
    /// Fitted dominant coefficients `c_r`, `r < u`.
    pub c: Vec<f64>,
    pub t: usize,
    /// Index from which the observed ratios stay within tolerance.
    pub stable_from: usize,
    pub k: f64,
    pub l: f64,
    pub horizon: usize,
}

fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    BigRational::new(BigInt::from(a.clone()), BigInt::from(b.clone()))
        .to_f64()
        .unwrap_or(f64::NAN)
}

fn ln_big(x: &BigUint) -> Interval {
    Interval::from_rational(&BigRational::from_integer(BigInt::from(x.clone()))).ln()
}

/// Rounds up to a multiple of `1/64`, strictly above `x`.
fn nice_above(x: f64) -> f64 {
    ((x * 64.0).floor() + 1.0) / 64.0
}

impl SoittolaParams {
    /// `P_T(x) ≈ c_T · max(x, 1)^d`.
    pub fn p_t(&self, x: f64) -> f64 {
        self.c[self.t] * x.max(1.0).powi(self.d as i32)
    }

    /// `u log_β(n) + K`.
    pub fn upper_length(&self, n: f64) -> f64 {
        self.u as f64 * n.ln() / self.beta.mid().ln() + self.k
    }

    /// `u log_β(n) - u log_β(P_T(log_β n + K/u)) - L`.
    pub fn lower_length(&self, n: f64) -> f64 {
        let lb = self.beta.mid().ln();
        let x = n.ln() / lb + self.k / self.u as f64;
        self.u as f64 * (n.ln() - self.p_t(x).ln()) / lb - self.l
    }
}

pub fn soittola_params(sys: &NumerationSystem, horizon: usize) -> Result<SoittolaParams> {
    let h = horizon.max(4 * sys.span() + 16);
    let terms = sys.extend_sequence(h)?;
    let char_poly = Poly::from_ints(&sys.char_poly());
    let mut roots: Vec<RealRoot> = real_roots(&char_poly)
        .into_iter()
        .filter(|r| r.bounds().1 > &BigRational::from_integer(1.into()))
        .collect();
    for r in &mut roots {
        r.refine(ROOT_BITS);
    }
    roots.retain(|r| r.approx() > 1.0);
    if roots.is_empty() {
        return Err(CoreError::NoDominantRoot);
    }
    let window_start = h / 2;
    for u in 1..=2 * sys.order() {
        let ratios: Vec<f64> = (window_start..=h - u).map(|i| ratio(&terms[i + u], &terms[i])).collect();
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !(lo > 0.0) || (hi - lo) / lo > RATIO_TOLERANCE {
            continue;
        }
        let observed = ratios[ratios.len() - 1];
        let best = roots
            .iter()
            .map(|r| (r, (r.approx().powi(u as i32) - observed).abs() / observed))
            .filter(|(_, e)| *e <= RATIO_TOLERANCE)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let Some((rho, _)) = best else { continue };
        let rho = rho.clone();
        // multiplicity of ρ as a root of the characteristic polynomial
        let mut deriv = char_poly.derivative();
        let mut mult = 1;
        while !deriv.is_zero() && rho.is_root_of(&deriv) {
            mult += 1;
            deriv = deriv.derivative();
        }
        let d = mult - 1;
        let beta = rho.interval().powi(u as u32);
        return Ok(finish(terms, u, rho, beta, d, h));
    }
    Err(CoreError::NoDominantRoot)
}

fn finish(terms: Vec<BigUint>, u: usize, rho: RealRoot, beta: Interval, d: usize, h: usize) -> SoittolaParams {
    let lb = beta.mid().ln();
    let c: Vec<f64> = (0..u)
        .map(|r| {
            let i = (h - r) / u;
            let lu = ln_big(&terms[u * i + r]).mid();
            (lu - d as f64 * (i.max(1) as f64).ln() - i as f64 * lb).exp()
        })
        .collect();
    let t = (0..u).max_by(|&a, &b| c[a].total_cmp(&c[b])).unwrap_or(0);
    let target = beta.mid();
    let mut stable_from = h - u;
    while stable_from > 0 {
        let i = stable_from - 1;
        let q = ratio(&terms[i + u], &terms[i]);
        if (q - target).abs() / target > RATIO_TOLERANCE {
            break;
        }
        stable_from = i;
    }
    let uf = Interval::point(u as f64);
    let ln_beta = beta.ln();
    // |rep(n)| = ℓ + 1 on [U_ℓ, U_{ℓ+1}): the upper bound binds at n = U_ℓ
    let mut k_need = f64::NEG_INFINITY;
    for (ell, t) in terms.iter().enumerate() {
        let len = Interval::point((ell + 1) as f64);
        let v = len.sub(&uf.mul(&ln_big(t).div(&ln_beta)));
        k_need = k_need.max(v.hi);
    }
    let k = nice_above(k_need.max(0.0));
    let mut params = SoittolaParams {
        u,
        rho,
        beta,
        d,
        c,
        t,
        stable_from,
        k,
        l: 0.0,
        horizon: h,
    };
    // the lower bound binds at n = U_{ℓ+1} - 1
    let mut l_need = f64::NEG_INFINITY;
    for ell in 0..h {
        let n = &terms[ell + 1] - 1u32;
        if n.is_zero() {
            continue;
        }
        let ln_n = ln_big(&n);
        let x = ln_n.div(&ln_beta).add(&Interval::point(k / u as f64));
        let pt = Interval::point(params.c[params.t])
            .mul(&Interval::new(x.lo.max(1.0), x.hi.max(1.0)).powi(d as u32));
        let v = uf
            .mul(&ln_n.sub(&pt.ln()).div(&ln_beta))
            .sub(&Interval::point((ell + 1) as f64));
        l_need = l_need.max(v.hi);
    }
    params.l = nice_above(l_need.max(0.0));
    params
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numsys::builtin;

    #[test]
    fn growth_parameters() {
        let p = soittola_params(&builtin("merge").unwrap(), 200).unwrap();
        assert_eq!((p.u, p.d), (2, 0));
        assert!(p.beta.contains(6.0));
        let p = soittola_params(&builtin("square").unwrap(), 200).unwrap();
        assert_eq!((p.u, p.d), (1, 1));
        assert!(p.beta.contains(2.0));
    }
}
