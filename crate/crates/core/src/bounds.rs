//! Bounds on the admissible periods of a recognizable set: prime
//! classification, `λ`, `f_p`, `M`, `n_X`, the valuation test and the
//! constants `D`, `D′`, `E`, and candidate enumeration.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};
use crate::interval::Interval;
use crate::langs::profile::mod_profile;
use crate::numsys::NumerationSystem;
use crate::soittola::SoittolaParams;

/// Largest `λ` tried before giving up on a T1 prime.
pub const LAMBDA_CAP: u32 = 24;
/// Primes up to this value are enumerated for the period universe.
pub const PRIME_UNIVERSE_CAP: u64 = 10_000_000;
/// Valuations used when fitting certificates.
pub const CERT_HORIZON: usize = 512;
/// Terms up to this index are computed exactly when bounding T2 exponents.
pub const EXACT_LENGTH_LIMIT: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeKind {
    /// Does not divide every coefficient.
    T1,
    /// Divides every coefficient.
    T2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentBound {
    Bounded(u32),
    /// Depends on valuation certificates that were not supplied or failed.
    Conditional,
    /// No `λ` was found within [`LAMBDA_CAP`].
    Unknown,
}

impl ExponentBound {
    pub fn value(&self) -> Option<u32> {
        match self {
            ExponentBound::Bounded(b) => Some(*b),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeClass {
    pub p: u64,
    pub kind: PrimeKind,
    pub lambda: Option<u32>,
    pub exponent_bound: ExponentBound,
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Distinct prime factors by trial division.
pub fn prime_factors(n: &BigUint) -> Result<Vec<u64>> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while n > BigUint::one() {
        let dd = BigUint::from(d);
        if &dd * &dd > n {
            let last = n
                .to_u64()
                .ok_or_else(|| CoreError::Cap(format!("prime factor {n} too large")))?;
            out.push(last);
            break;
        }
        if (&n % &dd).is_zero() {
            out.push(d);
            while (&n % &dd).is_zero() {
                n /= &dd;
            }
        }
        d += 1;
        if d > 100_000_000 {
            return Err(CoreError::Cap("trial division limit".into()));
        }
    }
    Ok(out)
}

/// T2 primes: the prime factors of the gcd of the coefficients.
pub fn classify_primes(sys: &NumerationSystem) -> Result<Vec<PrimeClass>> {
    Ok(prime_factors(&sys.coeff_gcd())?
        .into_iter()
        .map(|p| PrimeClass {
            p,
            kind: PrimeKind::T2,
            lambda: None,
            exponent_bound: ExponentBound::Conditional,
        })
        .collect())
}

pub fn kind_of(sys: &NumerationSystem, p: u64) -> PrimeKind {
    let p = BigInt::from(p);
    if sys.coeffs().iter().all(|a| (a % &p).is_zero()) {
        PrimeKind::T2
    } else {
        PrimeKind::T1
    }
}

fn divides_a0(sys: &NumerationSystem, p: u64) -> bool {
    (sys.coeff(0) % BigInt::from(p)).is_zero()
}

fn checked_pow(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

/// Least `λ ≤ cap` such that the periodic part of `(U_i mod p^λ)` has a
/// non-zero entry.
pub fn lambda_for_prime(sys: &NumerationSystem, p: u64, cap: u32) -> Result<u32> {
    if !divides_a0(sys, p) {
        // invertible mod p: everything from U_N on is periodic
        let pb = BigInt::from(p);
        let n = sys.offset();
        if sys.initial()[n..].iter().any(|u| !(u % &pb).is_zero()) {
            return Ok(1);
        }
    }
    for lam in 1..=cap {
        let Some(m) = checked_pow(p, lam).filter(|m| *m < 1 << 62) else { break };
        if !mod_profile(sys, m)?.is_zero_period() {
            return Ok(lam);
        }
    }
    Err(CoreError::Cap(format!("no λ ≤ {cap} for p = {p}")))
}

/// Preperiod of the zero period of `(U_i mod p^μ)`.
pub fn f_p(sys: &NumerationSystem, p: u64, mu: u32) -> Result<usize> {
    if mu == 0 {
        return Ok(0);
    }
    let m = checked_pow(p, mu).ok_or_else(|| CoreError::Cap(format!("{p}^{mu} overflows")))?;
    let prof = mod_profile(sys, m)?;
    if !prof.is_zero_period() {
        return Err(CoreError::NotZeroPeriod { modulus: m });
    }
    Ok(prof.preperiod)
}

/// Least `e` with `p^e ≥ s`.
fn ceil_log(p: u64, s: u64) -> u32 {
    let mut e = 0;
    let mut v: u128 = 1;
    while v < s as u128 {
        v *= p as u128;
        e += 1;
    }
    e
}

/// Greatest `e` with `p^e ≤ s`.
fn floor_log(p: u64, s: u64) -> u32 {
    let mut e = 0;
    let mut v: u128 = p as u128;
    while v <= s as u128 {
        v *= p as u128;
        e += 1;
    }
    e
}

/// Exponent bound for a T1 prime in a period of an `s`-state automaton.
/// With `Some(λ)` (small primes) this is `max(λ, ⌈log_p s⌉ + λ − 1)`;
/// with `None` (primes above `max(|a_0|, U_N)`) it is `⌊log_p s⌋`.
pub fn exponent_bound_t1(p: u64, lambda: Option<u32>, s: u64) -> u32 {
    match lambda {
        Some(l) => l.max(ceil_log(p, s.max(1)) + l - 1),
        None => floor_log(p, s.max(1)),
    }
}

/// `M = max_j f_{p_j}(ν_j)`.
pub fn big_m(sys: &NumerationSystem, nu: &[(u64, u32)]) -> Result<usize> {
    let mut m = 0;
    for &(p, e) in nu {
        m = m.max(f_p(sys, p, e)?);
    }
    Ok(m)
}

/// `ρ = Q ∏ p_j^{ν_j}`.
pub fn rho(q: u64, nu: &[(u64, u32)]) -> BigUint {
    nu.iter()
        .fold(BigUint::from(q), |acc, &(p, e)| acc * BigUint::from(p).pow(e))
}

/// `n_X = M − 1 − |rep_U(ρ − 1)|`.
pub fn n_x(sys: &NumerationSystem, q: u64, nu: &[(u64, u32)]) -> Result<i64> {
    let m = big_m(sys, nu)? as i64;
    let r = rho(q, nu);
    let len = if r.is_zero() {
        0
    } else {
        sys.greedy_rep(&(r - 1u32))?.len() as i64
    };
    Ok(m - 1 - len)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertStatus {
    VerifiedAtHorizon,
    UserAsserted,
}

impl CertStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertStatus::VerifiedAtHorizon => "verified-at-horizon",
            CertStatus::UserAsserted => "user-asserted",
        }
    }
}

/// `ν_p(U_i) < ⌊α i⌋ + g(i)` with `g(i) = c log_p(i) + c′` and `g(i) < ε i`
/// for `i > N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValuationCertificate {
    pub p: u64,
    pub alpha: BigRational,
    pub epsilon: BigRational,
    pub n: usize,
    pub g_log: f64,
    pub g_const: f64,
    pub verified_to: usize,
    pub status: CertStatus,
}

impl ValuationCertificate {
    pub fn g(&self, i: usize) -> f64 {
        let li = if i <= 1 { 0.0 } else { (i as f64).ln() / (self.p as f64).ln() };
        self.g_log * li + self.g_const
    }

    pub fn alpha_plus_eps(&self) -> BigRational {
        &self.alpha + &self.epsilon
    }

    pub fn to_line(&self) -> String {
        format!(
            "{} {}/{} {}/{} {} {}",
            self.p,
            self.alpha.numer(),
            self.alpha.denom(),
            self.epsilon.numer(),
            self.epsilon.denom(),
            self.n,
            self.status.as_str()
        )
    }
}

impl fmt::Display for ValuationCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

fn parse_ratio(s: &str, line: usize) -> Result<BigRational> {
    let err = || CoreError::Parse {
        line,
        msg: format!("bad rational {s:?}"),
    };
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| err())?;
    let d: BigInt = d.trim().parse().map_err(|_| err())?;
    if d.is_zero() || n.is_negative() || d.is_negative() {
        return Err(err());
    }
    Ok(BigRational::new(n, d))
}

/// One certificate per line: `p alpha eps N status`; `#` starts a comment.
/// Loaded certificates bound `g` by `ε i` alone.
pub fn parse_certificates(text: &str) -> Result<Vec<ValuationCertificate>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let f: Vec<&str> = body.split_whitespace().collect();
        if f.len() != 5 {
            return Err(CoreError::Parse {
                line,
                msg: "expected `p alpha eps N status`".into(),
            });
        }
        let p: u64 = f[0].parse().map_err(|_| CoreError::Parse {
            line,
            msg: format!("bad prime {:?}", f[0]),
        })?;
        let n: usize = f[3].parse().map_err(|_| CoreError::Parse {
            line,
            msg: format!("bad index {:?}", f[3]),
        })?;
        let status = match f[4] {
            "verified-at-horizon" | "verified" => CertStatus::VerifiedAtHorizon,
            "user-asserted" | "asserted" => CertStatus::UserAsserted,
            s => {
                return Err(CoreError::Parse {
                    line,
                    msg: format!("unknown status {s:?}"),
                })
            }
        };
        let epsilon = parse_ratio(f[2], line)?;
        out.push(ValuationCertificate {
            p,
            alpha: parse_ratio(f[1], line)?,
            g_log: 0.0,
            g_const: 0.0,
            epsilon,
            n,
            verified_to: 0,
            status,
        });
    }
    Ok(out)
}

/// `ν_p(U_i)` for `i ≤ horizon`.
pub fn valuations(sys: &NumerationSystem, p: u64, horizon: usize) -> Result<Vec<u32>> {
    let terms = sys.extend_sequence(horizon)?;
    let pb = BigUint::from(p);
    Ok(terms
        .iter()
        .map(|t| {
            let mut t = t.clone();
            let mut v = 0;
            loop {
                let (q, r) = t.div_rem(&pb);
                if !r.is_zero() {
                    break v;
                }
                t = q;
                v += 1;
            }
        })
        .collect())
}

/// Indices `N < i ≤ horizon` violating `ν_p(U_i) < ⌊α i⌋ + min(g(i), ε i)`.
/// Certificates without a fitted `g` are checked against `ε i`.
pub fn check_certificate(sys: &NumerationSystem, cert: &ValuationCertificate, horizon: usize) -> Result<Vec<usize>> {
    let vals = valuations(sys, cert.p, horizon)?;
    let eps = cert.epsilon.to_f64().unwrap_or(0.0);
    let fitted = cert.g_log != 0.0 || cert.g_const != 0.0;
    Ok((cert.n + 1..=horizon)
        .filter(|&i| {
            let floor = (&cert.alpha * BigRational::from_integer(BigInt::from(i))).floor().to_integer();
            let floor = floor.to_f64().unwrap_or(f64::INFINITY);
            let g = if fitted { cert.g(i) } else { eps * i as f64 };
            !((vals[i] as f64) < floor + g)
        })
        .collect())
}

/// Fits `α` (denominator at most 12, closest to the observed slope),
/// `g(i) = log_p i + c′`, `N = horizon / 4` and `ε ≥ g(N)/N`, then checks
/// the result on the data.
pub fn fit_certificate(sys: &NumerationSystem, p: u64, horizon: usize) -> Result<ValuationCertificate> {
    let vals = valuations(sys, p, horizon)?;
    let lo = horizon / 4;
    // least-squares slope over [H/4, H]
    let xs: Vec<f64> = (lo..=horizon).map(|i| i as f64).collect();
    let ys: Vec<f64> = (lo..=horizon).map(|i| vals[i] as f64).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let mut alpha = BigRational::from_integer(BigInt::zero());
    let mut best = f64::INFINITY;
    for den in 1..=12i64 {
        let num = (slope * den as f64).round().max(1.0) as i64;
        let a = BigRational::new(BigInt::from(num), BigInt::from(den));
        let err = (a.to_f64().unwrap_or(0.0) - slope).abs();
        if err + 1e-12 < best {
            best = err;
            alpha = a;
        }
    }
    let lp = (p as f64).ln();
    let logp = |i: usize| if i <= 1 { 0.0 } else { (i as f64).ln() / lp };
    let mut c_const = f64::NEG_INFINITY;
    for (i, &v) in vals.iter().enumerate() {
        let floor = (&alpha * BigRational::from_integer(BigInt::from(i))).floor().to_integer();
        let floor = floor.to_f64().unwrap_or(0.0);
        c_const = c_const.max(v as f64 - floor - logp(i));
    }
    // strict inequality, rounded up to a multiple of 1/8
    let c_const = ((c_const * 8.0).floor() + 1.0) / 8.0;
    let nj = lo.max(2);
    let g_n = logp(nj) + c_const;
    // g(i)/i decreases for i > N when log_p(N) + c′ > 1/ln p
    let eps_f = (g_n / nj as f64).max(1e-6);
    let eps = BigRational::new(BigInt::from((eps_f * 1e6).ceil() as i64), BigInt::from(1_000_000));
    let cert = ValuationCertificate {
        p,
        alpha,
        epsilon: eps,
        n: nj,
        g_log: 1.0,
        g_const: c_const,
        verified_to: horizon,
        status: CertStatus::VerifiedAtHorizon,
    };
    let bad = check_certificate(sys, &cert, horizon)?;
    if !bad.is_empty() || g_n * lp <= 1.0 {
        return Err(CoreError::Precision(format!("certificate for p = {p} fails at {bad:?}")));
    }
    Ok(cert)
}

/// Certified comparison of `1/max_j(α_j+ε_j)` with `u Σ_j log_β p_j`.
#[derive(Clone, Copy, Debug)]
pub struct TestInequality {
    pub lhs: Interval,
    pub rhs: Interval,
    /// `None` when the enclosures overlap.
    pub holds: Option<bool>,
}

pub fn check_test_inequality(params: &SoittolaParams, certs: &[ValuationCertificate]) -> TestInequality {
    let max = certs
        .iter()
        .map(|c| c.alpha_plus_eps())
        .max()
        .unwrap_or_else(|| BigRational::from_integer(BigInt::one()));
    let lhs = Interval::from_rational(&max).recip();
    let ln_beta = params.beta.ln();
    let mut sum = Interval::point(0.0);
    for c in certs {
        sum = sum.add(&Interval::from_int(c.p as i64).ln().div(&ln_beta));
    }
    let rhs = sum.scale(params.u as f64);
    let holds = lhs.certified_cmp(&rhs).map(|o| o == std::cmp::Ordering::Greater);
    TestInequality { lhs, rhs, holds }
}

/// `D = ⌈(Z + K + 1) / (1/max(α+ε) − u Σ log_β p)⌉`.
pub fn constant_d(params: &SoittolaParams, certs: &[ValuationCertificate], z: usize, k: f64) -> Result<u64> {
    let t = check_test_inequality(params, certs);
    if t.holds != Some(true) {
        return Err(CoreError::TestInequalityFails(format!(
            "lhs {:?} vs rhs {:?}",
            (t.lhs.lo, t.lhs.hi),
            (t.rhs.lo, t.rhs.hi)
        )));
    }
    let denom = t.lhs.sub(&t.rhs);
    let num = Interval::point(z as f64).add(&Interval::point(k)).add(&Interval::point(1.0));
    Ok(num.div(&denom).ceil_upper().max(1) as u64)
}

/// Least `d` with `f_p(d) > pre` for every T2 prime `p`.
pub fn constant_d_prime(sys: &NumerationSystem, t2: &[u64], pre: usize, cap: u32) -> Result<u64> {
    let mut d = 0u32;
    for &p in t2 {
        let mut e = 1;
        while f_p(sys, p, e)? <= pre {
            e += 1;
            if e > cap {
                return Err(CoreError::Cap(format!("f_{p} stays ≤ {pre} up to exponent {cap}")));
            }
        }
        d = d.max(e);
    }
    Ok(d as u64)
}

/// Increasing stream of the products `∏ p^{e_p}` with `e_p ≤ bound_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidates {
    pub periods: Vec<u64>,
    /// Some product exceeded the cap and was left out.
    pub cap_exceeded: bool,
}

pub fn enumerate_candidate_periods(universe: &[(u64, u32)], cap: u64) -> Candidates {
    let mut periods = vec![1u64];
    let mut cap_exceeded = false;
    for &(p, bound) in universe {
        let mut next = Vec::new();
        for &base in &periods {
            let mut v = base;
            next.push(v);
            for _ in 0..bound {
                match v.checked_mul(p).filter(|x| *x <= cap) {
                    Some(x) => {
                        v = x;
                        next.push(v);
                    }
                    None => {
                        cap_exceeded = true;
                        break;
                    }
                }
            }
        }
        periods = next;
    }
    periods.sort_unstable();
    periods.dedup();
    Candidates {
        periods,
        cap_exceeded,
    }
}

/// Candidates not dividing any other candidate.
pub fn maximal_under_divisibility(c: &[u64]) -> Vec<u64> {
    c.iter()
        .copied()
        .filter(|&a| !c.iter().any(|&b| b != a && b % a == 0))
        .collect()
}

/// Everything the decision procedure learns about admissible periods.
#[derive(Clone, Debug)]
pub struct PeriodBoundReport {
    pub s: usize,
    /// `max(|a_0|, U_N, S)`.
    pub universe_limit: u64,
    pub primes: Vec<PrimeClass>,
    pub d: Option<u64>,
    pub d_prime: Option<u64>,
    pub e: Option<u64>,
    /// Every prime bound is finite and unconditional or certified.
    pub complete: bool,
    /// T2 bounds rest on certificates.
    pub conditional: bool,
    pub notes: Vec<String>,
}

impl PeriodBoundReport {
    /// `(p, bound)` pairs for enumeration; unknown bounds use `fallback`.
    pub fn universe(&self, fallback: u32) -> Vec<(u64, u32)> {
        self.primes
            .iter()
            .map(|c| (c.p, c.exponent_bound.value().unwrap_or(fallback)))
            .filter(|&(_, b)| b > 0)
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("states={}\n", self.s));
        s.push_str(&format!("universe_limit={}\n", self.universe_limit));
        for c in &self.primes {
            let bound = match c.exponent_bound {
                ExponentBound::Bounded(b) => b.to_string(),
                ExponentBound::Conditional => "conditional".into(),
                ExponentBound::Unknown => "unknown".into(),
            };
            let lam = c.lambda.map(|l| l.to_string()).unwrap_or_else(|| "-".into());
            s.push_str(&format!("prime={} kind={:?} lambda={} bound={}\n", c.p, c.kind, lam, bound));
        }
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
        s.push_str(&format!("D={}\nD'={}\nE={}\n", opt(self.d), opt(self.d_prime), opt(self.e)));
        s.push_str(&format!("complete={}\nconditional={}\n", self.complete, self.conditional));
        for n in &self.notes {
            s.push_str(&format!("note={n}\n"));
        }
        s
    }
}

/// Inputs beyond the system and the automaton size.
#[derive(Clone, Debug, Default)]
pub struct BoundInputs<'a> {
    pub certificates: &'a [ValuationCertificate],
    /// `Z = max(R, C)`, when the hypotheses were checked.
    pub z: Option<usize>,
    pub soittola: Option<&'a SoittolaParams>,
    /// Number of states `C` of the numeration-language automaton.
    pub c: usize,
}

/// Builds the per-prime report for an automaton with `s` states.
pub fn period_bounds(sys: &NumerationSystem, s: usize, inputs: &BoundInputs<'_>) -> Result<PeriodBoundReport> {
    let mut notes = Vec::new();
    let a0 = sys.coeff(0).magnitude().to_u64();
    let un = sys.initial()[sys.offset()].to_biguint().and_then(|u| u.to_u64());
    let small_limit = match (a0, un) {
        (Some(a), Some(u)) => Some(a.max(u)),
        _ => None,
    };
    let limit = small_limit.map(|l| l.max(s as u64));
    let mut complete = true;
    let t2: Vec<u64> = classify_primes(sys)?.into_iter().map(|c| c.p).collect();
    let mut primes = Vec::new();
    let universe_limit = match limit {
        Some(l) if l <= PRIME_UNIVERSE_CAP => l,
        _ => {
            complete = false;
            notes.push(format!("prime universe exceeds {PRIME_UNIVERSE_CAP}"));
            PRIME_UNIVERSE_CAP.min(s as u64)
        }
    };
    let small_limit = small_limit.unwrap_or(u64::MAX);
    for p in primes_up_to(universe_limit) {
        if t2.contains(&p) {
            continue;
        }
        if p <= small_limit {
            match lambda_for_prime(sys, p, LAMBDA_CAP) {
                Ok(l) => primes.push(PrimeClass {
                    p,
                    kind: PrimeKind::T1,
                    lambda: Some(l),
                    exponent_bound: ExponentBound::Bounded(exponent_bound_t1(p, Some(l), s as u64)),
                }),
                Err(CoreError::Cap(_)) => {
                    complete = false;
                    notes.push(format!("p={p}: zero period modulo p^λ for every λ ≤ {LAMBDA_CAP}"));
                    primes.push(PrimeClass {
                        p,
                        kind: PrimeKind::T1,
                        lambda: None,
                        exponent_bound: ExponentBound::Unknown,
                    });
                }
                Err(e) => return Err(e),
            }
        } else {
            let b = exponent_bound_t1(p, None, s as u64);
            if b == 0 {
                // larger primes cannot divide the period either
                break;
            }
            primes.push(PrimeClass {
                p,
                kind: PrimeKind::T1,
                lambda: Some(1),
                exponent_bound: ExponentBound::Bounded(b),
            });
        }
    }
    let (mut d, mut d_prime, mut e) = (None, None, None);
    let mut conditional = false;
    let mut t2_bound = ExponentBound::Conditional;
    if !t2.is_empty() {
        match t2_exponent_bound(sys, s, &t2, &primes, inputs) {
            Ok((dd, dp, ee, bound)) => {
                d = Some(dd);
                d_prime = Some(dp);
                e = Some(ee);
                t2_bound = ExponentBound::Bounded(bound);
                conditional = true;
            }
            Err(err) => {
                complete = false;
                notes.push(format!("T2 exponents unbounded: {err}"));
            }
        }
    }
    for &p in &t2 {
        primes.push(PrimeClass {
            p,
            kind: PrimeKind::T2,
            lambda: None,
            exponent_bound: t2_bound,
        });
    }
    primes.sort_by_key(|c| c.p);
    Ok(PeriodBoundReport {
        s,
        universe_limit,
        primes,
        d,
        d_prime,
        e,
        complete,
        conditional,
        notes,
    })
}

/// `(D, D′, E, bound)` for the T2 exponents. Beyond `E`, the lower bound
/// `(|rep(ρ−1)|+1)/γ_Q ≤ S` applies with `γ_Q ≤ Q^{N+k} C + 1`.
fn t2_exponent_bound(
    sys: &NumerationSystem,
    s: usize,
    t2: &[u64],
    t1: &[PrimeClass],
    inputs: &BoundInputs<'_>,
) -> Result<(u64, u64, u64, u32)> {
    let params = inputs
        .soittola
        .ok_or_else(|| CoreError::TestInequalityFails("no growth parameters".into()))?;
    let z = inputs
        .z
        .ok_or_else(|| CoreError::TestInequalityFails("Z unknown (H3 unverified)".into()))?;
    let certs: Vec<ValuationCertificate> = t2
        .iter()
        .map(|p| {
            inputs
                .certificates
                .iter()
                .find(|c| c.p == *p)
                .cloned()
                .ok_or_else(|| CoreError::TestInequalityFails(format!("no certificate for p = {p}")))
        })
        .collect::<Result<_>>()?;
    let d = constant_d(params, &certs, z, params.k)?;
    // greatest preperiod of (U_i mod b) over admissible Q: by CRT, the
    // maximum over the maximal admissible prime powers
    let mut pre = 0usize;
    let mut q_max = BigUint::one();
    for c in t1 {
        let b = c
            .exponent_bound
            .value()
            .ok_or_else(|| CoreError::Cap(format!("T1 prime {} unbounded", c.p)))?;
        if b == 0 {
            continue;
        }
        q_max *= BigUint::from(c.p).pow(b);
        if !divides_a0(sys, c.p) {
            // periodic from index N on; N bounds the preperiod from above,
            // which can only enlarge D′
            pre = pre.max(sys.offset());
            continue;
        }
        if let Some(m) = checked_pow(c.p, b) {
            pre = pre.max(mod_profile(sys, m)?.preperiod);
        } else {
            return Err(CoreError::Cap(format!("{}^{b} overflows", c.p)));
        }
    }
    let d_prime = constant_d_prime(sys, t2, pre, 4096)?;
    let e = d.max(d_prime);
    let gamma_bound = q_max.pow(sys.span() as u32) * BigUint::from(inputs.c.max(1)) + 1u32;
    let limit = gamma_bound * BigUint::from(s);
    let pmin = *t2.iter().min().expect("nonempty");
    let m = max_exponent_below_length(sys, pmin, &limit, params)?;
    let bound = (e.saturating_sub(1) as u32).max(m);
    Ok((d, d_prime, e, bound))
}

/// Greatest `m` with `|rep_U(p^m − 1)| + 1 ≤ limit`, i.e. `p^m ≤ U_{limit−1}`.
/// Past [`EXACT_LENGTH_LIMIT`] the term is replaced by the growth envelope
/// `U_n ≤ U_H β^{n−H} (1 + 2^{−20})^{n}`, which only enlarges the bound.
fn max_exponent_below_length(sys: &NumerationSystem, p: u64, limit: &BigUint, params: &SoittolaParams) -> Result<u32> {
    if limit.is_zero() {
        return Ok(0);
    }
    let idx = limit - 1u32;
    if let Some(n) = idx.to_usize().filter(|n| *n <= EXACT_LENGTH_LIMIT) {
        let u = sys.term(n)?;
        let pb = BigUint::from(p);
        let mut v = pb.clone();
        let mut m = 0u32;
        while v <= u {
            v *= &pb;
            m += 1;
        }
        return Ok(m);
    }
    let h = EXACT_LENGTH_LIMIT;
    let ln_uh = ln_big(&sys.term(h)?);
    let n = idx.to_f64().unwrap_or(f64::INFINITY);
    let ln_u = ln_uh + (n - h as f64) * params.beta.hi.ln() + n * 2f64.powi(-20);
    let m = (ln_u / (p as f64).ln()).ceil();
    Ok(if m.is_finite() && m < u32::MAX as f64 { m as u32 } else { u32::MAX })
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap_or(f64::MAX).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap_or(1.0).ln() + shift as f64 * std::f64::consts::LN_2
}
