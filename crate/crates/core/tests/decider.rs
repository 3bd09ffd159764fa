use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use upcheck_automata::{Dfa, DEFAULT_STATE_CAP};
use upcheck_core::bounds::{big_m, lambda_for_prime, n_x, LAMBDA_CAP};
use upcheck_core::decider::*;
use upcheck_core::langs::{congruence_dfa, gamma, mod_profile};
use upcheck_core::{builtin, check_hypotheses, numeration_dfa, LangSource, NumerationLanguage, NumerationSystem};

fn lang(name: &str) -> (NumerationSystem, NumerationLanguage) {
    let sys = builtin(name).unwrap();
    let l = numeration_dfa(&sys, LangSource::Auto).unwrap();
    (sys, l)
}

fn spec(a: u64, pi: u64, r: &[u64], e: &[u64]) -> UpSetSpec {
    UpSetSpec::new(a, pi, r.to_vec(), e.to_vec()).unwrap()
}

#[test]
fn spec_membership_and_canonical_form() {
    let s = spec(6, 3, &[0], &[5]);
    let bits: Vec<bool> = (0..12).map(|n| s.contains(n)).collect();
    assert_eq!(
        bits,
        vec![true, false, false, true, false, true, true, false, false, true, false, false]
    );
    assert_eq!(s.canonical(), s);
    let s = spec(10, 6, &[0, 3], &[]);
    assert_eq!(s.canonical(), spec(0, 3, &[0], &[]));
    assert_eq!(spec(0, 3, &[0], &[]).to_string(), "a=0 pi=3 R={0} E={}");
    assert!(UpSetSpec::new(2, 3, vec![3], vec![]).is_err());
    assert!(UpSetSpec::new(2, 3, vec![0], vec![2]).is_err());
    assert!(UpSetSpec::new(0, 0, vec![], vec![]).is_err());
}

#[test]
fn oracle_cases() {
    let (sys, l) = lang("toy");
    let empty = Dfa::empty(l.dfa.alphabet());
    assert!(oracle_membership(&sys, &empty, 300).iter().all(|b| !b));
    assert!(oracle_membership(&sys, &l.dfa, 300).iter().all(|&b| b));
    let c = congruence_dfa(&sys, 4, 1, &l, DEFAULT_STATE_CAP).unwrap();
    let bits = oracle_membership(&sys, &c, 300);
    assert!(bits.iter().enumerate().all(|(n, &b)| b == (n % 4 == 1)));
}

#[test]
fn up_set_machines() {
    let (sys, l) = lang("toy");
    let all = build_up_set_dfa(&sys, &spec(0, 1, &[0], &[]), &l).unwrap();
    assert!(all.equivalent(&l.dfa).unwrap());
    let even = build_up_set_dfa(&sys, &spec(0, 2, &[0], &[]), &l).unwrap();
    for n in 0..=2000u64 {
        assert_eq!(even.accepts(&sys.rep(n)), n % 2 == 0, "{n}");
    }
    let s = spec(7, 5, &[1, 4], &[0, 2, 6]);
    let d = build_up_set_dfa(&sys, &s, &l).unwrap();
    for n in 0..=2000u64 {
        assert_eq!(d.accepts(&sys.rep(n)), s.contains(n), "{n}");
    }
}

#[test]
fn period_tests() {
    let (sys, l) = lang("toy");
    // π = 1: finite or cofinite
    let fin = build_up_set_dfa(&sys, &spec(5, 1, &[], &[1, 3]), &l).unwrap();
    let t = period_test(&sys, &fin, &l, 1, DEFAULT_STATE_CAP).unwrap().unwrap();
    assert_eq!(t, PeriodTest { preperiod: 4, residues: vec![] });
    let c = congruence_dfa(&sys, 6, 5, &l, DEFAULT_STATE_CAP).unwrap();
    assert_eq!(period_test(&sys, &c, &l, 1, DEFAULT_STATE_CAP).unwrap(), None);
    let t = period_test(&sys, &c, &l, 6, DEFAULT_STATE_CAP).unwrap().unwrap();
    assert_eq!(t, PeriodTest { preperiod: 0, residues: vec![5] });
    // multiples of the true period succeed too, divisors-only of it fail
    let t = period_test(&sys, &c, &l, 12, DEFAULT_STATE_CAP).unwrap().unwrap();
    assert_eq!(t.residues, vec![5, 11]);
    assert_eq!(period_test(&sys, &c, &l, 3, DEFAULT_STATE_CAP).unwrap(), None);
    let even = fixture_even_length(&l).unwrap();
    for pi in 1..=12 {
        assert_eq!(period_test(&sys, &even, &l, pi, DEFAULT_STATE_CAP).unwrap(), None, "π={pi}");
    }
}

#[test]
fn period_test_is_coherent_under_divisibility() {
    let (sys, l) = lang("ex35");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let pi = rng.gen_range(1..=12u64);
        let a = rng.gen_range(0..=12u64);
        let r: Vec<u64> = (0..pi).filter(|_| rng.gen_bool(0.5)).collect();
        let e: Vec<u64> = (0..a).filter(|_| rng.gen_bool(0.3)).collect();
        let s = spec(a, pi, &r, &e);
        let d = build_up_set_dfa(&sys, &s, &l).unwrap();
        let canon = s.canonical();
        for q in 1..=24u64 {
            let t = period_test(&sys, &d, &l, q, DEFAULT_STATE_CAP).unwrap();
            assert_eq!(t.is_some(), q % canon.period == 0, "{s} q={q}");
            if let Some(t) = t {
                assert_eq!(t.preperiod, canon.preperiod, "{s} q={q}");
            }
        }
    }
}

#[test]
fn decide_examples() {
    let cfg = DecideConfig::default();
    let (sys, l) = lang("toy");
    let c = congruence_dfa(&sys, 3, 0, &l, DEFAULT_STATE_CAP).unwrap();
    let v = decide(&sys, &c, &l, &cfg).unwrap();
    assert_eq!(v.outcome, Outcome::UltimatelyPeriodic);
    assert_eq!(v.witness, Some(spec(0, 3, &[0], &[])));
    let v = decide(&sys, &fixture_powers(&l), &l, &cfg).unwrap();
    assert_eq!(v.outcome, Outcome::NotUltimatelyPeriodic);
    assert!(v.to_machine().contains("outcome=NotUltimatelyPeriodic"));

    let (sys, l) = lang("ppp");
    let d = build_up_set_dfa(&sys, &spec(6, 3, &[0], &[5]), &l).unwrap();
    let v = decide(&sys, &d, &l, &cfg).unwrap();
    assert_eq!(v.outcome, Outcome::UltimatelyPeriodic);
    let w = v.witness.unwrap();
    assert_eq!((w.preperiod, w.period), (6, 3));
    let bits: Vec<bool> = (0..6).map(|n| w.contains(n)).collect();
    assert_eq!(bits, vec![true, false, false, true, false, true]);
}

#[test]
fn input_outside_the_language_is_rejected() {
    let (sys, l) = lang("fib");
    let all = Dfa::universal(2);
    assert!(matches!(
        decide(&sys, &all, &l, &DecideConfig::default()),
        Err(upcheck_core::CoreError::NotSubsetOfNumerationLanguage { .. })
    ));
}

fn random_spec(rng: &mut ChaCha8Rng, max_a: u64, max_pi: u64) -> UpSetSpec {
    let pi = rng.gen_range(1..=max_pi);
    let a = rng.gen_range(0..=max_a);
    let r: Vec<u64> = (0..pi).filter(|_| rng.gen_bool(0.4)).collect();
    let e: Vec<u64> = (0..a).filter(|_| rng.gen_bool(0.2)).collect();
    spec(a, pi, &r, &e)
}

#[test]
fn random_fixtures_round_trip() {
    let cfg = DecideConfig::default();
    for (name, seed, max_pi) in [("toy", 1u64, 36u64), ("ex35", 2, 36), ("ppp", 3, 6)] {
        let (sys, l) = lang(name);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..12 {
            let s = random_spec(&mut rng, 30, max_pi);
            let d = build_up_set_dfa(&sys, &s, &l).unwrap();
            let v = decide(&sys, &d, &l, &cfg).unwrap();
            assert_eq!(v.outcome, Outcome::UltimatelyPeriodic, "{name} {s}");
            let w = v.witness.unwrap();
            assert_eq!(w, s.canonical(), "{name} {s}");
            let rebuilt = build_up_set_dfa(&sys, &w, &l).unwrap();
            assert!(rebuilt.equivalent(&d).unwrap());
            let n = w.preperiod + 3 * w.period;
            let bits = oracle_membership(&sys, &d, n);
            assert!(bits.iter().enumerate().all(|(i, &b)| b == w.contains(i as u64)));
        }
    }
}

#[test]
fn non_periodic_fixtures_are_never_accepted() {
    let cfg = DecideConfig::default();
    for name in ["toy", "ex35", "ppp", "fib"] {
        let (sys, l) = lang(name);
        for d in [fixture_powers(&l), fixture_even_length(&l).unwrap()] {
            let v = decide(&sys, &d, &l, &cfg).unwrap();
            assert_ne!(v.outcome, Outcome::UltimatelyPeriodic, "{name}");
            assert!(v.witness.is_none());
        }
    }
}

/// State count of the minimal padded machine for `X`, or a certified lower
/// bound on it when the machine is too large to build here.
fn states(sys: &NumerationSystem, s: &UpSetSpec, l: &NumerationLanguage) -> usize {
    let lb = residual_lower_bound(sys, l, |n| s.contains(n), 3, 2);
    if s.period <= 13 {
        let exact = build_up_set_dfa(sys, s, l).unwrap().state_count();
        assert!(lb <= exact, "{s}: {lb} > {exact}");
        return exact;
    }
    lb
}

#[test]
fn residual_bound_is_sound() {
    let (sys, l) = lang("toy");
    for s in [spec(0, 2, &[0], &[]), spec(0, 3, &[0], &[]), spec(4, 6, &[1, 2], &[3])] {
        let exact = build_up_set_dfa(&sys, &s, &l).unwrap().state_count();
        let lb = residual_lower_bound(&sys, &l, |n| s.contains(n), 3, 2);
        assert!(lb <= exact && lb > 1, "{s}: {lb} vs {exact}");
    }
    assert_eq!(residual_lower_bound(&sys, &l, |n| n % 3 == 0, 3, 2), 27);
}

#[test]
fn t1_prime_power_lower_bound() {
    let (sys, l) = lang("toy");
    for p in [5u64, 7, 11, 13] {
        let lambda = lambda_for_prime(&sys, p, LAMBDA_CAP).unwrap();
        let mut q = p;
        let mut mu = 1u32;
        while q <= 216 {
            let n = states(&sys, &spec(0, q, &[0], &[]), &l);
            let bound = p.pow(mu + 1 - lambda.min(mu + 1));
            assert!(n as u64 >= bound, "p={p} μ={mu}: {n} < {bound}");
            q *= p;
            mu += 1;
        }
    }
}

#[test]
fn t2_period_lower_bound() {
    let (sys, l) = lang("toy");
    let z = check_hypotheses(&sys, 200, Some(l.c())).unwrap().z.unwrap();
    let gamma1 = gamma(&sys, 1, &l).unwrap();
    assert_eq!(mod_profile(&sys, 1).unwrap().preperiod, 0);
    let mut checked = 0;
    for e2 in 0..=7u32 {
        for e3 in 0..=4u32 {
            let rho = 2u64.pow(e2) * 3u64.pow(e3);
            if rho > 216 || rho == 1 {
                continue;
            }
            let nu = [(2, e2), (3, e3)];
            let m = big_m(&sys, &nu).unwrap();
            let nx = n_x(&sys, 1, &nu).unwrap();
            if m == 0 || nx < z as i64 {
                continue;
            }
            let len = sys.rep(rho - 1).len();
            for r in [0, 1, rho / 2, rho - 1] {
                let n = states(&sys, &spec(0, rho, &[r], &[]), &l);
                assert!(n * gamma1 >= len + 1, "ρ={rho} r={r}: {n} states");
            }
            checked += 1;
        }
    }
    assert!(checked > 0, "no ρ met the hypotheses");
}
