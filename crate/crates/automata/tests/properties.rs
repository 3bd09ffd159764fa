use proptest::prelude::*;
use upcheck_automata::{reverse_determinize, Digit, Dfa, Finiteness, ProductMode};

fn arb_dfa(max_states: usize, max_alphabet: usize) -> impl Strategy<Value = Dfa> {
    (1..=max_states, 1..=max_alphabet).prop_flat_map(|(n, m)| {
        (
            proptest::collection::vec(0..n, n * m),
            proptest::collection::vec(any::<bool>(), n),
            0..n,
        )
            .prop_map(move |(trans, accepting, initial)| {
                Dfa::from_parts(m, initial, accepting, trans).unwrap()
            })
    })
}

fn same_alphabet_pair() -> impl Strategy<Value = (Dfa, Dfa)> {
    (1usize..=3).prop_flat_map(|m| {
        let one = (1usize..=6).prop_flat_map(move |n| {
            (
                proptest::collection::vec(0..n, n * m),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(move |(t, a)| Dfa::from_parts(m, 0, a, t).unwrap())
        });
        (one.clone(), one)
    })
}

fn words_up_to(m: usize, len: usize) -> Vec<Vec<Digit>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for d in 0..m as Digit {
                let mut v: Vec<Digit> = w.clone();
                v.push(d);
                next.push(v);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn minimize_is_idempotent_and_language_preserving(a in arb_dfa(8, 4)) {
        let min = a.minimize();
        prop_assert_eq!(min.minimize(), min.clone());
        prop_assert!(min.state_count() <= a.state_count());
        let len = if a.alphabet() <= 2 { 12 } else if a.alphabet() == 3 { 8 } else { 6 };
        for w in words_up_to(a.alphabet(), len) {
            prop_assert_eq!(min.accepts(&w), a.accepts(&w));
        }
        prop_assert!(min.equivalent(&a).unwrap());
    }

    #[test]
    fn products_match_brute_force((a, b) in same_alphabet_pair()) {
        let and = a.product(&b, ProductMode::And).unwrap();
        let diff = a.product(&b, ProductMode::Diff).unwrap();
        let len = if a.alphabet() <= 2 { 10 } else { 6 };
        for w in words_up_to(a.alphabet(), len) {
            prop_assert_eq!(and.accepts(&w), a.accepts(&w) && b.accepts(&w));
            prop_assert_eq!(diff.accepts(&w), a.accepts(&w) && !b.accepts(&w));
        }
    }

    #[test]
    fn finiteness_matches_pumping_bound(a in arb_dfa(6, 3)) {
        let n = a.state_count();
        let long = words_up_to(a.alphabet(), 2 * n)
            .into_iter()
            .any(|w| w.len() >= n && a.accepts(&w));
        match a.is_finite(1 << 16).unwrap() {
            Finiteness::Finite(words) => {
                prop_assert!(!long);
                let brute: Vec<Vec<Digit>> = words_up_to(a.alphabet(), n)
                    .into_iter()
                    .filter(|w| a.accepts(w))
                    .collect();
                prop_assert_eq!(words.len(), brute.len());
                for w in &words {
                    prop_assert!(a.accepts(w));
                }
            }
            Finiteness::Infinite { prefix, cycle, suffix } => {
                prop_assert!(long);
                prop_assert!(!cycle.is_empty());
                for k in 0..4 {
                    let mut w = prefix.clone();
                    for _ in 0..k {
                        w.extend_from_slice(&cycle);
                    }
                    w.extend_from_slice(&suffix);
                    prop_assert!(a.accepts(&w));
                }
            }
        }
    }

    #[test]
    fn reversal_matches_mirrored_words(a in arb_dfa(6, 2)) {
        let r = reverse_determinize(&a.to_nfa(), 1 << 12).unwrap();
        for w in words_up_to(a.alphabet(), 10) {
            let mirrored: Vec<Digit> = w.iter().rev().copied().collect();
            prop_assert_eq!(r.accepts(&w), a.accepts(&mirrored));
        }
    }

    #[test]
    fn text_round_trip(a in arb_dfa(6, 4)) {
        let back = Dfa::from_text(&a.to_text()).unwrap();
        prop_assert_eq!(back, a);
    }
}
