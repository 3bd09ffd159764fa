use upcheck_padic::*;

fn exact(v: &[Valuation]) -> Vec<u64> {
    v.iter().map(|x| x.exact().expect("below precision")).collect()
}

#[test]
fn reference_tables_41_to_60() {
    let toy = toy_recurrence();
    assert_eq!(
        exact(&toy.valuations(2, 41, 60, 128)),
        [24, 20, 21, 21, 24, 22, 23, 23, 27, 24, 25, 25, 28, 26, 27, 27, 33, 28, 29, 29]
    );
    assert_eq!(
        exact(&toy.valuations(3, 41, 60, 64)),
        [13, 14, 14, 14, 15, 15, 15, 16, 17, 16, 17, 17, 17, 18, 18, 18, 19, 20, 19, 20]
    );
    assert_eq!(
        exact(&ppp_recurrence().valuations(2, 41, 60, 64)),
        [10, 10, 10, 11, 12, 11, 11, 12, 12, 12, 12, 13, 16, 13, 13, 14, 14, 14, 14, 15]
    );
}

#[test]
fn precision_independence() {
    let toy = toy_recurrence();
    let runs: Vec<Vec<Valuation>> = [32, 64, 128]
        .iter()
        .map(|&prec| toy.valuations(2, 0, 200, prec))
        .collect();
    for i in 0..runs[0].len() {
        if let Valuation::Exact(v) = runs[0][i] {
            assert_eq!(runs[1][i], Valuation::Exact(v));
            assert_eq!(runs[2][i], Valuation::Exact(v));
        }
    }
}

#[test]
fn nu3_closed_form_to_3000() {
    let direct = direct_valuations(&toy_recurrence(), 3, 3000);
    for (i, v) in direct.iter().enumerate() {
        assert_eq!(nu3_closed_form(i as u64), *v, "i = {i}");
    }
    assert!(verify_t_period());
}

#[test]
fn nu2_closed_form_to_4096() {
    let zeta = zeta_toy(50).unwrap();
    let direct = direct_valuations(&toy_recurrence(), 2, 4096);
    for i in 10..=4096u64 {
        assert_eq!(
            nu2_closed_form(i, zeta.as_padic()),
            Valuation::Exact(direct[i as usize]),
            "i = {i}"
        );
        if i >= 2 && i % 4 != 1 {
            assert_eq!(direct[i as usize], (i - 1) / 2);
        }
    }
    // at i = 41, ζ ≡ 25 (mod 64) gives 20 + ν_2(16)
    assert_eq!(nu2_closed_form(41, zeta.as_padic()), Valuation::Exact(24));
    assert_eq!(nu2_closed_form(42, zeta.as_padic()), Valuation::Exact(20));
}

#[test]
fn small_direct_valuations() {
    // 25686 = 2 · 3^2 · 1427
    assert_eq!(toy_recurrence().valuation(3, 4, 20), Valuation::Exact(2));
    assert_eq!(toy_recurrence().valuation(2, 4, 20), Valuation::Exact(1));
}

#[test]
fn valuation_peaks_default_tier() {
    let rec = toy_variant_recurrence();
    let pairs = [(67, 44), (2115, 1070), (10307, 5172)];
    assert_eq!(valuation_peaks(&rec, 2, &pairs), vec![true; 3]);
    assert_eq!(valuation_peaks(&rec, 2, &[(67, 43)]), vec![false]);
}

#[test]
#[ignore = "slow tier: run with --ignored"]
fn valuation_peaks_slow_tier() {
    let rec = toy_variant_recurrence();
    let pairs = [(534595, 267318), (2631747, 1315896)];
    assert_eq!(valuation_peaks(&rec, 2, &pairs), vec![true; 2]);
}
