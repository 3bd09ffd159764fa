use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use upcheck_padic::*;

fn sqrt2(prec: i64) -> Arc<ExtField> {
    ExtField::new(2, vec![PadicNum::from_int(2, -2, prec), PadicNum::zero(2, prec)]).unwrap()
}

fn elem(k: &Arc<ExtField>, a: i64, b: i64, prec: i64) -> ExtElem {
    ExtElem::from_coords(k, vec![PadicNum::from_int(2, a, prec), PadicNum::from_int(2, b, prec)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exp_inverts_log(prec in prop::sample::select(vec![32i64, 64]), a in any::<i32>(), b in any::<i32>()) {
        let k = sqrt2(prec);
        // x = 4(a + b t) has ν_2(x) ≥ 2
        let x = elem(&k, 4 * a as i64, 4 * b as i64, prec);
        let y = ExtElem::from_int(&k, 1, prec).add(&x);
        let back = y.log().unwrap().exp().unwrap();
        let diff = back.sub(&y);
        prop_assert!(diff.is_zero());
        prop_assert!(diff.precision_num() >= 2 * prec - 8);
    }

    #[test]
    fn log_is_additive(a in any::<i32>(), b in any::<i32>(), c in any::<i32>(), d in any::<i32>()) {
        let prec = 64;
        let k = sqrt2(prec);
        let one = ExtElem::from_int(&k, 1, prec);
        let x = one.add(&elem(&k, 2 * a as i64, 2 * b as i64, prec));
        let y = one.add(&elem(&k, 2 * c as i64, 2 * d as i64, prec));
        let lhs = x.mul(&y).log().unwrap();
        let rhs = x.log().unwrap().add(&y.log().unwrap());
        prop_assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn degree_one_field(a in any::<i32>()) {
        // Q_2 itself, presented by the Eisenstein polynomial x - 2
        let k = ExtField::new(2, vec![PadicNum::from_int(2, -2, 64)]).unwrap();
        let x = ExtElem::from_int(&k, 1 + 4 * a as i64, 64);
        let back = x.log().unwrap().exp().unwrap();
        prop_assert!(back.sub(&x).is_zero());
    }
}

#[test]
fn hensel_examples() {
    let p: Vec<BigInt> = [-12, -6, -12, 1].iter().map(|&c| c.into()).collect();
    let r = hensel_root(&p, 2, &BigInt::from(2), 64).unwrap();
    assert_eq!(r.residue() % 4u32, 2u32.into());
}
