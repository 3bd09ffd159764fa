//! Closed forms for the valuations of the sequence
//! `U_{i+3} = 12 U_{i+2} + 6 U_{i+1} + 12 U_i`, `U = 1, 13, 163, …`.

use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use crate::ext::{ExtElem, ExtField};
use crate::num::{split_p, PadicNum};
use crate::recurrence::Recurrence;

pub fn toy_recurrence() -> Recurrence {
    Recurrence::from_i64(&[12, 6, 12], 0, &[1, 13, 163]).expect("valid")
}

/// Same recurrence started from `1, 2, 3`.
pub fn toy_variant_recurrence() -> Recurrence {
    Recurrence::from_i64(&[12, 6, 12], 0, &[1, 2, 3]).expect("valid")
}

/// `U_{i+4} = 2U_{i+3} + 2U_{i+2} + 2U_i`, `U = 1, 3, 9, 23, …`.
pub fn ppp_recurrence() -> Recurrence {
    Recurrence::from_i64(&[2, 2, 0, 2], 0, &[1, 3, 9, 23]).expect("valid")
}

/// `ν_3(U_i) = ⌊i/3⌋ + [i ≡ 4 (mod 9)]`.
pub fn nu3_closed_form(i: u64) -> u64 {
    i / 3 + u64::from(i % 9 == 4)
}

/// One period of `T_i = U_i / 3^{(i-2)/3}` modulo `9 Z[3^{1/3}]`, as
/// coordinates in the basis `1, 3^{1/3}, 3^{2/3}`.
pub const T_PERIOD: [[u8; 3]; 27] = [
    [0, 0, 1], [0, 4, 0], [1, 0, 0], [0, 0, 7], [0, 3, 0], [1, 0, 0], [0, 0, 2], [0, 2, 0], [4, 0, 0],
    [0, 0, 1], [0, 1, 0], [7, 0, 0], [0, 0, 7], [0, 3, 0], [7, 0, 0], [0, 0, 8], [0, 5, 0], [1, 0, 0],
    [0, 0, 1], [0, 7, 0], [4, 0, 0], [0, 0, 7], [0, 3, 0], [4, 0, 0], [0, 0, 5], [0, 8, 0], [7, 0, 0],
];

fn cube_root_three(prec: i64) -> Arc<ExtField> {
    let z = || PadicNum::zero(3, prec);
    ExtField::new(3, vec![PadicNum::from_int(3, -3, prec), z(), z()]).expect("x^3 - 3 is Eisenstein")
}

/// `T_0 .. T_{n-1}` modulo 9, from
/// `T_{i+3} = 4·3^{2/3} T_{i+2} + 2·3^{1/3} T_{i+1} + 4 T_i`.
pub fn t_sequence_mod9(n: usize) -> Vec<[u8; 3]> {
    let k = cube_root_three(2);
    let t = ExtElem::generator(&k, 2);
    let t2 = t.mul(&t);
    let int = |x: i64| ExtElem::from_int(&k, x, 2);
    let mut seq = vec![t2.clone(), t.mul(&int(13)), int(163)];
    let (a2, a1, a0) = (t2.mul(&int(4)), t.mul(&int(2)), int(4));
    while seq.len() < n {
        let l = seq.len();
        let next = a2.mul(&seq[l - 1]).add(&a1.mul(&seq[l - 2])).add(&a0.mul(&seq[l - 3]));
        seq.push(next);
    }
    seq.truncate(n);
    seq.iter()
        .map(|x| {
            let mut out = [0u8; 3];
            for (j, c) in x.coords().iter().enumerate() {
                out[j] = c.residue(2).expect("integral").to_u8().expect("below 9");
            }
            out
        })
        .collect()
}

/// Recomputes `T_i mod 9` over three full periods and compares with
/// [`T_PERIOD`].
pub fn verify_t_period() -> bool {
    t_sequence_mod9(3 * 27)
        .iter()
        .enumerate()
        .all(|(i, x)| *x == T_PERIOD[i % 27])
}

/// Exact `ν_p(U_i)` for `i ≤ n` from the integer terms.
pub fn direct_valuations(rec: &Recurrence, p: u32, n: usize) -> Vec<u64> {
    rec.terms(n)
        .iter()
        .map(|u| if u.is_zero() { u64::MAX } else { split_p(p, u).0 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_entry_and_small_values() {
        assert_eq!(T_PERIOD[4], [0, 3, 0]);
        assert_eq!(nu3_closed_form(4), 2);
        assert_eq!(nu3_closed_form(6), 2);
        assert_eq!(toy_recurrence().terms(4)[4], 25686.into());
    }

    #[test]
    fn t_period() {
        assert!(verify_t_period());
    }
}
