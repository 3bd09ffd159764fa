use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::PadicError;
use crate::int::PadicInt;
use crate::num::{modinv, pow_p, split_p};

/// Evaluates `poly` (constant term first) and its derivative at `x`.
fn eval(poly: &[BigInt], x: &BigInt) -> (BigInt, BigInt) {
    let mut f = BigInt::zero();
    let mut df = BigInt::zero();
    for c in poly.iter().rev() {
        df = df * x + &f;
        f = f * x + c;
    }
    (f, df)
}

fn val(p: u32, n: &BigInt) -> Option<u64> {
    (!n.is_zero()).then(|| split_p(p, n).0)
}

/// Lifts `seed` to the root of `poly` it approximates, modulo `p^prec`.
///
/// Requires `v(P(seed)) > 2 v(P'(seed))`; the derivative need not be a
/// unit. Newton steps keep `v(P'(x))` fixed and double the accuracy.
pub fn hensel_root(poly: &[BigInt], p: u32, seed: &BigInt, prec: u64) -> Result<PadicInt, PadicError> {
    let (f0, df0) = eval(poly, seed);
    let vf = val(p, &f0);
    let Some(vd) = val(p, &df0) else {
        return Err(PadicError::HenselConditionFails {
            seed: seed.to_string(),
            value_val: vf.map_or("inf".into(), |v| v.to_string()),
            deriv_val: "inf".into(),
        });
    };
    if let Some(v) = vf {
        if v <= 2 * vd {
            return Err(PadicError::HenselConditionFails {
                seed: seed.to_string(),
                value_val: v.to_string(),
                deriv_val: vd.to_string(),
            });
        }
    }
    let work = prec + 2 * vd + 2;
    let modulus = pow_p(p, work);
    let shift = pow_p(p, vd);
    let mut x = seed.mod_floor(&modulus);
    for _ in 0..256 {
        let (f, df) = eval(poly, &x);
        let f = f.mod_floor(&modulus);
        match val(p, &f) {
            None => break,
            Some(v) if v >= prec + vd => break,
            _ => {}
        }
        let unit = (df / &shift).mod_floor(&modulus);
        let step = (f / &shift) * modinv(&unit, &modulus);
        x = (x - step).mod_floor(&modulus);
    }
    Ok(PadicInt::new(p, &x, prec))
}
