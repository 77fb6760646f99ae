//! Multifactor Hensel lifting from `F_p` to `Z/p^k`.

use super::int::inv_mod;
use super::polymod::{product, PolyMod};
use super::polyz::PolyZ;
use super::ArithError;

/// Lift a coprime factorisation of `f mod p` to one modulo `p^k`.
///
/// `factors` must be monic, pairwise coprime mod `p`, with product equal to
/// `lc(f)^{-1} f mod p`. The lifted factors are monic and their product is
/// `lc(f)^{-1} f mod p^k`.
pub fn hensel_lift(
    f: &PolyZ,
    factors: &[PolyMod],
    p: u64,
    k: u32,
) -> Result<Vec<PolyMod>, ArithError> {
    if k == 0 {
        return Err(ArithError::ZeroDegree);
    }
    let pk = p.checked_pow(k).ok_or(ArithError::ModulusOverflow)?;
    let f_pk = f.reduce(pk);
    let lc_inv = inv_mod(f_pk.leading(), pk).ok_or(ArithError::NonUnitLeading)?;
    let target = f_pk.scale(lc_inv);

    for g in factors {
        if g.modulus() != p || !g.is_monic() {
            return Err(ArithError::BadLiftInput(
                "factors must be monic mod p".into(),
            ));
        }
    }
    if product(p, factors) != target.reduce(p) {
        return Err(ArithError::BadLiftInput(
            "factor product differs from f mod p".into(),
        ));
    }
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            if !factors[i].gcd(&factors[j]).is_one() {
                return Err(ArithError::NotCoprime {
                    a: i as u64,
                    m: j as u64,
                });
            }
        }
    }

    // peel off one factor at a time: target = g_0 * (rest), rest = g_1 * (rest'), ...
    let mut out = Vec::with_capacity(factors.len());
    let mut remaining = target;
    for i in 0..factors.len() {
        if i + 1 == factors.len() {
            out.push(remaining.clone());
            break;
        }
        let cofactor_mod_p = product(p, &factors[i + 1..]);
        let (g, h) = lift_pair(&remaining, &factors[i], &cofactor_mod_p, p, k);
        out.push(g);
        remaining = h;
    }
    if factors.is_empty() && remaining.deg() > 0 {
        return Err(ArithError::BadLiftInput("empty factor list".into()));
    }
    Ok(out)
}

/// Linear Hensel lifting of `f ≡ g·h (mod p)` with `g, h` monic and coprime.
fn lift_pair(f: &PolyMod, g0: &PolyMod, h0: &PolyMod, p: u64, k: u32) -> (PolyMod, PolyMod) {
    let pk = f.modulus();
    let (one, _, t) = g0.ext_gcd(h0);
    debug_assert!(one.is_one());
    let mut g = PolyMod::new(pk, g0.coeffs().to_vec());
    let mut h = PolyMod::new(pk, h0.coeffs().to_vec());
    let mut pj = p;
    for _ in 1..k {
        // e = (f - g h) / p^j  (mod p)
        let diff = f.sub(&g.mul(&h));
        let e = PolyMod::new(p, diff.coeffs().iter().map(|c| c / pj).collect());
        // dg = t e mod g0, dh = (e - dg h0) / g0
        let dg = t.mul(&e).rem(g0);
        let dh = e.sub(&dg.mul(h0)).exact_div(g0);
        g = g.add(&PolyMod::new(
            pk,
            dg.coeffs().iter().map(|c| c * pj).collect(),
        ));
        h = h.add(&PolyMod::new(
            pk,
            dh.coeffs().iter().map(|c| c * pj).collect(),
        ));
        pj *= p;
    }
    (g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn quadratic_root_lift() {
        // x^2 - 2 = (x - 3)(x - 4) mod 7 lifts to sqrt(2) in Z/7^4
        let f = PolyZ::from_i64(&[-2, 0, 1]);
        let lifted =
            hensel_lift(&f, &[PolyMod::linear(7, 3), PolyMod::linear(7, 4)], 7, 4).unwrap();
        let m = 7u64.pow(4);
        assert_eq!(lifted[0].mul(&lifted[1]), f.reduce(m));
        let r = (m - lifted[0].coeff(0)) % m;
        assert_eq!((r * r) % m, 2);
        assert_eq!(r % 7, 3);
    }

    #[test]
    fn trivial_cofactor() {
        let f = PolyZ::new(vec![BigInt::from(10), BigInt::from(3), BigInt::from(1)]);
        let fm = f.reduce(5).monic().unwrap();
        let lifted = hensel_lift(&f, &[fm], 5, 3).unwrap();
        assert_eq!(lifted, vec![f.reduce(125)]);
    }

    #[test]
    fn non_coprime_rejected() {
        let f = PolyZ::from_i64(&[1, 2, 1]);
        let r = hensel_lift(&f, &[PolyMod::linear(3, 2), PolyMod::linear(3, 2)], 3, 2);
        assert!(matches!(r, Err(ArithError::NotCoprime { .. })));
    }
}
