//! Small-prime checks: transvections from local types, and irreducibility plus
//! primitivity from Frobenius polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::typedetect::{detect_type, TypeSpec, TypeWitness};
use super::CriteriaError;
use crate::arith::{is_irreducible, is_prime_u64, primes_between, PolyZ};
use crate::curve::{CountOptions, CurveSpec, FrobeniusData};

/// Evidence that the mod-`ℓ` image contains a transvection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransvectionEvidence {
    pub ell: u64,
    pub p: u64,
    pub display: String,
    pub witness: TypeWitness,
}

fn require_odd_prime(ell: u64) -> Result<(), CriteriaError> {
    if ell == 2 || !is_prime_u64(ell) {
        return Err(CriteriaError::Ell(ell));
    }
    Ok(())
}

/// Check that `f` has type `1-{2}` at `p` with `p ∤ 2ℓ`.
pub fn transvection_at(f: &PolyZ, ell: u64, p: u64) -> Result<TransvectionEvidence, CriteriaError> {
    require_odd_prime(ell)?;
    if p == 2 || p == ell {
        return Err(CriteriaError::TransvectionPrime { ell, p });
    }
    let witness = detect_type(f, &TypeSpec::new(1, vec![2], p))?;
    Ok(TransvectionEvidence {
        ell,
        p,
        display: witness.display(),
        witness,
    })
}

/// Smallest prime `p < bound`, `p ∤ 2ℓ`, at which `f` has type `1-{2}`.
pub fn transvection_witness(
    f: &PolyZ,
    ell: u64,
    bound: u64,
) -> Result<TransvectionEvidence, CriteriaError> {
    require_odd_prime(ell)?;
    let disc = f.discriminant()?;
    for p in primes_between(3, bound.saturating_sub(1)) {
        // a repeated root mod p forces p | disc f
        if p == ell || !disc.is_multiple_of(&BigInt::from(p)) {
            continue;
        }
        if let Ok(ev) = transvection_at(f, ell, p) {
            return Ok(ev);
        }
    }
    Err(CriteriaError::NoTransvection { ell, bound })
}

/// Irreducibility of the Frobenius polynomial mod `ℓ` and `ℓ ∤ trace`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZywinaEvidence {
    pub ell: u64,
    pub p: u64,
    pub charpoly: String,
    pub charpoly_mod_ell: String,
    pub irreducible_mod_ell: bool,
    pub trace: String,
    pub trace_mod_ell: u64,
    pub passed: bool,
}

/// Evaluate the criterion on an already computed Frobenius polynomial.
pub fn zywina_from_charpoly(
    data: &FrobeniusData,
    ell: u64,
) -> Result<ZywinaEvidence, CriteriaError> {
    require_odd_prime(ell)?;
    if data.p == ell {
        return Err(CriteriaError::FrobeniusPrime { ell, p: data.p });
    }
    let reduced = data.charpoly.reduce(ell);
    let irreducible = is_irreducible(&reduced);
    let trace = data.trace();
    let trace_mod_ell: u64 = trace
        .mod_floor(&BigInt::from(ell))
        .try_into()
        .expect("residue");
    Ok(ZywinaEvidence {
        ell,
        p: data.p,
        charpoly: data.display(),
        charpoly_mod_ell: reduced.display_in("T"),
        irreducible_mod_ell: irreducible,
        trace: trace.to_string(),
        trace_mod_ell,
        passed: irreducible && trace_mod_ell != 0,
    })
}

/// Compute `ch_p` for the curve and test it against `ℓ`.
pub fn zywina_check(
    curve: &CurveSpec,
    ell: u64,
    p: u64,
    opts: &CountOptions,
) -> Result<ZywinaEvidence, CriteriaError> {
    require_odd_prime(ell)?;
    if p == ell {
        return Err(CriteriaError::FrobeniusPrime { ell, p });
    }
    let data = curve.frobenius_charpoly(p, opts)?;
    zywina_from_charpoly(&data, ell)
}

/// Good primes `p != ℓ` in increasing order whose point counts stay under the
/// enumeration cap.
pub fn frobenius_candidates(
    curve: &CurveSpec,
    ell: u64,
    cap: u64,
) -> impl Iterator<Item = u64> + '_ {
    let g = curve.genus as u32;
    (3u64..)
        .take_while(move |&p| p.checked_pow(g).is_some_and(|q| q <= cap))
        .filter(move |&p| p != ell && curve.good_reduction(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evidence_from_known_polynomial() {
        // T^4 - 49T^3 + 1257T^2 - 19649T + 160801 at p = 401, via fabricated counts
        let data = FrobeniusData::from_counts(2, 401, vec![353, 160_915]).unwrap();
        assert_eq!(data.display(), "T^4 - 49T^3 + 1257T^2 - 19649T + 160801");
        let ev = zywina_from_charpoly(&data, 3).unwrap();
        assert!(ev.passed);
        assert_eq!(ev.trace_mod_ell, 1);
        assert!(matches!(
            zywina_from_charpoly(&data, 2),
            Err(CriteriaError::Ell(2))
        ));
        assert!(matches!(
            zywina_from_charpoly(&data, 401),
            Err(CriteriaError::FrobeniusPrime { .. })
        ));
    }

    #[test]
    fn transvection_search_on_product() {
        // (x^2 - 3)(x^2 - 5)(x - 7)(x - 11): type 1-{2} at 3 and at 5
        let f = PolyZ::from_i64(&[-3, 0, 1])
            .mul(&PolyZ::from_i64(&[-5, 0, 1]))
            .mul(&PolyZ::from_i64(&[77, -18, 1]));
        assert_eq!(transvection_witness(&f, 5, 100).unwrap().p, 3);
        assert_eq!(transvection_witness(&f, 3, 100).unwrap().p, 5);
        assert!(transvection_at(&f, 3, 3).is_err());
    }
}
