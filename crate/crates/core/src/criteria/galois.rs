//! Certificates that `Gal(f) = S_n` from Frobenius cycle types.
//!
//! For `p ∤ lc(f)·disc(f)` the degrees of the irreducible factors of `f mod p`
//! are the cycle lengths of a Frobenius element. An `n`-cycle makes the group
//! transitive, an `(n-1)`-cycle fixing a point then makes it 2-transitive and so
//! primitive, and a primitive group containing a transposition is `S_n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::CriteriaError;
use crate::arith::{factor_mod_p, primes_between, PolyZ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleWitnessKind {
    /// A single `n`-cycle.
    FullCycle,
    /// An `(n-1)`-cycle and a fixed point.
    CycleFixingPoint,
    /// One 2-cycle and odd cycles otherwise; an odd power is a transposition.
    Transposition,
}

impl CycleWitnessKind {
    pub const ALL: [CycleWitnessKind; 3] = [
        CycleWitnessKind::FullCycle,
        CycleWitnessKind::CycleFixingPoint,
        CycleWitnessKind::Transposition,
    ];

    pub fn matches(self, pattern: &[usize], n: usize) -> bool {
        match self {
            CycleWitnessKind::FullCycle => pattern == [n],
            CycleWitnessKind::CycleFixingPoint => n >= 2 && pattern == [1, n - 1],
            CycleWitnessKind::Transposition => {
                pattern.iter().filter(|&&d| d == 2).count() == 1
                    && pattern.iter().all(|&d| d == 2 || d % 2 == 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub kind: CycleWitnessKind,
    pub p: u64,
    /// Factor degrees mod `p`, ascending.
    pub pattern: Vec<usize>,
    /// An independent factorisation (different seed, re-multiplied) agreed.
    pub rechecked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisCertificate {
    pub degree: usize,
    pub witnesses: Vec<CycleWitness>,
    pub primes_scanned: usize,
}

impl GaloisCertificate {
    pub fn primes(&self) -> Vec<u64> {
        self.witnesses.iter().map(|w| w.p).collect()
    }
}

fn pattern(f: &PolyZ, p: u64, seed: u64) -> Result<(Vec<usize>, bool), CriteriaError> {
    let fp = f.reduce(p);
    let fact = factor_mod_p(&fp, seed)?;
    Ok((
        fact.degree_pattern(),
        fact.expand(p) == fp && fact.is_squarefree(),
    ))
}

/// Search primes below `bound` for the three cycle-type witnesses.
pub fn galois_certificate(
    f: &PolyZ,
    bound: u64,
    seed: u64,
) -> Result<GaloisCertificate, CriteriaError> {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return Err(CriteriaError::Degree { genus: 0, got: n });
    }
    let disc = f.discriminant()?;
    if disc.is_zero() {
        return Err(CriteriaError::NotSquarefree);
    }
    let bad = disc * f.leading();
    let mut found: [Option<CycleWitness>; 3] = [None, None, None];
    let mut scanned = 0;
    for p in primes_between(2, bound.saturating_sub(1)) {
        if bad.is_multiple_of(&BigInt::from(p)) {
            continue;
        }
        scanned += 1;
        let (pat, _) = pattern(f, p, seed)?;
        for (slot, kind) in found.iter_mut().zip(CycleWitnessKind::ALL) {
            if slot.is_none() && kind.matches(&pat, n) {
                let (again, sound) = pattern(f, p, seed ^ 0x5eed_cafe)?;
                *slot = Some(CycleWitness {
                    kind,
                    p,
                    rechecked: sound && again == pat,
                    pattern: pat.clone(),
                });
            }
        }
        if found.iter().all(Option::is_some) {
            let witnesses: Vec<CycleWitness> = found.into_iter().flatten().collect();
            if witnesses.iter().any(|w| !w.rechecked) {
                return Err(CriteriaError::Internal(
                    "cycle type changed under refactorisation".into(),
                ));
            }
            return Ok(GaloisCertificate {
                degree: n,
                witnesses,
                primes_scanned: scanned,
            });
        }
    }
    let missing = CycleWitnessKind::ALL
        .iter()
        .zip(&found)
        .filter(|(_, w)| w.is_none())
        .map(|(k, _)| *k)
        .collect();
    Err(CriteriaError::GaloisInconclusive { bound, missing })
}
