//! The six large-prime conditions on `f` and their evidence.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::typedetect::{detect_type, TypeSpec, TypeWitness};
use super::CriteriaError;
use crate::arith::{is_prime, is_prime_u64, is_primitive_root, PolyZ, Primality};

/// One `(prime, exponent)` entry of a claimed discriminant factorisation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: String,
    pub exponent: u32,
}

/// Auxiliary primes for the large-prime conditions, plus optional data for the
/// small-prime checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnniChoices {
    #[serde(default = "schema_version")]
    pub schema: u32,
    pub q: [u64; 3],
    pub p_t: [u64; 2],
    pub p2: u64,
    pub p3: u64,
    pub disc_factorization: Vec<PrimePower>,
    /// Odd primes handled individually; defaults to the exceptional set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub small_primes: Option<Vec<u64>>,
    /// `ℓ → p`: good prime whose Frobenius polynomial is irreducible mod `ℓ`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub frobenius_primes: BTreeMap<u64, u64>,
    /// `ℓ → p`: prime with type `1-{2}` and `p ∤ 2ℓ`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub transvection_primes: BTreeMap<u64, u64>,
    /// Optional substitution `x → x + c` applied before checking condition (5).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<i64>,
}

fn schema_version() -> u32 {
    1
}

impl AnniChoices {
    pub fn from_json(s: &str) -> Result<Self, CriteriaError> {
        let c: AnniChoices =
            serde_json::from_str(s).map_err(|e| CriteriaError::Choices(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    /// Every listed auxiliary prime must be prime, and the claimed factorisation
    /// must be well formed.
    pub fn validate(&self) -> Result<(), CriteriaError> {
        if self.schema != 1 {
            return Err(CriteriaError::Choices(format!(
                "unsupported schema {}",
                self.schema
            )));
        }
        let named = self
            .q
            .iter()
            .chain(&self.p_t)
            .chain([&self.p2, &self.p3])
            .chain(self.small_primes.iter().flatten())
            .chain(self.frobenius_primes.iter().flat_map(|(a, b)| [a, b]))
            .chain(self.transvection_primes.iter().flat_map(|(a, b)| [a, b]));
        for &n in named {
            if !is_prime_u64(n) {
                return Err(CriteriaError::Choices(format!("{n} is not prime")));
            }
        }
        let mut seen = Vec::new();
        for pp in &self.disc_factorization {
            let v: BigInt = pp
                .prime
                .trim()
                .parse()
                .map_err(|_| CriteriaError::Choices(format!("bad factor {:?}", pp.prime)))?;
            if v <= BigInt::one() || pp.exponent == 0 {
                return Err(CriteriaError::Choices(format!(
                    "bad factor {}^{}",
                    pp.prime, pp.exponent
                )));
            }
            if seen.contains(&v) {
                return Err(CriteriaError::Choices(format!("factor {v} listed twice")));
            }
            seen.push(v);
        }
        Ok(())
    }

    pub fn small_primes_or(&self, g: usize) -> Vec<u64> {
        self.small_primes
            .clone()
            .unwrap_or_else(|| exceptional_primes(g, self))
    }
}

/// Odd primes not covered by the large-prime conditions: odd `ℓ ≤ g` together
/// with `3, q_1, q_2, q_3, p_2, p_3`.
pub fn exceptional_primes(g: usize, choices: &AnniChoices) -> Vec<u64> {
    let mut out: Vec<u64> = (3..=g as u64).filter(|&l| is_prime_u64(l)).collect();
    out.push(3);
    out.extend(choices.q);
    out.push(choices.p2);
    out.push(choices.p3);
    out.retain(|&l| l != 2);
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionOutcome {
    pub index: u8,
    pub statement: String,
    pub passed: bool,
    pub evidence: Vec<String>,
}

/// A type witness found while checking conditions (2)–(4).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedWitness {
    pub condition: u8,
    pub spec: TypeSpec,
    pub witness: Option<TypeWitness>,
    pub display: Option<String>,
    pub failure: Option<String>,
}

/// One coefficient congruence of condition (5).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientCheck {
    pub index: usize,
    pub residue: u64,
    pub required: u64,
    pub modulus: u64,
    pub passed: bool,
}

/// Validation of the claimed discriminant factorisation for condition (6).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscCheck {
    pub discriminant: String,
    pub sign: i8,
    pub product_matches: bool,
    /// Factors proven prime (deterministic range) or passing the probable-prime test.
    pub primality: Vec<(String, Primality)>,
    pub squared_outside_allowed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub genus: usize,
    pub conditions: Vec<ConditionOutcome>,
    pub witnesses: Vec<NamedWitness>,
    pub coefficients: Vec<CoefficientCheck>,
    /// Shift `c` (if any) applied before condition (5).
    pub shift: Option<i64>,
    /// Some `c ∈ [0, 2^{2g+2})` with `f(x + c)` satisfying condition (5), if one exists.
    pub shift_search: Option<u64>,
    pub disc: DiscCheck,
    pub exceptional_primes: Vec<u64>,
}

impl ConditionReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<u8> {
        self.conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.index)
            .collect()
    }

    pub fn condition(&self, index: u8) -> &ConditionOutcome {
        &self.conditions[index as usize - 1]
    }
}

fn witness_for(f: &PolyZ, condition: u8, spec: TypeSpec) -> NamedWitness {
    match detect_type(f, &spec) {
        Ok(w) => NamedWitness {
            condition,
            display: Some(w.display()),
            spec,
            witness: Some(w),
            failure: None,
        },
        Err(e) => NamedWitness {
            condition,
            spec,
            witness: None,
            display: None,
            failure: Some(e.to_string()),
        },
    }
}

fn witness_evidence(w: &NamedWitness) -> String {
    match (&w.display, &w.failure) {
        (Some(d), _) => format!("type {}: {}", w.spec.label(), d),
        (_, Some(e)) => format!("type {} fails: {}", w.spec.label(), e),
        _ => unreachable!(),
    }
}

fn primitive_root_evidence(p: u64, qs: &[u64]) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut ev = Vec::new();
    for &q in qs {
        let r = !p.is_multiple_of(q) && is_primitive_root(p, q).unwrap_or(false);
        ok &= r;
        ev.push(format!(
            "{p} {} a primitive root mod {q}",
            if r { "is" } else { "is not" }
        ));
    }
    (ok, ev)
}

/// Coefficient congruences modulo `2^{2g+2}`: `a_0 ≡ 2^{2g}`, `a_{2g+1} ≡ 2`,
/// `a_i ≡ 0 (mod 2^{2g+2-i})` for `1 <= i <= 2g`; the polynomial must be monic.
pub fn condition5_checks(f: &PolyZ, g: usize) -> Vec<CoefficientCheck> {
    let n = 2 * g + 2;
    let top = 1u64 << n;
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let (modulus, required) = match i {
            0 => (top, 1u64 << (2 * g)),
            i if i == n - 1 => (top, 2),
            i if i == n => (top, 1),
            i => (1u64 << (n - i), 0),
        };
        let residue = f.coeff(i).mod_floor(&BigInt::from(modulus));
        let residue: u64 = residue.try_into().expect("residue below modulus");
        out.push(CoefficientCheck {
            index: i,
            residue,
            required,
            modulus,
            passed: residue == required,
        });
    }
    out
}

/// Smallest `c ∈ [0, 2^{2g+2})` with `f(x + c)` passing condition (5). The
/// conditions only depend on `c mod 2^{2g+2}`, so `None` rules out every
/// integral translate.
pub fn condition5_shift_search(f: &PolyZ, g: usize) -> Option<u64> {
    (0..1u64 << (2 * g + 2)).find(|&c| {
        condition5_checks(&f.shift(&BigInt::from(c)), g)
            .iter()
            .all(|c| c.passed)
    })
}

fn disc_check(f: &PolyZ, choices: &AnniChoices) -> Result<DiscCheck, CriteriaError> {
    let disc = f.discriminant()?;
    let mut prod = BigInt::one();
    let mut primality = Vec::new();
    let mut squared = Vec::new();
    let allowed = [
        BigInt::from(2u32),
        BigInt::from(choices.p2),
        BigInt::from(choices.p3),
    ];
    for pp in &choices.disc_factorization {
        let q: BigInt = pp
            .prime
            .trim()
            .parse()
            .map_err(|_| CriteriaError::Choices(pp.prime.clone()))?;
        prod *= q.pow(pp.exponent);
        primality.push((q.to_string(), is_prime(&q)?));
        if pp.exponent >= 2 && !allowed.contains(&q) {
            squared.push(format!("{q}^{}", pp.exponent));
        }
    }
    Ok(DiscCheck {
        sign: if disc.is_negative() { -1 } else { 1 },
        product_matches: prod == disc.abs(),
        discriminant: disc.to_string(),
        primality,
        squared_outside_allowed: squared,
    })
}

/// Evaluate conditions (1)–(6) for `f` of degree `2g + 2` with the given choices.
pub fn check_anni_conditions(
    f: &PolyZ,
    g: usize,
    choices: &AnniChoices,
) -> Result<ConditionReport, CriteriaError> {
    choices.validate()?;
    let n = 2 * g + 2;
    if f.degree() != Some(n) {
        return Err(CriteriaError::Degree {
            genus: g,
            got: f.degree().unwrap_or(0),
        });
    }
    if f.discriminant()?.is_zero() {
        return Err(CriteriaError::NotSquarefree);
    }
    let [q1, q2, q3] = choices.q;
    let nn = n as u64;
    let mut conditions = Vec::with_capacity(6);
    let mut witnesses = Vec::new();

    // (1)
    let c1 = q1 <= q2 && q2 < q3 && q3 < q1 + q2 && q1 + q2 == nn;
    conditions.push(ConditionOutcome {
        index: 1,
        statement: "primes q1 <= q2 < q3 < q1 + q2 = 2g + 2".into(),
        passed: c1,
        evidence: vec![format!(
            "q = ({q1}, {q2}, {q3}), q1 + q2 = {}, 2g + 2 = {nn}",
            q1 + q2
        )],
    });

    // (2)
    let [pa, pb] = choices.p_t;
    let mut ev = vec![format!("p_t = ({pa}, {pb}), g = {g}")];
    let mut c2 = pa != pb && pa > g as u64 && pb > g as u64;
    if pa == pb {
        ev.push("the two primes coincide".into());
    }
    for p in [pa, pb] {
        let w = witness_for(f, 2, TypeSpec::new(1, vec![2], p));
        c2 &= w.witness.is_some();
        ev.push(witness_evidence(&w));
        witnesses.push(w);
    }
    conditions.push(ConditionOutcome {
        index: 2,
        statement: "two distinct primes p_t1, p_t2 > g with f of type 1-{2}".into(),
        passed: c2,
        evidence: ev,
    });

    // (3)
    let p2 = choices.p2;
    let (roots_ok, mut ev) = primitive_root_evidence(p2, &[q1, q2, q3]);
    let w = witness_for(f, 3, TypeSpec::new(1, vec![q1, q2], p2));
    let c3 = p2 > nn && roots_ok && w.witness.is_some();
    ev.insert(
        0,
        format!(
            "p2 = {p2} {} 2g + 2 = {nn}",
            if p2 > nn { ">" } else { "<=" }
        ),
    );
    ev.push(witness_evidence(&w));
    witnesses.push(w);
    conditions.push(ConditionOutcome {
        index: 3,
        statement: "p2 > 2g + 2, primitive root mod q1, q2, q3, f of type 1-{q1, q2} at p2".into(),
        passed: c3,
        evidence: ev,
    });

    // (4)
    let p3 = choices.p3;
    let (roots_ok, mut ev) = primitive_root_evidence(p3, &[q3]);
    let w = witness_for(f, 4, TypeSpec::new(2, vec![q3], p3));
    let c4 = p3 > nn && roots_ok && w.witness.is_some();
    ev.insert(
        0,
        format!(
            "p3 = {p3} {} 2g + 2 = {nn}",
            if p3 > nn { ">" } else { "<=" }
        ),
    );
    ev.push(witness_evidence(&w));
    witnesses.push(w);
    conditions.push(ConditionOutcome {
        index: 4,
        statement: "p3 > 2g + 2, primitive root mod q3, f of type 2-{q3} at p3".into(),
        passed: c4,
        evidence: ev,
    });

    // (5)
    let model = match choices.shift {
        Some(c) => f.shift(&BigInt::from(c)),
        None => f.clone(),
    };
    let coefficients = condition5_checks(&model, g);
    let c5 = coefficients.iter().all(|c| c.passed);
    let shift_search = condition5_shift_search(f, g);
    let mut ev: Vec<String> = coefficients
        .iter()
        .map(|c| {
            format!(
                "a_{} = {} mod {} (need {}): {}",
                c.index,
                c.residue,
                c.modulus,
                c.required,
                if c.passed { "ok" } else { "fails" }
            )
        })
        .collect();
    if let Some(c) = choices.shift {
        ev.insert(0, format!("checked on f(x + {c})"));
    }
    ev.push(match shift_search {
        Some(c) => format!("f(x + {c}) satisfies the congruences"),
        None => format!(
            "no translate f(x + c), 0 <= c < {}, satisfies the congruences",
            1u64 << n
        ),
    });
    conditions.push(ConditionOutcome {
        index: 5,
        statement:
            "a_0 = 2^(2g), a_(2g+1) = 2, a_i = 0 mod 2^(2g+2-i) for 1 <= i <= 2g, all mod 2^(2g+2)"
                .into(),
        passed: c5,
        evidence: ev,
    });

    // (6)
    let disc = disc_check(f, choices)?;
    let primes_ok = disc.primality.iter().all(|(_, v)| v.is_prime_like());
    let c6 = disc.product_matches && primes_ok && disc.squared_outside_allowed.is_empty();
    let mut ev = vec![format!(
        "|disc f| {} the claimed product",
        if disc.product_matches {
            "equals"
        } else {
            "differs from"
        }
    )];
    for (q, v) in &disc.primality {
        if *v != Primality::Prime {
            ev.push(format!("{q}: {v:?}"));
        }
    }
    if !disc.squared_outside_allowed.is_empty() {
        ev.push(format!(
            "square factors outside {{2, p2, p3}}: {}",
            disc.squared_outside_allowed.join(", ")
        ));
    }
    conditions.push(ConditionOutcome {
        index: 6,
        statement: "p^2 does not divide disc f for every prime p outside {2, p2, p3}".into(),
        passed: c6,
        evidence: ev,
    });

    Ok(ConditionReport {
        genus: g,
        conditions,
        witnesses,
        coefficients,
        shift: choices.shift,
        shift_search,
        disc,
        exceptional_primes: exceptional_primes(g, choices),
    })
}
