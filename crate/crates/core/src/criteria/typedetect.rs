//! Detection of the local factorisation type `t-{q_1, …, q_k}` at a prime `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    factor_mod_p, hensel_lift, inv_mod, is_prime_u64, product, ArithError, PolyMod, PolyZ,
};

/// Requested shape: `t`-Eisenstein factors of prime degrees `q_i` at the prime `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeSpec {
    pub t: u32,
    pub q: Vec<u64>,
    pub p: u64,
}

impl TypeSpec {
    pub fn new(t: u32, q: Vec<u64>, p: u64) -> Self {
        TypeSpec { t, q, p }
    }

    /// `t-{q_1, …, q_k} at p`
    pub fn label(&self) -> String {
        let qs: Vec<String> = self.q.iter().map(u64::to_string).collect();
        format!("{}-{{{}}} at {}", self.t, qs.join(", "), self.p)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeFailure {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid type parameters: {0}")]
    Parameters(String),
    #[error("p = {0} divides the leading coefficient")]
    LeadingDivisible(u64),
    #[error("f is not squarefree")]
    NotSquarefree,
    #[error("precision p^(t+2) exceeds machine range for p = {p}, t = {t}")]
    Precision { p: u64, t: u32 },
    #[error("no candidate roots: repeated factors mod p have multiplicities {found:?}, expected {expected:?}")]
    NoCandidateRoots { expected: Vec<u64>, found: Vec<u32> },
    #[error("repeated factor of degree {degree} (multiplicity {multiplicity}) is not linear")]
    NonlinearRepeatedFactor { degree: usize, multiplicity: u32 },
    #[error("valuation pattern mismatch at root {root} mod p (degree {q}): no shift makes the factor t-Eisenstein; closest {closest:?}")]
    NoShift {
        root: u64,
        q: u64,
        closest: Vec<Option<u32>>,
    },
    #[error("cofactor h is not separable mod p")]
    CofactorNotSeparable,
    #[error("cofactor h vanishes at the root {0} mod p")]
    CofactorVanishes(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// One factor `g_i(x - α_i)` of the witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinFactor {
    pub q: u64,
    /// `α_i mod p`
    pub root: u64,
    /// `α_i mod p^{t+1}`
    pub shift: u64,
    /// Hensel-lifted factor `g_i(x - α_i) mod p^{t+2}`, lowest degree first.
    pub lifted: Vec<u64>,
    /// Depressed factor `g_i(x) mod p^{t+1}`, lowest degree first.
    pub depressed: Vec<u64>,
    /// `v_p` of each depressed coefficient below the leading one; `None` means
    /// divisible by `p^{t+1}`.
    pub valuations: Vec<Option<u32>>,
}

/// Certificate that `f` has the requested type at `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeWitness {
    pub spec: TypeSpec,
    /// Factors are known modulo `p^precision`, with `precision = t + 2`.
    pub precision: u32,
    pub factors: Vec<EisensteinFactor>,
    /// Cofactor `h mod p^{t+2}`, lowest degree first.
    pub cofactor: Vec<u64>,
}

impl TypeWitness {
    fn modulus(&self, e: u32) -> u64 {
        self.spec.p.pow(e)
    }

    /// `h · ∏ g_i(x - α_i)` modulo `p^{t+2}`.
    pub fn product(&self) -> PolyMod {
        let m = self.modulus(self.precision);
        let mut out = PolyMod::new(m, self.cofactor.clone());
        for f in &self.factors {
            out = out.mul(&PolyMod::new(m, f.lifted.clone()));
        }
        out
    }

    /// Re-check the witness against `f` from scratch: product, valuations,
    /// distinct roots, separability of `h`, `h(α_i) ≢ 0`.
    pub fn verify(&self, f: &PolyZ) -> bool {
        let p = self.spec.p;
        let t = self.spec.t;
        let m = self.modulus(self.precision);
        let Some(target) = normalised(f, m) else {
            return false;
        };
        if self.product() != target {
            return false;
        }
        let low = self.modulus(t + 1);
        for fac in &self.factors {
            let depressed = PolyMod::new(m, fac.lifted.clone())
                .shift(fac.shift)
                .reduce(low);
            if depressed.coeffs() != fac.depressed.as_slice()
                || !eisenstein(&depressed, p, t, fac.q)
            {
                return false;
            }
            if fac.shift % p != fac.root {
                return false;
            }
        }
        let mut roots: Vec<u64> = self.factors.iter().map(|f| f.root).collect();
        roots.sort_unstable();
        roots.dedup();
        if roots.len() != self.factors.len() {
            return false;
        }
        let h = PolyMod::new(p, self.cofactor.clone());
        separable(&h) && self.factors.iter().all(|f| h.eval(f.root) != 0)
    }

    /// Human-readable factorisation modulo `p^{t+1}` in symmetric residues, e.g.
    /// `(x - 1)(x^5 - 49) mod 7^3`.
    pub fn display(&self) -> String {
        let p = self.spec.p;
        let low = self.modulus(self.spec.t + 1);
        let mut parts = Vec::new();
        let h = PolyMod::new(self.modulus(self.precision), self.cofactor.clone()).reduce(low);
        if h.deg() > 0 {
            parts.push(format!("({})", h.lift_symmetric().display_in("x")));
        }
        for fac in &self.factors {
            let g = PolyMod::new(low, fac.depressed.clone()).lift_symmetric();
            let a = symmetric(fac.shift, low);
            let var = if a.is_zero() {
                "x".to_string()
            } else if a > BigInt::zero() {
                format!("(x - {a})")
            } else {
                format!("(x + {})", -a)
            };
            parts.push(format!("({})", g.display_in(&var)));
        }
        format!("{} mod {}^{}", parts.concat(), p, self.spec.t + 1)
    }
}

fn symmetric(c: u64, m: u64) -> BigInt {
    if c > m / 2 {
        BigInt::from(c) - BigInt::from(m)
    } else {
        BigInt::from(c)
    }
}

/// `lc(f)^{-1} f mod m`, or `None` when the leading coefficient is not a unit.
fn normalised(f: &PolyZ, m: u64) -> Option<PolyMod> {
    let fm = f.reduce(m);
    let inv = inv_mod(fm.leading(), m)?;
    Some(fm.scale(inv))
}

fn separable(h: &PolyMod) -> bool {
    h.deg() == 0 || h.gcd(&h.derivative()).is_one()
}

fn valuation_below(c: u64, p: u64, cap: u32) -> Option<u32> {
    if c == 0 {
        return None;
    }
    let mut v = 0;
    let mut c = c;
    while c.is_multiple_of(p) && v < cap {
        c /= p;
        v += 1;
    }
    Some(v)
}

fn valuation_table(depressed: &PolyMod, p: u64, t: u32, q: u64) -> Vec<Option<u32>> {
    (0..q as usize)
        .map(|j| valuation_below(depressed.coeff(j), p, t + 1))
        .collect()
}

/// `v(a_0) = t` and `v(a_j) >= t` for `0 < j < q`, read modulo `p^{t+1}`.
fn eisenstein(depressed: &PolyMod, p: u64, t: u32, q: u64) -> bool {
    if depressed.deg() != q as usize || !depressed.is_monic() {
        return false;
    }
    let table = valuation_table(depressed, p, t, q);
    table[0] == Some(t) && table[1..].iter().all(|v| v.is_none_or(|v| v >= t))
}

/// Score used to report the closest miss when no shift works.
fn miss_score(table: &[Option<u32>], t: u32) -> u32 {
    let cap = |v: &Option<u32>| v.unwrap_or(t + 1).min(t);
    let head = if table[0] == Some(t) {
        t + 1
    } else {
        cap(&table[0])
    };
    head + table[1..].iter().map(cap).sum::<u32>()
}

/// Decide whether `f` has type `t-{q_1, …, q_k}` at `p`, returning a witness.
///
/// Factors `f mod p`; every repeated factor must be `(x - α_i)^{q_i}` with the
/// multiplicities matching the requested `q_i`. The coprime split is lifted to
/// `p^{t+2}` and each lifted factor is depressed by every `α ≡ α_i (mod p)`
/// modulo `p^{t+1}` until the `t`-Eisenstein valuations appear.
pub fn detect_type(f: &PolyZ, spec: &TypeSpec) -> Result<TypeWitness, TypeFailure> {
    let p = spec.p;
    let t = spec.t;
    if !is_prime_u64(p) {
        return Err(TypeFailure::NotPrime(p));
    }
    if t == 0 {
        return Err(TypeFailure::Parameters("t must be at least 1".into()));
    }
    if spec.q.is_empty() {
        return Err(TypeFailure::Parameters(
            "at least one degree q_i is required".into(),
        ));
    }
    if let Some(&q) = spec.q.iter().find(|&&q| !is_prime_u64(q)) {
        return Err(TypeFailure::Parameters(format!("degree {q} is not prime")));
    }
    if f.leading().is_multiple_of(&BigInt::from(p)) {
        return Err(TypeFailure::LeadingDivisible(p));
    }
    if f.discriminant().map_or(true, |d| d.is_zero()) {
        return Err(TypeFailure::NotSquarefree);
    }
    let precision = t + 2;
    let big = p
        .checked_pow(precision)
        .filter(|&m| m < (1 << 40))
        .ok_or(TypeFailure::Precision { p, t })?;
    let low = p.pow(t + 1);

    let fp = normalised(f, p).expect("leading coefficient is a unit");
    let fact = factor_mod_p(&fp, 0)?;
    let mut repeated = Vec::new();
    let mut simple = Vec::new();
    for (g, e) in &fact.factors {
        if *e == 1 {
            simple.push(g.clone());
        } else if g.deg() != 1 {
            return Err(TypeFailure::NonlinearRepeatedFactor {
                degree: g.deg(),
                multiplicity: *e,
            });
        } else {
            // g = x - α
            repeated.push(((p - g.coeff(0)) % p, *e));
        }
    }
    let mut want: Vec<u64> = spec.q.clone();
    want.sort_unstable();
    let mut found: Vec<u32> = repeated.iter().map(|&(_, e)| e).collect();
    found.sort_unstable();
    if want.iter().map(|&q| q as u32).ne(found.iter().copied()) {
        return Err(TypeFailure::NoCandidateRoots {
            expected: want,
            found,
        });
    }

    // pair requested degrees (in the requested order) with roots of matching multiplicity
    repeated.sort_unstable();
    let mut used = vec![false; repeated.len()];
    let mut assigned = Vec::with_capacity(spec.q.len());
    for &q in &spec.q {
        let idx = (0..repeated.len())
            .find(|&i| !used[i] && repeated[i].1 as u64 == q)
            .expect("multiplicities already matched");
        used[idx] = true;
        assigned.push((repeated[idx].0, q));
    }

    let h_mod_p = product(p, &simple);
    if !separable(&h_mod_p) {
        return Err(TypeFailure::CofactorNotSeparable);
    }
    if let Some(&(root, _)) = assigned.iter().find(|&&(root, _)| h_mod_p.eval(root) == 0) {
        return Err(TypeFailure::CofactorVanishes(root));
    }

    let mut split: Vec<PolyMod> = assigned
        .iter()
        .map(|&(root, q)| PolyMod::linear(p, root).pow(q as u32))
        .collect();
    let has_cofactor = h_mod_p.deg() > 0;
    if has_cofactor {
        split.push(h_mod_p);
    }
    let lifted = hensel_lift(f, &split, p, precision)?;

    let mut factors = Vec::with_capacity(assigned.len());
    for (&(root, q), g) in assigned.iter().zip(&lifted) {
        let mut closest: Option<(u32, Vec<Option<u32>>)> = None;
        let mut hit = None;
        let mut alpha = root;
        while alpha < low {
            let depressed = g.shift(alpha).reduce(low);
            if eisenstein(&depressed, p, t, q) {
                hit = Some((alpha, depressed));
                break;
            }
            let table = valuation_table(&depressed, p, t, q);
            let score = miss_score(&table, t);
            if closest.as_ref().is_none_or(|(s, _)| score > *s) {
                closest = Some((score, table));
            }
            alpha += p;
        }
        let Some((shift, depressed)) = hit else {
            return Err(TypeFailure::NoShift {
                root,
                q,
                closest: closest.map(|c| c.1).unwrap_or_default(),
            });
        };
        factors.push(EisensteinFactor {
            q,
            root,
            shift,
            lifted: g.coeffs().to_vec(),
            valuations: valuation_table(&depressed, p, t, q),
            depressed: depressed.coeffs().to_vec(),
        });
    }
    let cofactor = if has_cofactor {
        lifted.last().expect("cofactor lifted").coeffs().to_vec()
    } else {
        vec![1]
    };
    let witness = TypeWitness {
        spec: spec.clone(),
        precision,
        factors,
        cofactor,
    };
    debug_assert_eq!(witness.product(), normalised(f, big).expect("unit"));
    Ok(witness)
}

/// Whether `f ≡ ∏ factors (mod m)` for integer polynomials, as used to check a
/// printed factorisation against `f`.
pub fn congruent_product(f: &PolyZ, factors: &[PolyZ], m: u64) -> bool {
    let prod = factors.iter().fold(PolyZ::one(), |acc, g| acc.mul(g));
    f.sub(&prod)
        .coeffs()
        .iter()
        .all(|c| c.is_multiple_of(&BigInt::from(m)))
}
