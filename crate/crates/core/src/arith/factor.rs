//! Factorisation over prime fields: squarefree decomposition, distinct-degree
//! splitting, and Cantor–Zassenhaus equal-degree splitting.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::int::is_prime_u64;
use super::polymod::PolyMod;
use super::ArithError;

/// Factorisation of a polynomial over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Leading coefficient of the input.
    pub unit: u64,
    /// Monic irreducible factors with multiplicities, sorted by (degree, coefficients).
    pub factors: Vec<(PolyMod, u32)>,
}

impl Factorization {
    /// Multiset of factor degrees, each repeated by multiplicity, ascending.
    pub fn degree_pattern(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, e)| std::iter::repeat_n(f.deg(), *e as usize))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// Re-multiply the factors including the unit.
    pub fn expand(&self, p: u64) -> PolyMod {
        self.factors
            .iter()
            .fold(PolyMod::constant(p, self.unit), |acc, (f, e)| {
                acc.mul(&f.pow(*e))
            })
    }
}

fn require_prime(p: u64) -> Result<(), ArithError> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(ArithError::NotPrime(p.to_string()))
    }
}

/// Factor `f` over `F_p` into monic irreducibles; deterministic for a fixed seed.
pub fn factor_mod_p(f: &PolyMod, seed: u64) -> Result<Factorization, ArithError> {
    let p = f.modulus();
    require_prime(p)?;
    if f.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    let unit = f.leading();
    let monic = f.monic()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (sqf, mult) in squarefree_decomposition(&monic) {
        for (g, d) in distinct_degree(&sqf) {
            for h in equal_degree(&g, d, &mut rng) {
                factors.push((h, mult));
            }
        }
    }
    factors.sort_by(|a, b| (a.0.deg(), a.0.coeffs()).cmp(&(b.0.deg(), b.0.coeffs())));
    Ok(Factorization { unit, factors })
}

/// Squarefree decomposition of a monic polynomial in characteristic `p`.
pub fn squarefree_decomposition(f: &PolyMod) -> Vec<(PolyMod, u32)> {
    let p = f.modulus();
    let mut out: Vec<(PolyMod, u32)> = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        // c is a p-th power: take the p-th root coefficientwise
        let root = PolyMod::new(p, c.coeffs().iter().step_by(p as usize).copied().collect());
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p as u32));
        }
    }
    // merge equal multiplicities produced by the recursion
    out.sort_by_key(|(_, m)| *m);
    let mut merged: Vec<(PolyMod, u32)> = Vec::new();
    for (g, m) in out {
        match merged.last_mut() {
            Some((h, mm)) if *mm == m => *h = h.mul(&g),
            _ => merged.push((g, m)),
        }
    }
    merged
}

/// Split a monic squarefree polynomial into products of equal-degree irreducibles.
pub fn distinct_degree(f: &PolyMod) -> Vec<(PolyMod, usize)> {
    let p = f.modulus();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = PolyMod::x(p);
    let mut h = x.clone();
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod_u64(p, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let deg = rest.deg();
        out.push((rest, deg));
    }
    out
}

/// Split a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree(f: &PolyMod, d: usize, rng: &mut ChaCha8Rng) -> Vec<PolyMod> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let p = f.modulus();
    let q = BigUint::from(p).pow(d as u32);
    loop {
        let a = PolyMod::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace of F_{2^d}
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (&q - BigUint::one()) >> 1;
            a.pow_mod(&e, f).sub(&PolyMod::constant(p, 1))
        };
        let g = b.gcd(f);
        if g.deg() > 0 && g.deg() < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.exact_div(&g), d, rng));
            return out;
        }
    }
}

/// Rabin's irreducibility test over `F_p`.
pub fn is_irreducible(f: &PolyMod) -> bool {
    let p = f.modulus();
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let f = f.monic().expect("prime modulus");
    let x = PolyMod::x(p);
    let frob = |k: usize| -> PolyMod {
        let mut h = x.clone();
        for _ in 0..k {
            h = h.pow_mod_u64(p, &f);
        }
        h
    };
    if !frob(n).sub(&x).rem(&f).is_zero() {
        return false;
    }
    for (r, _) in super::int::factor_u64(n as u64) {
        let g = frob(n / r as usize).sub(&x).gcd(&f);
        if !g.is_one() {
            return false;
        }
    }
    true
}

/// A monic irreducible polynomial of degree `d` over `F_p`, chosen by seeded search.
pub fn find_irreducible(p: u64, d: usize, seed: u64) -> Result<PolyMod, ArithError> {
    require_prime(p)?;
    if d == 0 {
        return Err(ArithError::ZeroDegree);
    }
    if d == 1 {
        return Ok(PolyMod::x(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut coeffs: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
        coeffs.push(1);
        let f = PolyMod::new(p, coeffs);
        if is_irreducible(&f) {
            return Ok(f);
        }
    }
}
