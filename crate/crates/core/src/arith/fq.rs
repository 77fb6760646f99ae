//! Arithmetic in `F_{p^d}` represented as `F_p[x] / (m(x))`.

use num_bigint::BigUint;
use num_traits::One;

use super::factor::{find_irreducible, is_irreducible};
use super::polymod::PolyMod;
use super::ArithError;

/// Largest supported extension degree.
pub const MAX_EXT_DEGREE: usize = 8;

/// Element of `F_{p^d}`: coefficients of the residue polynomial, lowest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FqElement {
    c: [u64; MAX_EXT_DEGREE],
}

impl FqElement {
    pub const ZERO: FqElement = FqElement {
        c: [0; MAX_EXT_DEGREE],
    };

    pub fn coeffs(&self) -> &[u64; MAX_EXT_DEGREE] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
}

/// The field `F_{p^d}` with a fixed irreducible defining polynomial.
#[derive(Clone, Debug)]
pub struct FqField {
    p: u64,
    d: usize,
    modulus: PolyMod,
    /// `x^d = Σ reduce[i] x^i`
    reduce: [u64; MAX_EXT_DEGREE],
}

impl FqField {
    /// Build `F_{p^d}` from a seeded irreducible search.
    pub fn new(p: u64, d: usize, seed: u64) -> Result<Self, ArithError> {
        let modulus = find_irreducible(p, d, seed)?;
        Self::with_modulus(modulus)
    }

    pub fn with_modulus(modulus: PolyMod) -> Result<Self, ArithError> {
        let p = modulus.modulus();
        let d = modulus.deg();
        if d == 0 || d > MAX_EXT_DEGREE {
            return Err(ArithError::ExtensionDegree(d));
        }
        if p >= (1 << 31) {
            return Err(ArithError::ModulusOverflow);
        }
        if !modulus.is_monic() || !is_irreducible(&modulus) {
            return Err(ArithError::NotIrreducible);
        }
        let mut reduce = [0u64; MAX_EXT_DEGREE];
        for (i, r) in reduce.iter_mut().enumerate().take(d) {
            *r = (p - modulus.coeff(i)) % p;
        }
        Ok(FqField {
            p,
            d,
            modulus,
            reduce,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn defining_polynomial(&self) -> &PolyMod {
        &self.modulus
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.d as u32)
    }

    pub fn from_base(&self, a: u64) -> FqElement {
        let mut e = FqElement::ZERO;
        e.c[0] = a % self.p;
        e
    }

    /// Element whose base-`p` digits are the coefficients.
    pub fn from_index(&self, mut idx: u64) -> FqElement {
        let mut e = FqElement::ZERO;
        for i in 0..self.d {
            e.c[i] = idx % self.p;
            idx /= self.p;
        }
        e
    }

    pub fn index(&self, e: &FqElement) -> u64 {
        e.c[..self.d]
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.p + c)
    }

    #[inline]
    pub fn add(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let mut e = FqElement::ZERO;
        for i in 0..self.d {
            let s = a.c[i] + b.c[i];
            e.c[i] = if s >= self.p { s - self.p } else { s };
        }
        e
    }

    #[inline]
    pub fn mul(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let p = self.p;
        let d = self.d;
        if d == 1 {
            let mut e = FqElement::ZERO;
            e.c[0] = a.c[0] * b.c[0] % p;
            return e;
        }
        let mut t = [0u64; 2 * MAX_EXT_DEGREE];
        for i in 0..d {
            if a.c[i] == 0 {
                continue;
            }
            for j in 0..d {
                t[i + j] = (t[i + j] + a.c[i] * b.c[j]) % p;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let top = t[k];
            if top == 0 {
                continue;
            }
            // x^k = x^{k-d} · Σ reduce[i] x^i
            for i in 0..d {
                t[k - d + i] = (t[k - d + i] + top * self.reduce[i]) % p;
            }
        }
        let mut e = FqElement::ZERO;
        e.c[..d].copy_from_slice(&t[..d]);
        e
    }

    pub fn pow(&self, a: &FqElement, e: &BigUint) -> FqElement {
        let mut acc = self.from_base(1);
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Quadratic character by Euler's criterion: 0, 1, or -1.
    pub fn quadratic_character(&self, a: &FqElement) -> i8 {
        if a.is_zero() {
            return 0;
        }
        let e = (BigUint::from(self.order()) - BigUint::one()) >> 1;
        let r = self.pow(a, &e);
        if r == self.from_base(1) {
            1
        } else {
            -1
        }
    }

    /// Evaluate an integer polynomial (reduced mod p) at `x`.
    #[inline]
    pub fn eval(&self, coeffs_low_first: &[u64], x: &FqElement) -> FqElement {
        let mut acc = FqElement::ZERO;
        for &c in coeffs_low_first.iter().rev() {
            acc = self.mul(&acc, x);
            let s = acc.c[0] + c;
            acc.c[0] = if s >= self.p { s - self.p } else { s };
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicative_group_has_right_order() {
        let f = FqField::new(5, 2, 3).unwrap();
        let q = f.order();
        let e = BigUint::from(q - 1);
        for i in 1..q {
            let a = f.from_index(i);
            assert_eq!(f.pow(&a, &e), f.from_base(1), "a^(q-1) != 1");
        }
    }

    #[test]
    fn euler_matches_squares() {
        let f = FqField::new(7, 3, 1).unwrap();
        let q = f.order();
        let mut is_sq = vec![false; q as usize];
        for i in 0..q {
            let a = f.from_index(i);
            is_sq[f.index(&f.mul(&a, &a)) as usize] = true;
        }
        for i in 1..q {
            let a = f.from_index(i);
            assert_eq!(f.quadratic_character(&a) == 1, is_sq[i as usize]);
        }
    }

    #[test]
    fn index_roundtrip() {
        let f = FqField::new(11, 3, 9).unwrap();
        for i in [0u64, 1, 10, 11, 120, 1330] {
            assert_eq!(f.index(&f.from_index(i)), i);
        }
    }
}
