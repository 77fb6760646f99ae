//! Dense polynomials over `Z/mZ` for machine-sized `m` (a prime or a prime power).

use std::fmt;

use num_bigint::{BigInt, BigUint};

use super::int::{inv_mod, mul_mod};
use super::polyz::{format_terms, PolyZ};
use super::ArithError;

/// Polynomial with residues in `[0, modulus)`, lowest degree first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyMod {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl PolyMod {
    pub fn new(modulus: u64, coeffs: Vec<u64>) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        assert!(
            modulus < (1 << 62),
            "modulus too large for machine arithmetic"
        );
        let mut p = PolyMod {
            modulus,
            coeffs: coeffs.into_iter().map(|c| c % modulus).collect(),
        };
        p.trim();
        p
    }

    pub fn from_i64(modulus: u64, coeffs: &[i64]) -> Self {
        let m = modulus as i64;
        Self::new(
            modulus,
            coeffs.iter().map(|c| c.rem_euclid(m) as u64).collect(),
        )
    }

    pub fn zero(modulus: u64) -> Self {
        PolyMod {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(modulus: u64, c: u64) -> Self {
        Self::new(modulus, vec![c])
    }

    pub fn x(modulus: u64) -> Self {
        Self::new(modulus, vec![0, 1])
    }

    /// `x - a`
    pub fn linear(modulus: u64, a: u64) -> Self {
        Self::new(modulus, vec![(modulus - a % modulus) % modulus, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Integer lift with residues in `[0, m)`.
    pub fn lift(&self) -> PolyZ {
        PolyZ::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Integer lift with residues in the symmetric range `(-m/2, m/2]`.
    pub fn lift_symmetric(&self) -> PolyZ {
        let m = self.modulus;
        PolyZ::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c > m / 2 {
                        BigInt::from(c) - BigInt::from(m)
                    } else {
                        BigInt::from(c)
                    }
                })
                .collect(),
        )
    }

    /// Reduce to a smaller modulus dividing this one.
    pub fn reduce(&self, modulus: u64) -> PolyMod {
        assert_eq!(self.modulus % modulus, 0, "target modulus must divide");
        PolyMod::new(modulus, self.coeffs.clone())
    }

    fn check(&self, other: &PolyMod) {
        assert_eq!(self.modulus, other.modulus, "mismatched moduli");
    }

    pub fn add(&self, other: &PolyMod) -> PolyMod {
        self.check(other);
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyMod::new(
            m,
            (0..n)
                .map(|i| (self.coeff(i) + other.coeff(i)) % m)
                .collect(),
        )
    }

    pub fn sub(&self, other: &PolyMod) -> PolyMod {
        self.check(other);
        let m = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyMod::new(
            m,
            (0..n)
                .map(|i| (self.coeff(i) + m - other.coeff(i)) % m)
                .collect(),
        )
    }

    pub fn neg(&self) -> PolyMod {
        PolyMod::zero(self.modulus).sub(self)
    }

    pub fn scale(&self, c: u64) -> PolyMod {
        let m = self.modulus;
        PolyMod::new(
            m,
            self.coeffs.iter().map(|&a| mul_mod(a, c % m, m)).collect(),
        )
    }

    pub fn mul(&self, other: &PolyMod) -> PolyMod {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return PolyMod::zero(self.modulus);
        }
        let m = self.modulus as u128;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % m;
            }
        }
        PolyMod::new(self.modulus, acc.into_iter().map(|c| c as u64).collect())
    }

    pub fn pow(&self, e: u32) -> PolyMod {
        (0..e).fold(PolyMod::constant(self.modulus, 1), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> PolyMod {
        let m = self.modulus;
        PolyMod::new(
            m,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % m, m))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let m = self.modulus;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x % m, m) + c) % m)
    }

    /// `f(x + c)`
    pub fn shift(&self, c: u64) -> PolyMod {
        let m = self.modulus;
        let lin = PolyMod::new(m, vec![c % m, 1]);
        self.coeffs.iter().rev().fold(PolyMod::zero(m), |acc, &a| {
            acc.mul(&lin).add(&PolyMod::constant(m, a))
        })
    }

    /// Division with remainder by a divisor whose leading coefficient is a unit.
    pub fn div_rem(&self, divisor: &PolyMod) -> Result<(PolyMod, PolyMod), ArithError> {
        self.check(divisor);
        let m = self.modulus;
        let d = divisor.degree().ok_or(ArithError::DivisionByZero)?;
        let lc_inv = inv_mod(divisor.leading(), m).ok_or(ArithError::NonUnitLeading)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((PolyMod::zero(m), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = mul_mod(rem[i], lc_inv, m);
            if c == 0 {
                continue;
            }
            quot[i - d] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let t = mul_mod(c, b, m);
                rem[i - d + j] = (rem[i - d + j] + m - t) % m;
            }
        }
        rem.truncate(d);
        Ok((PolyMod::new(m, quot), PolyMod::new(m, rem)))
    }

    pub fn rem(&self, divisor: &PolyMod) -> PolyMod {
        self.div_rem(divisor).expect("unit leading coefficient").1
    }

    /// Exact quotient; panics when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &PolyMod) -> PolyMod {
        let (q, r) = self.div_rem(divisor).expect("unit leading coefficient");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Scale to a monic polynomial (leading coefficient must be a unit).
    pub fn monic(&self) -> Result<PolyMod, ArithError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let inv = inv_mod(self.leading(), self.modulus).ok_or(ArithError::NonUnitLeading)?;
        Ok(self.scale(inv))
    }

    /// Monic gcd; the modulus must be prime.
    pub fn gcd(&self, other: &PolyMod) -> PolyMod {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic().expect("prime modulus")
    }

    /// Extended gcd over a prime field: returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn ext_gcd(&self, other: &PolyMod) -> (PolyMod, PolyMod, PolyMod) {
        let m = self.modulus;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (PolyMod::constant(m, 1), PolyMod::zero(m));
        let (mut t0, mut t1) = (PolyMod::zero(m), PolyMod::constant(m, 1));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("prime modulus");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = inv_mod(r0.leading(), m).expect("prime modulus");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// `self^e mod modulus_poly`.
    pub fn pow_mod(&self, e: &BigUint, modulus_poly: &PolyMod) -> PolyMod {
        let mut acc = PolyMod::constant(self.modulus, 1).rem(modulus_poly);
        let base = self.rem(modulus_poly);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus_poly);
            if e.bit(i) {
                acc = acc.mul(&base).rem(modulus_poly);
            }
        }
        acc
    }

    pub fn pow_mod_u64(&self, e: u64, modulus_poly: &PolyMod) -> PolyMod {
        self.pow_mod(&BigUint::from(e), modulus_poly)
    }

    /// Display with coefficients in the symmetric range.
    pub fn display_in(&self, var: &str) -> String {
        let z = self.lift_symmetric();
        format_terms(
            z.coeffs()
                .iter()
                .enumerate()
                .rev()
                .map(|(i, c)| (i, c.clone())),
            var,
        )
    }
}

impl fmt::Display for PolyMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("x"))
    }
}

/// Product of a list of polynomials sharing one modulus.
pub fn product(modulus: u64, polys: &[PolyMod]) -> PolyMod {
    polys
        .iter()
        .fold(PolyMod::constant(modulus, 1), |acc, p| acc.mul(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_roundtrip() {
        let a = PolyMod::from_i64(7, &[3, 1, 4, 1, 5]);
        let b = PolyMod::from_i64(7, &[2, 0, 3]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.deg() < 2);
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = PolyMod::from_i64(5, &[1, 0, 1]);
        let b = PolyMod::from_i64(5, &[1, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert!(g.is_one());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn non_unit_leading_rejected() {
        let a = PolyMod::from_i64(9, &[1, 1, 1]);
        let b = PolyMod::from_i64(9, &[1, 3]);
        assert!(a.div_rem(&b).is_err());
    }

    #[test]
    fn symmetric_display() {
        let f = PolyMod::from_i64(289, &[-17, 0, 0, 1]);
        assert_eq!(f.display_in("x"), "x^3 - 17");
    }
}
