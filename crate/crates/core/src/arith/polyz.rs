//! Dense univariate polynomials over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::polymod::PolyMod;
use super::ArithError;

/// Integer polynomial, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyZ {
    coeffs: Vec<BigInt>,
}

impl PolyZ {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyZ { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        PolyZ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyZ {
            coeffs: vec![BigInt::one()],
        }
    }

    /// `x - a`
    pub fn linear(a: BigInt) -> Self {
        PolyZ::new(vec![-a, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn derivative(&self) -> PolyZ {
        PolyZ::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &PolyZ) -> PolyZ {
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyZ::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &PolyZ) -> PolyZ {
        let n = self.coeffs.len().max(other.coeffs.len());
        PolyZ::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &PolyZ) -> PolyZ {
        if self.is_zero() || other.is_zero() {
            return PolyZ::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyZ::new(out)
    }

    pub fn pow(&self, e: u32) -> PolyZ {
        (0..e).fold(PolyZ::one(), |acc, _| acc.mul(self))
    }

    /// `f(x + c)`
    pub fn shift(&self, c: &BigInt) -> PolyZ {
        let lin = PolyZ::new(vec![c.clone(), BigInt::one()]);
        self.coeffs.iter().rev().fold(PolyZ::zero(), |acc, a| {
            acc.mul(&lin).add(&PolyZ::new(vec![a.clone()]))
        })
    }

    pub fn reduce(&self, modulus: u64) -> PolyMod {
        let m = BigInt::from(modulus);
        PolyMod::new(
            modulus,
            self.coeffs
                .iter()
                .map(|c| super::int::to_u64(&c.mod_floor(&m)).expect("reduced residue fits"))
                .collect(),
        )
    }

    /// Resultant via fraction-free elimination on the Sylvester matrix.
    pub fn resultant(&self, other: &PolyZ) -> BigInt {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return BigInt::zero();
        };
        if m == 0 && n == 0 {
            return BigInt::one();
        }
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for r in 0..n {
            for (i, c) in self.coeffs.iter().rev().enumerate() {
                mat[r][r + i] = c.clone();
            }
        }
        for r in 0..m {
            for (i, c) in other.coeffs.iter().rev().enumerate() {
                mat[n + r][r + i] = c.clone();
            }
        }
        bareiss_determinant(mat)
    }

    /// `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<BigInt, ArithError> {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return Err(ArithError::ConstantPolynomial),
        };
        let res = self.resultant(&self.derivative());
        let (q, r) = res.div_rem(&self.leading());
        debug_assert!(r.is_zero());
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -q } else { q })
    }

    /// Human-readable form in the given variable, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        format_terms(
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .map(|(i, c)| (i, c.clone())),
            var,
        )
    }
}

pub(crate) fn format_terms(terms: impl Iterator<Item = (usize, BigInt)>, var: &str) -> String {
    let mut out = String::new();
    for (i, c) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mag.is_one() && i > 0 {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

/// Exact determinant of an integer matrix (Bareiss).
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_discriminant() {
        assert_eq!(
            PolyZ::from_i64(&[-3, 0, 1]).discriminant().unwrap(),
            BigInt::from(12)
        );
        assert_eq!(
            PolyZ::from_i64(&[0, 0, 1]).discriminant().unwrap(),
            BigInt::zero()
        );
        // b^2 - 4ac for 2x^2 + 3x + 5
        assert_eq!(
            PolyZ::from_i64(&[5, 3, 2]).discriminant().unwrap(),
            BigInt::from(9 - 40)
        );
        assert!(PolyZ::from_i64(&[7]).discriminant().is_err());
    }

    #[test]
    fn cubic_discriminant_matches_formula() {
        // x^3 + a x + b: -4a^3 - 27 b^2
        for (a, b) in [(1i64, 1i64), (-2, 5), (3, -7)] {
            let f = PolyZ::from_i64(&[b, a, 0, 1]);
            assert_eq!(
                f.discriminant().unwrap(),
                BigInt::from(-4 * a * a * a - 27 * b * b)
            );
        }
    }

    #[test]
    fn discriminant_of_roots_product() {
        // prod (r_i - r_j)^2 for roots 1,2,4,7
        let roots = [1i64, 2, 4, 7];
        let f = roots.iter().fold(PolyZ::one(), |acc, &r| {
            acc.mul(&PolyZ::linear(BigInt::from(r)))
        });
        let mut expect = 1i64;
        for i in 0..4 {
            for j in i + 1..4 {
                expect *= (roots[i] - roots[j]).pow(2);
            }
        }
        assert_eq!(f.discriminant().unwrap(), BigInt::from(expect));
    }

    #[test]
    fn shift_and_display() {
        let f = PolyZ::from_i64(&[0, 0, 1]).shift(&BigInt::from(-1));
        assert_eq!(f, PolyZ::from_i64(&[1, -2, 1]));
        assert_eq!(
            PolyZ::from_i64(&[160801, -19649, 1257, -49, 1]).display_in("T"),
            "T^4 - 49T^3 + 1257T^2 - 19649T + 160801"
        );
        assert_eq!(PolyZ::from_i64(&[-1, 1]).to_string(), "x - 1");
    }
}
