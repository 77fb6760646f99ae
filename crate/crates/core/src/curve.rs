//! Hyperelliptic curves `y² = f(x)` with `deg f = 2g + 2`: point counts over
//! `F_{p^d}` and Frobenius characteristic polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime_u64, ArithError, FqElement, FqField, PolyZ, MAX_EXT_DEGREE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("malformed curve description: {0}")]
    Parse(String),
    #[error("degree {got} does not match genus {genus} (need 2g+2)")]
    Degree { genus: usize, got: usize },
    #[error("genus must be at least 1")]
    Genus,
    #[error("f has a repeated root (discriminant 0)")]
    Singular,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("bad reduction at {0}")]
    BadReduction(u64),
    #[error("field size {p}^{d} exceeds the enumeration cap {cap}")]
    TooLarge { p: u64, d: usize, cap: u64 },
    #[error("extension degree {0} unsupported")]
    ExtensionDegree(usize),
    #[error("point counts violate the Weil bound at p = {p}, d = {d}")]
    Weil { p: u64, d: usize },
    #[error("Newton identities produced a non-integer at p = {0}")]
    Newton(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A curve `y² = f(x)` of genus `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    pub genus: usize,
    pub f: PolyZ,
    pub label: String,
    disc: BigInt,
}

/// On-disk layout: coefficients lowest degree first, as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub genus: usize,
    pub coefficients: Vec<String>,
    #[serde(default)]
    pub label: String,
}

impl CurveSpec {
    pub fn new(genus: usize, f: PolyZ, label: impl Into<String>) -> Result<Self, CurveError> {
        if genus == 0 {
            return Err(CurveError::Genus);
        }
        let deg = f.degree().unwrap_or(0);
        if deg != 2 * genus + 2 {
            return Err(CurveError::Degree { genus, got: deg });
        }
        let disc = f.discriminant()?;
        if disc.is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(CurveSpec {
            genus,
            f,
            label: label.into(),
            disc,
        })
    }

    pub fn from_file(file: &CurveFile) -> Result<Self, CurveError> {
        let coeffs = file
            .coefficients
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|_| CurveError::Parse(format!("bad coefficient {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(file.genus, PolyZ::new(coeffs), file.label.clone())
    }

    pub fn from_json(s: &str) -> Result<Self, CurveError> {
        let file: CurveFile =
            serde_json::from_str(s).map_err(|e| CurveError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> CurveFile {
        CurveFile {
            genus: self.genus,
            coefficients: self.f.coeffs().iter().map(|c| c.to_string()).collect(),
            label: self.label.clone(),
        }
    }

    /// Signed discriminant of `f`.
    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// `p` odd, `p ∤ disc f`, `p ∤ lc f`.
    pub fn good_reduction(&self, p: u64) -> bool {
        if p == 2 || !is_prime_u64(p) {
            return false;
        }
        let pb = BigInt::from(p);
        !self.disc.is_multiple_of(&pb) && !self.f.leading().is_multiple_of(&pb)
    }

    fn check_prime(&self, p: u64) -> Result<(), CurveError> {
        if !is_prime_u64(p) {
            return Err(CurveError::NotPrime(p));
        }
        if p == 2 {
            return Err(CurveError::EvenCharacteristic);
        }
        if !self.good_reduction(p) {
            return Err(CurveError::BadReduction(p));
        }
        Ok(())
    }

    /// `#C(F_{p^d})` on the smooth model: affine points plus two points at
    /// infinity exactly when `lc f` is a square in `F_{p^d}`.
    pub fn count_points(&self, p: u64, d: usize, opts: &CountOptions) -> Result<u64, CurveError> {
        self.check_prime(p)?;
        if d == 0 || d > MAX_EXT_DEGREE {
            return Err(CurveError::ExtensionDegree(d));
        }
        let q = p
            .checked_pow(d as u32)
            .filter(|&q| q <= opts.cap)
            .ok_or(CurveError::TooLarge {
                p,
                d,
                cap: opts.cap,
            })?;
        let field = FqField::new(p, d, opts.seed)?;
        let coeffs: Vec<u64> = self.f.reduce(p).coeffs().to_vec();
        let squares = squares_table(&field);
        let chunk = (q / (opts.workers as u64 * 8)).max(1024);
        let ranges: Vec<(u64, u64)> = (0..q)
            .step_by(chunk as usize)
            .map(|s| (s, (s + chunk).min(q)))
            .collect();
        let count_range = |&(lo, hi): &(u64, u64)| -> u64 {
            (lo..hi)
                .map(|i| {
                    let y2 = field.eval(&coeffs, &field.from_index(i));
                    if y2.is_zero() {
                        1
                    } else if squares[field.index(&y2) as usize] {
                        2
                    } else {
                        0
                    }
                })
                .sum()
        };
        let affine: u64 = if opts.workers <= 1 {
            ranges.iter().map(count_range).sum()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.workers)
                .build()
                .expect("thread pool");
            pool.install(|| ranges.par_iter().map(count_range).sum())
        };
        let lc = field.from_base(self.f.reduce(p).leading());
        let infinity = if squares[field.index(&lc) as usize] {
            2
        } else {
            0
        };
        Ok(affine + infinity)
    }

    /// Counts `N_1, …, N_g` and the degree-`2g` characteristic polynomial of Frobenius.
    pub fn frobenius_charpoly(
        &self,
        p: u64,
        opts: &CountOptions,
    ) -> Result<FrobeniusData, CurveError> {
        let g = self.genus;
        let counts = (1..=g)
            .map(|d| self.count_points(p, d, opts))
            .collect::<Result<Vec<_>, _>>()?;
        FrobeniusData::from_counts(g, p, counts)
    }
}

/// `table[index(a)]` is true iff `a` is a nonzero square.
fn squares_table(field: &FqField) -> Vec<bool> {
    let q = field.order();
    let mut table = vec![false; q as usize];
    for i in 1..q {
        let a = field.from_index(i);
        table[field.index(&field.mul(&a, &a)) as usize] = true;
    }
    table
}

/// Quadratic character of `f(x)` by Euler's criterion (slow path; used to
/// cross-check the squares table).
pub fn character_euler(field: &FqField, coeffs: &[u64], x: &FqElement) -> i8 {
    field.quadratic_character(&field.eval(coeffs, x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub cap: u64,
    pub workers: usize,
    pub seed: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            cap: 10_000_000,
            workers: 1,
            seed: 1,
        }
    }
}

/// Point counts and the Frobenius characteristic polynomial at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusData {
    pub p: u64,
    pub genus: usize,
    pub counts: Vec<u64>,
    /// `T^{2g} - e_1 T^{2g-1} + e_2 T^{2g-2} - …`, lowest degree first.
    pub charpoly: PolyZ,
}

impl FrobeniusData {
    /// Power sums `s_d = p^d + 1 - N_d`, Newton's identities for `e_1..e_g`,
    /// then `e_{2g-i} = p^{g-i} e_i`.
    pub fn from_counts(g: usize, p: u64, counts: Vec<u64>) -> Result<Self, CurveError> {
        assert_eq!(counts.len(), g);
        let pb = BigInt::from(p);
        let mut s = vec![BigInt::zero()];
        for (d, &n) in counts.iter().enumerate() {
            let d = d + 1;
            let pd = pb.pow(d as u32);
            let sd = &pd + BigInt::one() - BigInt::from(n);
            // (N_d - p^d - 1)^2 <= 4 g^2 p^d
            if &sd * &sd > BigInt::from(4 * g * g) * &pd {
                return Err(CurveError::Weil { p, d });
            }
            s.push(sd);
        }
        let mut e = vec![BigInt::one()];
        for k in 1..=g {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                let term = &e[k - i] * &s[i];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            let (q, r) = acc.div_rem(&BigInt::from(k));
            if !r.is_zero() {
                return Err(CurveError::Newton(p));
            }
            e.push(q);
        }
        for i in (0..g).rev() {
            let v = &e[i] * pb.pow((g - i) as u32);
            e.push(v);
        }
        // coefficient of T^{2g-i} is (-1)^i e_i
        let mut coeffs = vec![BigInt::zero(); 2 * g + 1];
        for (i, ei) in e.iter().enumerate() {
            coeffs[2 * g - i] = if i % 2 == 1 { -ei } else { ei.clone() };
        }
        let charpoly = PolyZ::new(coeffs);
        if !charpoly.eval(&BigInt::one()).is_positive() {
            return Err(CurveError::Weil { p, d: 1 });
        }
        Ok(FrobeniusData {
            p,
            genus: g,
            counts,
            charpoly,
        })
    }

    /// Trace of Frobenius `e_1`.
    pub fn trace(&self) -> BigInt {
        -self.charpoly.coeff(2 * self.genus - 1)
    }

    /// `N_d` predicted by the characteristic polynomial, for any `d >= 1`.
    pub fn predicted_count(&self, d: usize) -> BigInt {
        let n = 2 * self.genus;
        // e_i = (-1)^i * coeff of T^{n-i}
        let e: Vec<BigInt> = (0..=n)
            .map(|i| {
                let c = self.charpoly.coeff(n - i);
                if i % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        let mut s = vec![BigInt::from(n)];
        for k in 1..=d {
            // s_k = Σ_{i=1}^{min(k-1,n)} (-1)^{i-1} e_i s_{k-i} + [k <= n] (-1)^{k-1} k e_k
            let mut acc = BigInt::zero();
            for i in 1..k.min(n + 1) {
                let term = &e[i] * &s[k - i];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            if k <= n {
                let term = &e[k] * BigInt::from(k);
                if k % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            s.push(acc);
        }
        BigInt::from(self.p).pow(d as u32) + BigInt::one() - &s[d]
    }

    pub fn display(&self) -> String {
        self.charpoly.display_in("T")
    }

    pub fn to_record(&self) -> FrobeniusRecord {
        FrobeniusRecord {
            p: self.p,
            counts: self.counts.clone(),
            charpoly: self.display(),
            coefficients: self
                .charpoly
                .coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            trace: self.trace().to_string(),
        }
    }
}

/// Serializable view of [`FrobeniusData`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusRecord {
    pub p: u64,
    pub counts: Vec<u64>,
    pub charpoly: String,
    pub coefficients: Vec<String>,
    pub trace: String,
}

/// `|N_d - (p^d + 1)| <= 2g p^{d/2}`.
pub fn within_weil(g: usize, p: u64, d: usize, n: u64) -> bool {
    let pd = BigInt::from(p).pow(d as u32);
    let dev = (&pd + BigInt::one() - BigInt::from(n)).abs();
    &dev * &dev <= BigInt::from(4 * g * g) * pd
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent brute force over `F_p` via Euler's criterion on plain integers.
    fn brute_count(coeffs: &[i64], p: i64) -> u64 {
        let f = |x: i64| {
            coeffs
                .iter()
                .rev()
                .fold(0i64, |acc, &c| (acc * x + c).rem_euclid(p))
        };
        let chi = |a: i64| -> i64 {
            if a == 0 {
                return 0;
            }
            let mut r = 1i64;
            let (mut b, mut e) = (a, (p - 1) / 2);
            while e > 0 {
                if e & 1 == 1 {
                    r = r * b % p;
                }
                b = b * b % p;
                e >>= 1;
            }
            if r == 1 {
                1
            } else {
                -1
            }
        };
        let lc = *coeffs.last().unwrap();
        let affine: i64 = (0..p).map(|x| 1 + chi(f(x))).sum();
        (affine + if chi(lc.rem_euclid(p)) == 1 { 2 } else { 0 }) as u64
    }

    #[test]
    fn small_curve_matches_brute_force() {
        // y^2 = x^6 + 1 over F_5 and friends
        let c = CurveSpec::new(2, PolyZ::from_i64(&[1, 0, 0, 0, 0, 0, 1]), "x6+1").unwrap();
        for p in [5u64, 7, 11, 13] {
            let n = c.count_points(p, 1, &CountOptions::default()).unwrap();
            assert_eq!(n, brute_count(&[1, 0, 0, 0, 0, 0, 1], p as i64), "p={p}");
        }
        let coeffs = [3i64, -1, 0, 2, 0, 0, 5];
        let c = CurveSpec::new(2, PolyZ::from_i64(&coeffs), "nonmonic").unwrap();
        for p in [7u64, 11, 13, 17, 19, 23] {
            if c.good_reduction(p) {
                assert_eq!(
                    c.count_points(p, 1, &CountOptions::default()).unwrap(),
                    brute_count(&coeffs, p as i64)
                );
            }
        }
    }

    #[test]
    fn euler_criterion_matches_table() {
        let field = FqField::new(7, 2, 3).unwrap();
        let table = squares_table(&field);
        let coeffs = [1u64, 2, 0, 1];
        for i in 0..field.order() {
            let x = field.from_index(i);
            let y = field.eval(&coeffs, &x);
            let expect = if y.is_zero() {
                0
            } else if table[field.index(&y) as usize] {
                1
            } else {
                -1
            };
            assert_eq!(character_euler(&field, &coeffs, &x), expect);
        }
    }

    #[test]
    fn extension_count_agrees_with_charpoly() {
        let c = CurveSpec::new(2, PolyZ::from_i64(&[3, -1, 0, 2, 0, 0, 5]), "c").unwrap();
        let opts = CountOptions::default();
        for p in [7u64, 11, 13] {
            if !c.good_reduction(p) {
                continue;
            }
            let fd = c.frobenius_charpoly(p, &opts).unwrap();
            // functional equation for g = 2: a3 = p a1, a4 = p^2
            let a = |i| fd.charpoly.coeff(i);
            assert_eq!(a(1), a(3) * BigInt::from(p));
            assert_eq!(a(0), BigInt::from(p * p));
            for d in 1..=3 {
                let n = c.count_points(p, d, &opts).unwrap();
                assert_eq!(fd.predicted_count(d), BigInt::from(n), "p={p} d={d}");
                assert!(within_weil(2, p, d, n));
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            CurveSpec::new(2, PolyZ::from_i64(&[0, 0, 0, 0, 0, 0, 1]), "x6").unwrap_err(),
            CurveError::Singular
        );
        assert!(matches!(
            CurveSpec::new(2, PolyZ::from_i64(&[1, 0, 1]), "q"),
            Err(CurveError::Degree { .. })
        ));
        let c = CurveSpec::new(2, PolyZ::from_i64(&[1, 0, 0, 0, 0, 0, 1]), "x6+1").unwrap();
        assert!(!c.good_reduction(2));
        assert_eq!(
            c.count_points(2, 1, &CountOptions::default()),
            Err(CurveError::EvenCharacteristic)
        );
        assert!(matches!(
            c.count_points(3, 1, &CountOptions::default()),
            Err(CurveError::BadReduction(3))
        ));
        let tight = CountOptions {
            cap: 100,
            ..CountOptions::default()
        };
        assert!(matches!(
            c.count_points(11, 2, &tight),
            Err(CurveError::TooLarge { .. })
        ));
        assert!(CurveSpec::from_json(r#"{"genus": 2, "coefficients": ["1", "x"]}"#).is_err());
    }
}
