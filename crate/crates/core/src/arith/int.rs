//! Integer utilities: primality, modular exponentiation, multiplicative orders.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ArithError;

/// Verdict of [`is_prime`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primality {
    Prime,
    ProbablePrime,
    Composite,
}

impl Primality {
    /// True for both proven and probable primes.
    pub fn is_prime_like(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

/// Miller–Rabin with the first thirteen prime bases is deterministic below
/// this bound (Sorenson–Webster).
const DETERMINISTIC_MR_BOUND: &str = "3317044064679887385961981";
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Primality test: deterministic below ~3.3·10²⁴, Baillie–PSW above.
pub fn is_prime(n: &BigInt) -> Result<Primality, ArithError> {
    if n <= &BigInt::one() {
        return Err(ArithError::NotAboveOne(n.to_string()));
    }
    if let Some(small) = n.to_u64() {
        return Ok(if is_prime_machine(small) {
            Primality::Prime
        } else {
            Primality::Composite
        });
    }
    let n = n.magnitude();
    for &p in SMALL_PRIMES.iter() {
        let p = BigUint::from(p);
        if *n == p {
            return Ok(Primality::Prime);
        }
        if (n % &p).is_zero() {
            return Ok(Primality::Composite);
        }
    }
    let bound: BigUint = DETERMINISTIC_MR_BOUND.parse().expect("constant");
    if *n < bound {
        for &a in MR_BASES.iter() {
            if !strong_probable_prime(n, &BigUint::from(a)) {
                return Ok(Primality::Composite);
            }
        }
        return Ok(Primality::Prime);
    }
    if !strong_probable_prime(n, &BigUint::from(2u32)) {
        return Ok(Primality::Composite);
    }
    if !strong_lucas_probable_prime(n) {
        return Ok(Primality::Composite);
    }
    Ok(Primality::ProbablePrime)
}

/// Convenience wrapper for machine-sized inputs.
pub fn is_prime_u64(n: u64) -> bool {
    is_prime_machine(n)
}

/// Deterministic Miller–Rabin on `u64` (the first twelve prime bases suffice).
fn is_prime_machine(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = p as u64;
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    'bases: for &a in MR_BASES[..12].iter() {
        let mut x = pow_mod(a as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Jacobi symbol (a/n) for odd positive n.
pub fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    assert!(
        n.is_positive() && n.is_odd(),
        "jacobi needs odd positive modulus"
    );
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas test with Selfridge's parameter choice.
fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    let n_int = BigInt::from_biguint(Sign::Plus, n.clone());
    let root = n.sqrt();
    if &root * &root == *n {
        return false;
    }
    // D = 5, -7, 9, -11, ... until (D/n) = -1
    let mut d = BigInt::from(5);
    loop {
        let j = jacobi(&d, &n_int);
        if j == -1 {
            break;
        }
        if j == 0 && d.abs() != n_int {
            return false;
        }
        d = if d.is_positive() {
            -(d + BigInt::from(2))
        } else {
            -(d - BigInt::from(2))
        };
    }
    let p = BigInt::one();
    let q = (BigInt::one() - &d) / 4;
    let m = &n_int;
    let norm = |x: BigInt| x.mod_floor(m);
    let inv2 = (m + BigInt::one()) / 2;

    let n_plus_1: BigInt = &n_int + BigInt::one();
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let dd = &n_plus_1 >> s;

    // Binary ladder on the bits of dd computing U_k, V_k, Q^k.
    let mut u = BigInt::zero();
    let mut v = BigInt::from(2);
    let mut qk = BigInt::one();
    let bits = dd.bits();
    for i in (0..bits).rev() {
        // double
        u = norm(&u * &v);
        v = norm(&v * &v - 2 * &qk);
        qk = norm(&qk * &qk);
        if dd.bit(i) {
            let u_new = norm((&p * &u + &v) * &inv2);
            let v_new = norm((&d * &u + &p * &v) * &inv2);
            u = u_new;
            v = v_new;
            qk = norm(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = norm(&v * &v - 2 * &qk);
        qk = norm(&qk * &qk);
        if v.is_zero() {
            return true;
        }
    }
    false
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Prime factorisation of a machine integer by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn euler_phi(m: u64) -> u64 {
    factor_u64(m)
        .into_iter()
        .fold(m, |acc, (p, _)| acc / p * (p - 1))
}

/// Least `e ≥ 1` with `a^e ≡ 1 (mod m)`.
pub fn multiplicative_order(a: u64, m: u64) -> Result<u64, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroModulus);
    }
    if m == 1 {
        return Ok(1);
    }
    if a.gcd(&m) != 1 {
        return Err(ArithError::NotCoprime { a, m });
    }
    let mut order = euler_phi(m);
    for (q, _) in factor_u64(order) {
        while order.is_multiple_of(q) && pow_mod(a, order / q, m) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Whether `a` generates `(Z/q)^×` for a prime `q`.
pub fn is_primitive_root(a: u64, q: u64) -> Result<bool, ArithError> {
    if !is_prime_u64(q) {
        return Err(ArithError::NotPrime(q.to_string()));
    }
    Ok(multiplicative_order(a % q, q)? == q - 1)
}

/// Exact p-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    Some(v)
}

/// Primes in `[lo, hi]` by trial division; fine for the small ranges used here.
pub fn primes_between(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime_u64(n))
}

pub(crate) fn to_u64(n: &BigInt) -> Option<u64> {
    n.to_u64()
}
