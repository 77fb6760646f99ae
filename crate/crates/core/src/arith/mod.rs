//! Exact integer, modular, and polynomial arithmetic.
//!
//! Big integers come from `num-bigint`; everything polynomial is implemented here:
//! integer polynomials with resultants and discriminants, dense polynomials over
//! `Z/mZ`, factorisation over prime fields, Hensel lifting, and `F_{p^d}`.

mod factor;
mod fq;
mod hensel;
mod int;
mod polymod;
mod polyz;

use thiserror::Error;

pub use factor::{
    distinct_degree, factor_mod_p, find_irreducible, is_irreducible, squarefree_decomposition,
    Factorization,
};
pub use fq::{FqElement, FqField, MAX_EXT_DEGREE};
pub use hensel::hensel_lift;
pub use int::{
    factor_u64, inv_mod, is_prime, is_prime_u64, is_primitive_root, jacobi, mul_mod,
    multiplicative_order, pow_mod, primes_between, valuation, Primality,
};
pub use num_bigint::{BigInt, BigUint};
pub use polymod::{product, PolyMod};
pub use polyz::{bareiss_determinant, PolyZ};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("primality is only defined for n > 1, got {0}")]
    NotAboveOne(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("{a} and {m} are not coprime")]
    NotCoprime { a: u64, m: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("constant polynomial has no discriminant")]
    ConstantPolynomial,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("leading coefficient is not a unit")]
    NonUnitLeading,
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("modulus exceeds machine arithmetic range")]
    ModulusOverflow,
    #[error("extension degree {0} unsupported (1..={MAX_EXT_DEGREE})")]
    ExtensionDegree(usize),
    #[error("defining polynomial is not monic irreducible")]
    NotIrreducible,
    #[error("invalid Hensel input: {0}")]
    BadLiftInput(String),
}
