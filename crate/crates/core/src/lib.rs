//! Certification of maximal Galois images for Jacobians of hyperelliptic curves.
//!
//! The crate is layered bottom-up:
//!
//! - [`arith`]: exact integers, polynomials over `Z` and `Z/mZ`, factorisation over
//!   `F_p`, Hensel lifting, discriminants, primality, `F_{p^d}`.
//! - [`symplectic`]: symplectic forms, multipliers, the Lie algebras `gsp`/`sp`,
//!   kernel layers, and the commutator-span computation.
//! - [`symembed`]: the embedding `S_{2g+2} → Sp_{2g}(F_2)` in tensor notation and
//!   the conjugation-span computation.
//! - [`matgrp`]: Schreier–Sims for matrix groups over `Z/2^k`.
//! - [`curve`]: hyperelliptic curves, point counts, Frobenius polynomials.
//! - [`criteria`]: type detection, the large-prime conditions, Frobenius
//!   irreducibility checks, Galois certificates, and the maximality pipeline.

pub mod arith;
pub mod config;
pub mod criteria;
pub mod curve;
pub mod data;
pub mod matgrp;
pub mod selftest;
pub mod symembed;
pub mod symplectic;

pub use config::Config;

/// Version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
