//! Local factorisation types, the large-prime conditions, small-prime checks,
//! Galois certificates, and the maximality pipeline.

mod anni;
mod frobenius;
mod galois;
mod pipeline;
mod typedetect;

use thiserror::Error;

pub use anni::{
    check_anni_conditions, condition5_checks, condition5_shift_search, exceptional_primes,
    AnniChoices, CoefficientCheck, ConditionOutcome, ConditionReport, DiscCheck, NamedWitness,
    PrimePower,
};
pub use frobenius::{
    frobenius_candidates, transvection_at, transvection_witness, zywina_check,
    zywina_from_charpoly, TransvectionEvidence, ZywinaEvidence,
};
pub use galois::{galois_certificate, CycleWitness, CycleWitnessKind, GaloisCertificate};
pub use pipeline::{
    maximality_pipeline, MaximalityReport, Mod2Verdict, SmallPrimeVerdict, TwoAdicEvidence,
    Verdict, RESIDUAL_ASSUMPTIONS,
};
pub use typedetect::{
    congruent_product, detect_type, EisensteinFactor, TypeFailure, TypeSpec, TypeWitness,
};

use crate::arith::ArithError;
use crate::curve::CurveError;
use crate::matgrp::MatGrpError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("malformed choices: {0}")]
    Choices(String),
    #[error("degree {got} does not match genus {genus}")]
    Degree { genus: usize, got: usize },
    #[error("f is not squarefree")]
    NotSquarefree,
    #[error("l = {0} must be an odd prime")]
    Ell(u64),
    #[error("p = {p} cannot witness a transvection for l = {ell} (need p not dividing 2l)")]
    TransvectionPrime { ell: u64, p: u64 },
    #[error("Frobenius prime p = {p} must differ from l = {ell}")]
    FrobeniusPrime { ell: u64, p: u64 },
    #[error("no type 1-{{2}} prime below {bound} for l = {ell}")]
    NoTransvection { ell: u64, bound: u64 },
    #[error("no good prime with p^g <= {cap} has Frobenius polynomial irreducible mod {ell} with nonzero trace")]
    NoFrobeniusPrime { ell: u64, cap: u64 },
    #[error("no Galois certificate from primes below {bound}; missing {missing:?}")]
    GaloisInconclusive {
        bound: u64,
        missing: Vec<CycleWitnessKind>,
    },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Type(#[from] TypeFailure),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    MatGrp(#[from] MatGrpError),
}
