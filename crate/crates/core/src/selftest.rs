//! The group-theory verification suite behind `hypermono selftest`.

use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::data;
use crate::matgrp::{
    embedded_symmetric_order, preimage_generators, verify_preimage_generation, MatGrpError,
};
use crate::symembed::{check_relations, conjugation_span_check};
use crate::symplectic::{commutator_span_check, sp_order_prime, SpanOutcome};

/// One line of the suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

fn timed(name: String, f: impl FnOnce() -> (bool, String)) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = f();
    CheckResult {
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn describe<E: std::fmt::Display>(r: Result<(bool, String), E>) -> (bool, String) {
    r.unwrap_or_else(|e| (false, format!("error: {e}")))
}

/// Checks for one genus: commutator spans for `ℓ ∈ {2, 3, 5}`, the conjugation
/// span, the transposition relations, and whether `S_{2g+2} → Sp_{2g}(F_2)` is onto.
pub fn genus_checks(g: usize, seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for ell in [2u64, 3, 5] {
        out.push(timed(format!("commutator span g={g} l={ell}"), || {
            describe(commutator_span_check(g, ell).map(|r| {
                let ok = r.outcome == SpanOutcome::Equal && r.dim == 2 * g * g + g && r.inside_sp;
                (ok, format!("dim {} of {}", r.dim, r.target_dim))
            }))
        }));
    }
    out.push(timed(format!("conjugation span g={g}"), || {
        describe(conjugation_span_check(g).map(|r| {
            let failed = r.witnesses.iter().filter(|w| !w.passed()).count();
            (
                r.passed(),
                format!(
                    "dim {}, {} targeted vectors, {failed} failed",
                    r.span.dim,
                    r.witnesses.len()
                ),
            )
        }))
    }));
    out.push(timed(format!("transposition relations g={g}"), || {
        describe(check_relations(g).map(|r| {
            (
                r.passed(),
                format!(
                    "involution {} braid {} commuting {} multiplier {}",
                    r.involutions, r.braids, r.commuting, r.multiplier_one
                ),
            )
        }))
    }));
    out.push(timed(
        format!("embedding onto Sp_{}(F_2) g={g}", 2 * g),
        || {
            describe(embedded_symmetric_order(g, seed).map(|order| {
                let sp = sp_order_prime(g, 2);
                // onto exactly when g = 2
                (
                    (order == sp) == (g == 2),
                    format!("|image| = {order}, |Sp| = {sp}"),
                )
            }))
        },
    ));
    out
}

fn preimage_check(g: usize, k: u32, seed: u64, full_sweep: bool, bundled: bool) -> CheckResult {
    let label = if bundled {
        "bundled <e, f>"
    } else {
        "transvection lifts"
    };
    timed(
        format!(
            "preimage of S_{} mod {} g={g} ({label})",
            2 * g + 2,
            1u64 << k
        ),
        || {
            describe((|| -> Result<(bool, String), MatGrpError> {
                let gens = if bundled {
                    data::mod8_generators().matrices()?
                } else {
                    preimage_generators(g, k)
                };
                let rep = verify_preimage_generation(g, k, &gens, seed, full_sweep)?;
                let mut detail = format!("order {} (target {})", rep.order, rep.target_order);
                if let Some(why) = rep.failure() {
                    detail.push_str(&format!("; {why}"));
                }
                Ok((rep.passed(), detail))
            })())
        },
    )
}

/// The full suite for the listed genera. The mod-8 analogue for `g = 2` runs
/// whenever `g = 2` is included; `long` adds the `g = 3` mod-8 computation on
/// the bundled generators with the full Schreier sweep.
pub fn run_suite(genera: &[usize], long: bool, seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for &g in genera {
        out.extend(genus_checks(g, seed));
        if g == 2 {
            out.push(preimage_check(2, 3, seed, true, false));
        }
        if g == 3 && long {
            out.push(preimage_check(3, 3, seed, true, true));
        }
    }
    out
}

/// `|S_{2g+2}| · 2^{(k-1)(2g²+g)}`
pub fn preimage_order(g: usize, k: u32) -> BigUint {
    crate::matgrp::factorial(2 * g + 2) * BigUint::from(2u32).pow((k - 1) * (2 * g * g + g) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_two_suite() {
        let results = run_suite(&[2], false, 1);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
        assert_eq!(results.len(), 7);
        assert_eq!(preimage_order(2, 3), BigUint::from(720u32) << 20usize);
    }
}
