//! End-to-end certification of index 2 for the image of Galois.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::anni::{check_anni_conditions, exceptional_primes, AnniChoices, ConditionReport};
use super::frobenius::{
    frobenius_candidates, transvection_at, transvection_witness, zywina_from_charpoly,
    TransvectionEvidence, ZywinaEvidence,
};
use super::galois::{galois_certificate, GaloisCertificate};
use super::CriteriaError;
use crate::config::Config;
use crate::curve::{CountOptions, CurveSpec, FrobeniusData};
use crate::matgrp::{
    embedded_symmetric_order, sp_order_formula, verify_preimage_generation, PreimageReport,
};
use crate::{arith::is_prime_u64, data, VERSION};

/// Results from outside this crate that the certificate depends on. Each one
/// is listed in every report.
pub const RESIDUAL_ASSUMPTIONS: [&str; 6] = [
    "transvection criterion: if f has type 1-{2} at a prime p not dividing 2l, the mod-l image contains a transvection",
    "large-prime criterion: conditions (1)-(6) give Sp_2g(F_l) inside the mod-l image for every prime l > g outside {2, 3, q1, q2, q3, p2, p3}",
    "irreducibility criterion: a transvection together with an irreducible, primitive action gives Sp_2g(F_l) inside the mod-l image; a Frobenius polynomial irreducible mod l with trace prime to l gives irreducibility and primitivity",
    "genus-2 lifting lemma: a closed subgroup of Sp_4(Z_2) surjecting onto Sp_4(F_2) is all of Sp_4(Z_2)",
    "Serre-type lifting lemma: a closed subgroup of Sp_6(Z_2) agreeing with the full preimage of S_8 modulo 8 is the full 2-adic preimage",
    "index-two structure: the commutator subgroup of the hyperelliptic group GS_g has index 2 and splits as its 2-adic part times the odd-prime symplectic groups, so the two hypotheses together give index 2",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoAdicEvidence {
    pub route: String,
    pub passed: bool,
    pub detail: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preimage: Option<PreimageReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mod2Verdict {
    pub galois: Option<GaloisCertificate>,
    pub galois_failure: Option<String>,
    pub two_adic: TwoAdicEvidence,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallPrimeVerdict {
    pub ell: u64,
    pub transvection: Option<TransvectionEvidence>,
    pub transvection_failure: Option<String>,
    pub frobenius: Option<ZywinaEvidence>,
    pub frobenius_failure: Option<String>,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every sub-verdict passed.
    Certified,
    /// Everything passed except condition (5).
    CertifiedConditional,
    NotCertified,
}

impl Verdict {
    pub fn exit_ok(self) -> bool {
        !matches!(self, Verdict::NotCertified)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityReport {
    pub schema: u32,
    pub version: String,
    pub seed: u64,
    pub input_hashes: BTreeMap<String, String>,
    pub label: String,
    pub genus: usize,
    pub mod2: Mod2Verdict,
    pub large_primes: ConditionReport,
    /// Exceptional primes missing from the small-prime list.
    pub uncovered_primes: Vec<u64>,
    pub small_primes: Vec<SmallPrimeVerdict>,
    pub residual_assumptions: Vec<String>,
    pub verdict: Verdict,
    pub unmet: Vec<String>,
    pub claim: String,
}

fn sha256_json<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable");
    hex::encode(Sha256::digest(&bytes))
}

fn two_adic(g: usize, config: &Config) -> Result<TwoAdicEvidence, CriteriaError> {
    match g {
        2 => {
            let sym = embedded_symmetric_order(2, config.seed)?;
            let sp = sp_order_formula(2, 1);
            Ok(TwoAdicEvidence {
                route: "S_6 = Sp_4(F_2), then the genus-2 lifting lemma".into(),
                passed: sym == sp,
                detail: vec![format!("|image of S_6| = {sym}, |Sp_4(F_2)| = {sp}")],
                preimage: None,
            })
        }
        3 => {
            let gens = data::mod8_generators().matrices()?;
            let rep = verify_preimage_generation(3, 3, &gens, config.seed, config.long)?;
            let mut detail = vec![
                format!(
                    "<e, f> mod 8 has order {} (target {})",
                    rep.order, rep.target_order
                ),
                format!(
                    "mod-2 image order {} (target {})",
                    rep.mod2_order, rep.mod2_target
                ),
            ];
            if let Some(why) = rep.failure() {
                detail.push(why.to_string());
            }
            Ok(TwoAdicEvidence {
                route: "full preimage of S_8 modulo 8, then the Serre-type lifting lemma".into(),
                passed: rep.passed(),
                detail,
                preimage: Some(rep),
            })
        }
        _ => Ok(TwoAdicEvidence {
            route: "none".into(),
            passed: false,
            detail: vec![format!(
                "2-adic lifting is only established for g in {{2, 3}}, got g = {g}"
            )],
            preimage: None,
        }),
    }
}

/// Good primes tried per `ℓ` when the choices do not name one.
const FROBENIUS_SEARCH_LIMIT: usize = 64;

struct FrobeniusCache<'a> {
    curve: &'a CurveSpec,
    opts: CountOptions,
    cache: BTreeMap<u64, FrobeniusData>,
}

impl FrobeniusCache<'_> {
    fn get(&mut self, p: u64) -> Result<&FrobeniusData, CriteriaError> {
        if !self.cache.contains_key(&p) {
            let data = self.curve.frobenius_charpoly(p, &self.opts)?;
            self.cache.insert(p, data);
        }
        Ok(&self.cache[&p])
    }
}

fn frobenius_for(
    cache: &mut FrobeniusCache<'_>,
    ell: u64,
    chosen: Option<u64>,
    cap: u64,
) -> Result<ZywinaEvidence, CriteriaError> {
    if let Some(p) = chosen {
        if p == ell {
            return Err(CriteriaError::FrobeniusPrime { ell, p });
        }
        return zywina_from_charpoly(cache.get(p)?, ell);
    }
    let candidates: Vec<u64> = frobenius_candidates(cache.curve, ell, cap)
        .take(FROBENIUS_SEARCH_LIMIT)
        .collect();
    for p in candidates {
        let ev = zywina_from_charpoly(cache.get(p)?, ell)?;
        if ev.passed {
            return Ok(ev);
        }
    }
    Err(CriteriaError::NoFrobeniusPrime { ell, cap })
}

/// Run every check and assemble the report. Sub-verdict failures are recorded
/// in the report; only malformed input or internal errors return `Err`.
pub fn maximality_pipeline(
    curve: &CurveSpec,
    choices: &AnniChoices,
    small_primes: &[u64],
    config: &Config,
) -> Result<MaximalityReport, CriteriaError> {
    config
        .validate()
        .map_err(|e| CriteriaError::Choices(e.to_string()))?;
    choices.validate()?;
    let g = curve.genus;
    let f = &curve.f;
    for &l in small_primes {
        if l == 2 || !is_prime_u64(l) {
            return Err(CriteriaError::Ell(l));
        }
    }
    let mut small: Vec<u64> = small_primes.to_vec();
    small.sort_unstable();
    small.dedup();

    let mut unmet = Vec::new();

    // mod 2 and the 2-adic step
    let (galois, galois_failure) = match galois_certificate(f, config.prime_bound, config.seed) {
        Ok(c) => (Some(c), None),
        Err(e @ CriteriaError::GaloisInconclusive { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let two_adic = two_adic(g, config)?;
    if galois.is_none() {
        unmet.push(format!(
            "mod-2 image: {}",
            galois_failure.as_deref().unwrap_or("no certificate")
        ));
    }
    if !two_adic.passed {
        unmet.push(format!("2-adic step: {}", two_adic.detail.join("; ")));
    }
    let mod2 = Mod2Verdict {
        passed: galois.is_some() && two_adic.passed,
        galois,
        galois_failure,
        two_adic,
    };

    // large primes
    let large = check_anni_conditions(f, g, choices)?;
    for c in &large.conditions {
        if !c.passed {
            unmet.push(format!("condition ({})", c.index));
        }
    }

    // exceptional primes
    let uncovered: Vec<u64> = exceptional_primes(g, choices)
        .into_iter()
        .filter(|l| !small.contains(l))
        .collect();
    for l in &uncovered {
        unmet.push(format!("exceptional prime {l} not in the small-prime list"));
    }
    let mut cache = FrobeniusCache {
        curve,
        opts: config.count_options(),
        cache: BTreeMap::new(),
    };
    let mut verdicts = Vec::with_capacity(small.len());
    for &ell in &small {
        let tv = match choices.transvection_primes.get(&ell) {
            Some(&p) => transvection_at(f, ell, p),
            None => transvection_witness(f, ell, config.prime_bound),
        };
        let fr = frobenius_for(
            &mut cache,
            ell,
            choices.frobenius_primes.get(&ell).copied(),
            config.enum_cap,
        );
        let (transvection, transvection_failure) = split(tv)?;
        let (frobenius, frobenius_failure) = split(fr)?;
        let passed = transvection.is_some() && frobenius.as_ref().is_some_and(|z| z.passed);
        if !passed {
            unmet.push(format!("small prime {ell}"));
        }
        verdicts.push(SmallPrimeVerdict {
            ell,
            transvection,
            transvection_failure,
            frobenius,
            frobenius_failure,
            passed,
        });
    }

    let verdict = if unmet.is_empty() {
        Verdict::Certified
    } else if unmet == ["condition (5)"] {
        Verdict::CertifiedConditional
    } else {
        Verdict::NotCertified
    };
    let claim = match verdict {
        Verdict::Certified => format!("[GS_{g} : image of Galois] = 2"),
        Verdict::CertifiedConditional => format!(
            "[GS_{g} : image of Galois] = 2, conditional on condition (5) (computed outcome: fails) and the residual assumptions"
        ),
        Verdict::NotCertified => "no claim".into(),
    };

    let mut input_hashes = BTreeMap::new();
    input_hashes.insert("curve".to_string(), sha256_json(&curve.to_file()));
    input_hashes.insert("choices".to_string(), sha256_json(choices));

    Ok(MaximalityReport {
        schema: 1,
        version: VERSION.to_string(),
        seed: config.seed,
        input_hashes,
        label: curve.label.clone(),
        genus: g,
        mod2,
        large_primes: large,
        uncovered_primes: uncovered,
        small_primes: verdicts,
        residual_assumptions: RESIDUAL_ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
        verdict,
        unmet,
        claim,
    })
}

/// Turn a sub-check result into evidence or a recorded failure; internal
/// errors still propagate.
fn split<T>(r: Result<T, CriteriaError>) -> Result<(Option<T>, Option<String>), CriteriaError> {
    match r {
        Ok(v) => Ok((Some(v), None)),
        Err(e @ CriteriaError::Internal(_)) => Err(e),
        Err(e) => Ok((None, Some(e.to_string()))),
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

impl MaximalityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "curve     {} (genus {})", self.label, self.genus);
        let _ = writeln!(s, "version   {}", self.version);
        let _ = writeln!(s, "seed      {}", self.seed);
        for (k, v) in &self.input_hashes {
            let _ = writeln!(s, "sha256    {k:<8} {v}");
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "[{}] mod 2", mark(self.mod2.passed));
        match &self.mod2.galois {
            Some(c) => {
                for w in &c.witnesses {
                    let _ = writeln!(
                        s,
                        "       {:<20} p = {:<6} degrees {:?}",
                        format!("{:?}", w.kind),
                        w.p,
                        w.pattern
                    );
                }
            }
            None => {
                let _ = writeln!(
                    s,
                    "       {}",
                    self.mod2.galois_failure.as_deref().unwrap_or("")
                );
            }
        }
        let _ = writeln!(
            s,
            "       2-adic: {} [{}]",
            self.mod2.two_adic.route,
            mark(self.mod2.two_adic.passed)
        );
        for d in &self.mod2.two_adic.detail {
            let _ = writeln!(s, "         {d}");
        }
        let _ = writeln!(s);
        for c in &self.large_primes.conditions {
            let _ = writeln!(
                s,
                "[{}] condition ({}) {}",
                mark(c.passed),
                c.index,
                c.statement
            );
            for e in &c.evidence {
                let _ = writeln!(s, "         {e}");
            }
        }
        let _ = writeln!(s);
        for v in &self.small_primes {
            let _ = writeln!(s, "[{}] l = {}", mark(v.passed), v.ell);
            match (&v.transvection, &v.transvection_failure) {
                (Some(t), _) => {
                    let _ = writeln!(s, "         transvection via p = {}: {}", t.p, t.display);
                }
                (_, e) => {
                    let _ = writeln!(s, "         transvection: {}", e.as_deref().unwrap_or(""));
                }
            }
            match (&v.frobenius, &v.frobenius_failure) {
                (Some(z), _) => {
                    let _ = writeln!(
                        s,
                        "         ch_{} = {}; mod {}: {} ({}), trace = {} mod {}",
                        z.p,
                        z.charpoly,
                        z.ell,
                        z.charpoly_mod_ell,
                        if z.irreducible_mod_ell {
                            "irreducible"
                        } else {
                            "reducible"
                        },
                        z.trace_mod_ell,
                        z.ell
                    );
                }
                (_, e) => {
                    let _ = writeln!(s, "         frobenius: {}", e.as_deref().unwrap_or(""));
                }
            }
        }
        for l in &self.uncovered_primes {
            let _ = writeln!(s, "[FAIL] l = {l} not covered");
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "residual assumptions:");
        for a in &self.residual_assumptions {
            let _ = writeln!(s, "  - {a}");
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "verdict   {:?}", self.verdict);
        if !self.unmet.is_empty() {
            let _ = writeln!(s, "unmet     {}", self.unmet.join(", "));
        }
        let _ = writeln!(s, "claim     {}", self.claim);
        s
    }
}
