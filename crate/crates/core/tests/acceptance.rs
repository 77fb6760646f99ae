//! Acceptance suite: one PASS/FAIL line per criterion, with pinned time limits.
//!
//! Run with `cargo test -p hypermono --test acceptance -- --nocapture` to see
//! the report lines.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use hypermono::arith::{BigInt, PolyMod, PolyZ};
use hypermono::criteria::{
    congruent_product, detect_type, galois_certificate, maximality_pipeline, zywina_from_charpoly,
    CycleWitnessKind, TypeSpec, Verdict, RESIDUAL_ASSUMPTIONS,
};
use hypermono::curve::{CountOptions, CurveSpec, FrobeniusData};
use hypermono::matgrp::preimage_generators;
use hypermono::matgrp::verify_preimage_generation;
use hypermono::selftest::{genus_checks, preimage_order};
use hypermono::{data, Config};
use num_traits::Signed;

const DISC_LIMIT: Duration = Duration::from_secs(1);
const CHARPOLY_LARGEST_LIMIT: Duration = Duration::from_secs(60);
const TYPES_LIMIT: Duration = Duration::from_secs(5);
const ZYWINA_LIMIT: Duration = Duration::from_secs(1);
const GROUP_SUITE_LIMIT: Duration = Duration::from_secs(30);
const GENUS_TWO_PREIMAGE_LIMIT: Duration = Duration::from_secs(60);
const GALOIS_LIMIT: Duration = Duration::from_secs(10);
const GALOIS_PRIME_BOUND: u64 = 10_000;

struct Outcome {
    criterion: u8,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

fn product(factors: &[(&str, u32)]) -> BigInt {
    factors
        .iter()
        .fold(BigInt::from(1), |acc, (p, e)| acc * big(p).pow(*e))
}

fn poly(c: &[i64]) -> PolyZ {
    PolyZ::from_i64(c)
}

fn shifted(g: PolyZ, a: i64) -> PolyZ {
    g.shift(&BigInt::from(-a))
}

fn criterion_1() -> Outcome {
    let c2_claim = product(&[
        ("3", 1),
        ("5", 1),
        ("7", 8),
        ("17", 4),
        ("421", 1),
        ("6397", 1),
        ("103434941173345262214445927", 1),
        ("4899652830439610728976665849", 1),
    ]);
    let c3_claim = product(&[
        ("2", 44),
        ("5", 1),
        ("13", 1),
        ("17", 6),
        ("19", 12),
        ("409", 1),
        ("71347", 1),
        ("249200273817326443", 1),
        ("2259862376409853901527", 1),
        ("76378336963241484055881774103", 1),
        ("3700557180228322572272219236151", 1),
    ]);
    let mut passed = true;
    let mut detail = Vec::new();
    for (curve, claim) in [(data::c2(), c2_claim), (data::c3(), c3_claim)] {
        let start = Instant::now();
        let disc = curve.f.discriminant().unwrap();
        let took = start.elapsed();
        let ok = disc.abs() == claim && took < DISC_LIMIT;
        passed &= ok;
        detail.push(format!(
            "{}: {} in {:.3}s",
            curve.label,
            if ok { "equal" } else { "MISMATCH" },
            took.as_secs_f64()
        ));
    }
    Outcome {
        criterion: 1,
        name: "discriminant reproduction",
        passed,
        detail: detail.join("; "),
    }
}

/// Affine points by Euler's criterion in `F_p`, plus the points at infinity.
fn naive_count(f: &PolyZ, p: u64) -> u64 {
    let fp = f.reduce(p);
    let chi = |a: u64| -> i64 {
        if a == 0 {
            0
        } else if hypermono::arith::pow_mod(a, (p - 1) / 2, p) == 1 {
            1
        } else {
            -1
        }
    };
    let affine: i64 = (0..p).map(|x| 1 + chi(fp.eval(x))).sum();
    (affine + 1 + chi(fp.leading())) as u64
}

fn criterion_2(store: &mut BTreeMap<(String, u64), FrobeniusData>) -> Outcome {
    let printed: [(&str, u64, &str); 7] = [
        ("C2", 401, "T^4 - 49T^3 + 1257T^2 - 19649T + 160801"),
        ("C2", 61, "T^4 + 6T^3 + 54T^2 + 366T + 3721"),
        ("C2", 277, "T^4 + 31T^3 + 765T^2 + 8587T + 76729"),
        (
            "C3",
            101,
            "T^6 + 10T^5 + 60T^4 + 222T^3 + 6060T^2 + 102010T + 1030301",
        ),
        (
            "C3",
            89,
            "T^6 - 3T^5 + 93T^4 + 40T^3 + 8277T^2 - 23763T + 704969",
        ),
        (
            "C3",
            127,
            "T^6 - 12T^5 + 8T^4 + 548T^3 + 1016T^2 - 193548T + 2048383",
        ),
        (
            "C3",
            103,
            "T^6 - 7T^5 + 55T^4 - 191T^3 + 5665T^2 - 74263T + 1092727",
        ),
    ];
    let opts = CountOptions {
        workers: 1,
        ..CountOptions::default()
    };
    let mut passed = true;
    let mut detail = Vec::new();
    for (label, p, want) in printed {
        let curve: CurveSpec = if label == "C2" {
            data::c2()
        } else {
            data::c3()
        };
        let start = Instant::now();
        let data = curve.frobenius_charpoly(p, &opts).unwrap();
        let took = start.elapsed();
        let mut ok = data.display() == want && data.counts[0] == naive_count(&curve.f, p);
        if p == 127 {
            ok &= took < CHARPOLY_LARGEST_LIMIT;
            detail.push(format!("C3 p=127 in {:.2}s", took.as_secs_f64()));
        }
        if !ok {
            detail.push(format!("{label} p={p}: got {}", data.display()));
        }
        passed &= ok;
        store.insert((label.to_string(), p), data);
    }
    Outcome {
        criterion: 2,
        name: "Frobenius characteristic polynomials",
        passed,
        detail: detail.join("; "),
    }
}

/// (curve, t, q, p, printed modulus, printed factors)
type TypeCase = (&'static str, u32, Vec<u64>, u64, u64, Vec<PolyZ>);

fn criterion_3() -> Outcome {
    let cases: Vec<TypeCase> = vec![
        (
            "C2",
            1,
            vec![2],
            3,
            9,
            vec![poly(&[1, 1, 1, 1, 1]), poly(&[-3, 0, 1])],
        ),
        (
            "C2",
            1,
            vec![2],
            5,
            25,
            vec![poly(&[1, 1, 1, 0, 1]), poly(&[-5, 0, 1])],
        ),
        (
            "C2",
            1,
            vec![3, 3],
            17,
            289,
            vec![poly(&[-17, 0, 0, 1]), shifted(poly(&[-17, 0, 0, 1]), 1)],
        ),
        (
            "C2",
            2,
            vec![5],
            7,
            343,
            vec![poly(&[-1, 1]), poly(&[-49, 0, 0, 0, 0, 1])],
        ),
        (
            "C3",
            1,
            vec![2],
            5,
            25,
            vec![poly(&[1, 0, 1, 1, 0, 0, 1]), poly(&[5, 0, 1])],
        ),
        (
            "C3",
            1,
            vec![2],
            13,
            169,
            vec![
                poly(&[158, 41, 82, 70, 12, 51, 1]),
                shifted(poly(&[78, 143, 1]), 10),
            ],
        ),
        (
            "C3",
            1,
            vec![3, 5],
            17,
            289,
            vec![shifted(poly(&[17, 0, 0, 1]), 1), poly(&[17, 0, 0, 0, 0, 1])],
        ),
        (
            "C3",
            2,
            vec![7],
            19,
            6859,
            vec![poly(&[1, 1]), poly(&[361, 0, 0, 0, 0, 0, 0, 1])],
        ),
    ];
    let start = Instant::now();
    let mut passed = true;
    let mut detail = Vec::new();
    for (label, t, q, p, modulus, factors) in cases {
        let curve = if label == "C2" {
            data::c2()
        } else {
            data::c3()
        };
        let spec = TypeSpec::new(t, q, p);
        let printed_ok = congruent_product(&curve.f, &factors, modulus);
        let ok = match detect_type(&curve.f, &spec) {
            Ok(w) => {
                w.verify(&curve.f)
                    && w.factors.iter().all(|f| f.valuations[0] == Some(t))
                    && printed_ok
            }
            Err(e) => {
                detail.push(format!("{label} {}: {e}", spec.label()));
                false
            }
        };
        passed &= ok;
    }
    let took = start.elapsed();
    passed &= took < TYPES_LIMIT;
    detail.push(format!("8 witnesses in {:.3}s", took.as_secs_f64()));
    Outcome {
        criterion: 3,
        name: "type detections",
        passed,
        detail: detail.join("; "),
    }
}

fn criterion_4(store: &BTreeMap<(String, u64), FrobeniusData>) -> Outcome {
    let pairs = [
        ("C2", 3, 401),
        ("C2", 17, 401),
        ("C2", 5, 61),
        ("C2", 7, 277),
        ("C3", 3, 101),
        ("C3", 5, 89),
        ("C3", 7, 127),
        ("C3", 17, 127),
        ("C3", 13, 103),
        ("C3", 19, 103),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (label, ell, p) in pairs {
        let Some(data) = store.get(&(label.to_string(), p)) else {
            failed.push(format!("{label} ch_{p} missing"));
            continue;
        };
        match zywina_from_charpoly(data, ell) {
            Ok(ev) if ev.passed => {}
            other => failed.push(format!("{label} l={ell} p={p}: {other:?}")),
        }
    }
    let took = start.elapsed();
    let passed = failed.is_empty() && took < ZYWINA_LIMIT;
    let detail = if failed.is_empty() {
        format!("10 pairs in {:.3}s", took.as_secs_f64())
    } else {
        failed.join("; ")
    };
    Outcome {
        criterion: 4,
        name: "irreducibility and trace checks",
        passed,
        detail,
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut failed = Vec::new();
    let mut count = 0;
    for g in 2..=6 {
        for r in genus_checks(g, 1) {
            count += 1;
            if !r.passed {
                failed.push(format!("{}: {}", r.name, r.detail));
            }
        }
    }
    let took = start.elapsed();
    let passed = failed.is_empty() && took < GROUP_SUITE_LIMIT;
    let detail = if failed.is_empty() {
        format!("{count} checks for g = 2..6 in {:.2}s", took.as_secs_f64())
    } else {
        failed.join("; ")
    };
    Outcome {
        criterion: 5,
        name: "group-theory suite",
        passed,
        detail,
    }
}

fn criterion_6() -> Outcome {
    let mut passed = true;
    let mut detail = Vec::new();

    let start = Instant::now();
    let rep2 = verify_preimage_generation(2, 3, &preimage_generators(2, 3), 1, true).unwrap();
    let took = start.elapsed();
    let ok2 = rep2.passed()
        && rep2.order == preimage_order(2, 3).to_string()
        && took < GENUS_TWO_PREIMAGE_LIMIT;
    passed &= ok2;
    detail.push(format!(
        "g=2 order {} in {:.2}s",
        rep2.order,
        took.as_secs_f64()
    ));

    let start = Instant::now();
    let gens = data::mod8_generators().matrices().unwrap();
    let rep3 = verify_preimage_generation(3, 3, &gens, 1, true).unwrap();
    let took = start.elapsed();
    let target = "177329235327713280"; // 40320 * 2^42
    let ok3 = rep3.passed()
        && rep3.symplectic
        && rep3.mod2_in_image
        && rep3.mod2_order == "40320"
        && rep3.order == target
        && rep3.target_order == target
        && rep3.chain_verified;
    passed &= ok3;
    detail.push(format!(
        "g=3 <e, f> order {} in {:.2}s",
        rep3.order,
        took.as_secs_f64()
    ));
    Outcome {
        criterion: 6,
        name: "mod-8 preimage order",
        passed,
        detail: detail.join("; "),
    }
}

/// Degrees of the irreducible factors of `f mod p` from `deg gcd(f, x^{p^d} - x)`
/// and Möbius inversion; independent of the factorisation code.
fn degree_pattern_oracle(f: &PolyZ, p: u64) -> Vec<usize> {
    let fp = f.reduce(p).monic().unwrap();
    let n = fp.deg();
    let x = PolyMod::x(p);
    let mut frob = x.clone();
    let mut roots_in = vec![0usize; n + 1];
    for slot in roots_in.iter_mut().skip(1) {
        frob = frob.pow_mod_u64(p, &fp);
        *slot = fp.gcd(&frob.sub(&x)).deg();
    }
    // roots_in[d] = Σ_{k | d} k n_k
    let mut counts = vec![0usize; n + 1];
    for d in 1..=n {
        let lower: usize = (1..d).filter(|k| d % k == 0).map(|k| k * counts[k]).sum();
        counts[d] = (roots_in[d] - lower) / d;
    }
    let mut out = Vec::new();
    for (d, &c) in counts.iter().enumerate() {
        out.extend(std::iter::repeat_n(d, c));
    }
    out
}

fn criterion_7() -> Outcome {
    // witness primes found by the prime sweep, then frozen
    let frozen = [
        ("C2", data::c2(), [13u64, 23, 19]),
        ("C3", data::c3(), [3u64, 11, 107]),
    ];
    let mut passed = true;
    let mut detail = Vec::new();
    for (label, curve, primes) in frozen {
        let start = Instant::now();
        let cert = galois_certificate(&curve.f, GALOIS_PRIME_BOUND, 1);
        let took = start.elapsed();
        let ok = match cert {
            Ok(c) => {
                c.primes() == primes
                    && c.witnesses.iter().all(|w| {
                        w.p < GALOIS_PRIME_BOUND
                            && w.rechecked
                            && degree_pattern_oracle(&curve.f, w.p) == w.pattern
                            && w.kind.matches(&w.pattern, 2 * curve.genus + 2)
                    })
                    && c.witnesses.iter().map(|w| w.kind).eq(CycleWitnessKind::ALL)
            }
            Err(_) => false,
        } && took < GALOIS_LIMIT;
        passed &= ok;
        detail.push(format!(
            "{label} primes {primes:?} in {:.3}s",
            took.as_secs_f64()
        ));
    }
    Outcome {
        criterion: 7,
        name: "Galois certificates",
        passed,
        detail: detail.join("; "),
    }
}

fn criterion_8() -> Outcome {
    let config = Config::default();
    let verbatim: Vec<String> = RESIDUAL_ASSUMPTIONS.iter().map(|s| s.to_string()).collect();
    let mut passed = true;
    let mut detail = Vec::new();

    let c3 = data::c3();
    let choices = data::c3_choices();
    let r3 = maximality_pipeline(&c3, &choices, &choices.small_primes_or(3), &config).unwrap();
    let ok3 = r3.verdict == Verdict::Certified
        && r3.verdict.exit_ok()
        && r3.large_primes.all_passed()
        && r3.small_primes.iter().all(|s| s.passed)
        && r3.residual_assumptions == verbatim;
    passed &= ok3;
    detail.push(format!("C3 {:?}", r3.verdict));

    let c2 = data::c2();
    let choices = data::c2_choices();
    let r2 = maximality_pipeline(&c2, &choices, &choices.small_primes_or(2), &config).unwrap();
    let ok2 = r2.verdict == Verdict::CertifiedConditional
        && r2.verdict.exit_ok()
        && r2.large_primes.failed() == vec![5]
        && r2.mod2.passed
        && r2.small_primes.iter().all(|s| s.passed)
        && r2.residual_assumptions == verbatim;
    passed &= ok2;
    detail.push(format!(
        "C2 {:?} (condition (5) computed: fails)",
        r2.verdict
    ));
    Outcome {
        criterion: 8,
        name: "end-to-end verification",
        passed,
        detail: detail.join("; "),
    }
}

#[test]
fn acceptance() {
    let mut store = BTreeMap::new();
    let outcomes = vec![
        criterion_1(),
        criterion_2(&mut store),
        criterion_3(),
        criterion_4(&store),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    for o in &outcomes {
        println!(
            "{} criterion {}: {:<38} {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.criterion,
            o.name,
            o.detail
        );
    }
    let failed: Vec<u8> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.criterion)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
