//! The genus-2 and genus-3 example curves: local types, printed factorisations,
//! discriminants, and Galois certificates.

use hypermono::arith::{BigInt, PolyZ};
use hypermono::criteria::{
    check_anni_conditions, congruent_product, detect_type, galois_certificate,
    transvection_witness, TypeSpec,
};
use hypermono::data;

fn p(c: &[i64]) -> PolyZ {
    PolyZ::from_i64(c)
}

/// `g(x - a)` for an integer polynomial `g`.
fn at(g: PolyZ, a: i64) -> PolyZ {
    g.shift(&BigInt::from(-a))
}

struct Printed {
    spec: TypeSpec,
    modulus: u64,
    factors: Vec<PolyZ>,
}

fn printed_c2() -> Vec<Printed> {
    vec![
        Printed {
            spec: TypeSpec::new(1, vec![2], 3),
            modulus: 9,
            factors: vec![p(&[1, 1, 1, 1, 1]), p(&[-3, 0, 1])],
        },
        Printed {
            spec: TypeSpec::new(1, vec![2], 5),
            modulus: 25,
            factors: vec![p(&[1, 1, 1, 0, 1]), p(&[-5, 0, 1])],
        },
        Printed {
            spec: TypeSpec::new(1, vec![3, 3], 17),
            modulus: 289,
            factors: vec![p(&[-17, 0, 0, 1]), at(p(&[-17, 0, 0, 1]), 1)],
        },
        Printed {
            spec: TypeSpec::new(2, vec![5], 7),
            modulus: 343,
            factors: vec![p(&[-1, 1]), p(&[-49, 0, 0, 0, 0, 1])],
        },
    ]
}

fn printed_c3() -> Vec<Printed> {
    vec![
        Printed {
            spec: TypeSpec::new(1, vec![2], 5),
            modulus: 25,
            factors: vec![p(&[1, 0, 1, 1, 0, 0, 1]), p(&[5, 0, 1])],
        },
        Printed {
            spec: TypeSpec::new(1, vec![2], 13),
            modulus: 169,
            factors: vec![p(&[158, 41, 82, 70, 12, 51, 1]), at(p(&[78, 143, 1]), 10)],
        },
        Printed {
            spec: TypeSpec::new(1, vec![3, 5], 17),
            modulus: 289,
            factors: vec![at(p(&[17, 0, 0, 1]), 1), p(&[17, 0, 0, 0, 0, 1])],
        },
        Printed {
            spec: TypeSpec::new(2, vec![7], 19),
            modulus: 6859,
            factors: vec![p(&[1, 1]), p(&[361, 0, 0, 0, 0, 0, 0, 1])],
        },
    ]
}

#[test]
fn printed_factorisations_are_congruent_to_f() {
    for (curve, printed) in [(data::c2(), printed_c2()), (data::c3(), printed_c3())] {
        for pr in printed {
            assert!(
                congruent_product(&curve.f, &pr.factors, pr.modulus),
                "{} {}",
                curve.label,
                pr.spec.label()
            );
        }
    }
}

#[test]
fn printed_types_are_detected() {
    for (curve, printed) in [(data::c2(), printed_c2()), (data::c3(), printed_c3())] {
        for pr in printed {
            let w = detect_type(&curve.f, &pr.spec)
                .unwrap_or_else(|e| panic!("{}: {e}", pr.spec.label()));
            assert!(w.verify(&curve.f));
            for fac in &w.factors {
                assert_eq!(fac.valuations[0], Some(pr.spec.t));
            }
            println!("{} {:<16} {}", curve.label, pr.spec.label(), w.display());
        }
    }
}

#[test]
fn witness_displays() {
    let c2 = data::c2();
    let show = |spec: TypeSpec| detect_type(&c2.f, &spec).unwrap().display();
    assert_eq!(
        show(TypeSpec::new(1, vec![2], 3)),
        "(x^4 + x^3 + x^2 + x + 1)(x^2 - 3) mod 3^2"
    );
    assert_eq!(
        show(TypeSpec::new(2, vec![5], 7)),
        "(x - 1)(x^5 - 49) mod 7^3"
    );
    assert_eq!(
        show(TypeSpec::new(1, vec![3, 3], 17)),
        "(x^3 - 17)((x - 1)^3 - 17) mod 17^2"
    );
    let c3 = data::c3();
    assert_eq!(
        detect_type(&c3.f, &TypeSpec::new(2, vec![7], 19))
            .unwrap()
            .display(),
        "(x + 1)(x^7 + 361) mod 19^3"
    );
}

#[test]
fn conditions_for_both_curves() {
    let r3 = check_anni_conditions(&data::c3().f, 3, &data::c3_choices()).unwrap();
    assert!(r3.all_passed(), "{:?}", r3.failed());
    let r2 = check_anni_conditions(&data::c2().f, 2, &data::c2_choices()).unwrap();
    assert_eq!(r2.failed(), vec![5]);
    assert_eq!(r2.shift_search, None);
    let residues: Vec<u64> = r2.coefficients.iter().map(|c| c.residue).collect();
    // each residue is taken modulo its own required power of 2
    assert_eq!(residues, vec![23, 19, 13, 3, 1, 57, 1]);
}

#[test]
fn transvection_primes() {
    let (f2, f3) = (data::c2().f, data::c3().f);
    for (ell, want) in [(5, 3), (7, 3), (17, 3), (3, 5)] {
        assert_eq!(
            transvection_witness(&f2, ell, 10_000).unwrap().p,
            want,
            "C2 l = {ell}"
        );
    }
    for (ell, want) in [(3, 5), (7, 5), (13, 5), (17, 5), (19, 5), (5, 13)] {
        assert_eq!(
            transvection_witness(&f3, ell, 10_000).unwrap().p,
            want,
            "C3 l = {ell}"
        );
    }
}

#[test]
fn galois_certificates() {
    for curve in [data::c2(), data::c3()] {
        let cert = galois_certificate(&curve.f, 10_000, 1).unwrap();
        assert!(cert.primes().iter().all(|&p| p < 10_000));
        let again = galois_certificate(&curve.f, 10_000, 99).unwrap();
        assert_eq!(cert.primes(), again.primes());
        println!("{} {:?}", curve.label, cert.witnesses);
    }
}
