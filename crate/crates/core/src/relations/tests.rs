use std::sync::Arc;

use super::*;
use crate::patterns::{enumerate_basis, highest_weight_pattern, Mode, ModuleParams, Signature};
use crate::qnum::{QValue, Rational};

fn engine(sig: &str, xi0: i64, xi1: i64, q: &str, mode: Mode) -> Engine {
    let s: Signature = sig.parse().unwrap();
    let params = ModuleParams::new(s, Rational::from(xi0), Rational::from(xi1), q.parse::<QValue>().unwrap(), mode).unwrap();
    Engine::new(params)
}

fn basis(e: &Engine, level: usize) -> Vec<CPattern> {
    enumerate_basis(e.params().signature(), level).unwrap()
}

#[test]
fn cartan_pairs_on_small_basis() {
    let e = engine("-1:1:2,1,0", 2, 0, "3/2", Mode::Small);
    let b = basis(&e, 4);
    let r = cartan_suite((-3, 3), &b, &e).unwrap();
    assert!(r.passed, "{:?}", r.failures);
    assert!(r.checked > 0);
}

#[test]
fn ef_on_hw_of_flat_pair_is_zero() {
    // h_1 - h_2 on the hw of (1,0) on [0,1] is M_1 - M_2 = 0.
    let e = engine("0:1:1,0", 1, 0, "3/2", Mode::Completed);
    let hw = highest_weight_pattern(e.params().signature());
    let r = check_cartan(1, 1, &[hw], &e).unwrap();
    assert!(r.passed);
}

#[test]
fn serre_relations_small() {
    let e = engine("-1:0:1,0", 1, 0, "3/2", Mode::Completed);
    let b = basis(&e, 4);
    let r = check_serre(SerreFamily::E, SerreVariant::B, 0, 1, &b, &e).unwrap();
    assert!(r.passed, "{:?}", r.failures);
    let r = check_serre(SerreFamily::F, SerreVariant::B, -2, -1, &b, &e).unwrap();
    assert!(r.passed, "{:?}", r.failures);
    let hw = highest_weight_pattern(e.params().signature());
    let r = check_serre(SerreFamily::E, SerreVariant::A, 0, 5, &[hw], &e).unwrap();
    assert!(r.passed);
    assert!(check_serre(SerreFamily::E, SerreVariant::A, 0, 1, &b, &e).is_err());
}

#[test]
fn a_wrong_coefficient_is_caught() {
    // Replacing [2] by 2 must break (3b) for q != 1 somewhere on V_4.
    let e = engine("-1:1:2,1,0", 2, 0, "3/2", Mode::Small);
    let b = basis(&e, 4);
    let two = RadicalSum::from_rational(Rational::from(2));
    let one = RadicalSum::one();
    use GeneratorLabel::F;
    let terms = vec![(one.clone(), vec![F(0), F(0), F(1)]), (two.neg(), vec![F(0), F(1), F(0)]), (one, vec![F(1), F(0), F(0)])];
    let broken = b.iter().any(|p| !combination(&e, p, &terms).unwrap().is_zero());
    assert!(broken);
}

#[test]
fn highest_weight_example() {
    let e = engine("-1:1:2,1,0", 2, 0, "3/2", Mode::Completed);
    let r = check_highest_weight(&e, (-8, 8)).unwrap();
    assert!(r.passed);
    let eig = &r.details["eigenvalues"];
    assert_eq!(eig["-1"], "0");
    assert_eq!(eig["0"], "-1");
    assert_eq!(eig["1"], "0");
    let z = engine("0:0:0", 0, 0, "2", Mode::Completed);
    let r = check_highest_weight(&z, (-3, 3)).unwrap();
    assert!(r.details["eigenvalues"].as_object().unwrap().values().all(|v| v == "0"));
}

#[test]
fn interval_arithmetic() {
    let e = OpenInterval::raising(2);
    assert_eq!(e.integer_ends(), Some((-1, -1)));
    assert!(!e.contains(0) && !e.contains(-2) && e.contains(-1));
    let e3 = OpenInterval::raising(3);
    assert_eq!(e3.integer_ends(), Some((-1, 0)));
    assert_eq!(OpenInterval { lo2: 0, hi2: 1 }.integer_ends(), None);
    assert_eq!(OpenInterval::raising(2).to_string(), "(-3/2, 0)");
}

#[test]
fn restrictedness_levels() {
    let e = engine("-1:1:2,1,0", 2, 0, "3/2", Mode::Completed);
    for level in [2, 3, 4] {
        let r = check_restrictedness(&e, level, Tightness::Required).unwrap();
        assert!(r.passed, "N={level}: {:?}", r.failures);
    }
    let f = engine("0:1:1,0", 1, 0, "3/2", Mode::Completed);
    // V_2 of (1, 0) is one line, so no E witness exists; bounds still hold.
    let strict = check_restrictedness(&f, 2, Tightness::Required).unwrap();
    assert!(!strict.passed && strict.failures.iter().all(|x| x.case["relation"] == "tightness"));
    let loose = check_restrictedness(&f, 2, Tightness::Reported).unwrap();
    assert!(loose.passed);
    assert!(loose.details["tightness_missing"].as_array().unwrap().iter().any(|m| m["generator"] == "E-1"));
    let b = basis(&f, 3);
    assert!(b.iter().all(|p| f.apply(GeneratorLabel::F(5), p).unwrap().is_zero()));
}

#[test]
fn boundary_form() {
    let e = engine("-1:1:2,1,0", 2, 0, "3/2", Mode::Completed);
    let r = boundary_suite(&e, &[2, 3, 4]).unwrap();
    assert!(r.passed, "{:?}", r.failures);
    assert!(check_boundary_f(&e, 4, 1).is_err());
    // (2,0) on [0,1], k = 0 at N = 0 is excluded; use N = 2, k = 1 with M_2 = M_1.
    let w = engine("0:1:2,0", 2, 0, "2", Mode::Completed);
    let hw = highest_weight_pattern(w.params().signature());
    assert!(w.apply(GeneratorLabel::F(1), &hw).unwrap().is_zero());
}

#[test]
fn charge_values() {
    let e = engine("-1:1:2,1,0", 2, 0, "3/2", Mode::Completed);
    let r = check_charge(&e, 6).unwrap();
    assert!(r.passed, "{:?}", r.failures);
    assert_eq!(r.details["eigenvalue"], "-1");
    let z = engine("0:0:0", 0, 0, "3/2", Mode::Completed);
    assert_eq!(check_charge(&z, 4).unwrap().details["eigenvalue"], "0");
    let bad = engine("-1:1:2,1,0", 2, 1, "3/2", Mode::Small);
    let r = check_charge(&bad, 6).unwrap();
    assert!(!r.passed);
    assert_eq!(r.failures[0].case["relation"], "divergence");
    // Tails that cancel pairwise still diverge.
    let cancel = engine("-1:1:2,1,0", 3, -1, "3/2", Mode::Small);
    assert!(!check_charge(&cancel, 6).unwrap().passed);
}

#[test]
fn classical_mode_passes_too() {
    let e = engine("-1:1:2,1,0", 2, 0, "classical", Mode::Completed);
    let b = basis(&e, 4);
    assert!(cartan_suite((-3, 3), &b, &e).unwrap().passed);
    assert!(serre_suite((-2, 2), &b, &e).unwrap().passed);
}

#[test]
fn report_merge_is_ordered() {
    let e = engine("-1:1:2,1,0", 2, 0, "3/2", Mode::Completed);
    let b = basis(&e, 3);
    let a = serde_json::to_string(&cartan_suite((-2, 2), &b, &e).unwrap()).unwrap();
    let c = serde_json::to_string(&cartan_suite((-2, 2), &b, &Engine::new(e.params().clone())).unwrap()).unwrap();
    assert_eq!(a, c);
    let _ = Arc::clone(e.params().signature());
}
