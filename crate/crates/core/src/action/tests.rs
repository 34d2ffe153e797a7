use std::sync::Arc;

use super::*;
use crate::patterns::{enumerate_basis, highest_weight_pattern, theta, Mode, Signature};
use crate::qnum::{qbracket, QValue, Rational};

fn params(sig: &str, xi0: i64, xi1: i64, q: &str) -> ModuleParams {
    let s: Signature = sig.parse().unwrap();
    ModuleParams::new(s, xi0.into(), xi1.into(), q.parse().unwrap(), Mode::Small).unwrap()
}

fn pat(pr: &ModuleParams, rows: Vec<Vec<i64>>) -> CPattern {
    CPattern::from_rows(pr.signature().clone(), rows).unwrap()
}

fn one_term(v: &PatternVector) -> (CPattern, RadicalSum) {
    assert_eq!(v.len(), 1, "{v:?}");
    let (p, c) = v.iter().next().unwrap();
    (p.clone(), c.clone())
}

#[test]
fn parse_and_print_labels() {
    for s in ["E3", "F-2", "H0", "C"] {
        assert_eq!(s.parse::<GeneratorLabel>().unwrap().to_string(), s);
    }
    assert_eq!("e_-4".parse::<GeneratorLabel>().unwrap(), GeneratorLabel::E(-4));
    assert!("X1".parse::<GeneratorLabel>().is_err());
    assert!("E".parse::<GeneratorLabel>().is_err());
}

#[test]
fn central_element_is_scalar() {
    let pr = params("-1:1:2,1,0", 5, 2, "3/2");
    for p in enumerate_basis(pr.signature(), 3).unwrap() {
        let (t, c) = one_term(&apply_generator(GeneratorLabel::C, &p, &pr).unwrap());
        assert_eq!(t, p);
        assert_eq!(c, RadicalSum::from_rational(Rational::from(3)));
    }
}

#[test]
fn raising_operators_kill_highest_weight() {
    for q in ["3/2", "classical"] {
        let pr = params("-2:2:4,3,1,1,0", 4, 0, q);
        let hw = highest_weight_pattern(pr.signature());
        for i in -8..=8 {
            assert!(apply_generator(GeneratorLabel::E(i), &hw, &pr).unwrap().is_zero(), "E{i}");
        }
    }
}

#[test]
fn index_minus_one_by_hand() {
    // M_-1 = 1, M_0 = 0: row 1 is free in {0, 1}; L_{-1,2} = 2, L_{0,2} = 0.
    let pr = params("-1:0:1,0", 0, 0, "2");
    let hw = highest_weight_pattern(pr.signature());
    let up = pat(&pr, vec![vec![1]]);
    // [2 - 0 - 1][0 - 0 + 1] = 1
    let (t, c) = one_term(&apply_generator(GeneratorLabel::F(-1), &hw, &pr).unwrap());
    assert_eq!((t, c), (up.clone(), RadicalSum::one()));
    // [2 - 1][1 - 0] = 1
    let (t, c) = one_term(&apply_generator(GeneratorLabel::E(-1), &up, &pr).unwrap());
    assert_eq!((t, c), (hw.clone(), RadicalSum::one()));
    assert!(apply_generator(GeneratorLabel::F(-1), &up, &pr).unwrap().is_zero());
}

#[test]
fn f0_on_highest_weight_by_hand() {
    // (2,1,0) on [-1,1]. Only l = 0 survives; the radicand is
    // [2] * [3][1][-1] / ([2][3]) = -1, so the coefficient is -|-1|^(1/2) = -1.
    let pr = params("-1:1:2,1,0", 2, 0, "3/2");
    let hw = highest_weight_pattern(pr.signature());
    let (t, c) = one_term(&apply_generator(GeneratorLabel::F(0), &hw, &pr).unwrap());
    assert_eq!(t, pat(&pr, vec![vec![0], vec![2, 0]]));
    assert_eq!(c, RadicalSum::one().neg());
}

#[test]
fn vector_linearity() {
    let pr = params("-1:1:2,1,0", 2, 0, "3/2");
    let eng = Engine::new(pr.clone());
    let g = GeneratorLabel::F(1);
    assert!(eng.apply_to_vector(g, &PatternVector::zero()).unwrap().is_zero());
    let basis = enumerate_basis(pr.signature(), 3).unwrap();
    let p = basis[1].clone();
    let direct = apply_generator(g, &p, &pr).unwrap();
    assert_eq!(eng.apply_to_vector(g, &PatternVector::unit(p.clone())).unwrap(), direct);
    let mut v = PatternVector::zero();
    for (k, b) in basis.iter().enumerate() {
        v.add_term(b.clone(), RadicalSum::term(Rational::from(k as i64 + 1), 3u32.into()));
    }
    assert!(eng.apply_to_vector(g, &v.add(&v.neg())).unwrap().is_zero());
}

#[test]
fn words() {
    let pr = params("0:1:1,0", 1, 0, "3/2");
    let hw = highest_weight_pattern(pr.signature());
    assert_eq!(apply_word(&[], &hw, &pr).unwrap(), PatternVector::unit(hw.clone()));
    for i in -3..=3 {
        let v = apply_word(&[GeneratorLabel::H(i)], &hw, &pr).unwrap();
        let e = h_eigenvalue(&hw, i, &pr);
        assert_eq!(v, PatternVector::unit(hw.clone()).scale_rational(&e));
    }
    use GeneratorLabel::*;
    for i in [0i64, 1] {
        let lhs = apply_word(&[E(i), F(i)], &hw, &pr).unwrap().sub(&apply_word(&[F(i), E(i)], &hw, &pr).unwrap());
        // lambda = eigenvalue of h_i - h_{i+1} + (theta(-i) - theta(-i-1)) c: M_0 - M_1 = 1 at i = 0, M_1 - M_2 = 0 at i = 1.
        let lam = h_eigenvalue(&hw, i, &pr) - h_eigenvalue(&hw, i + 1, &pr)
            + Rational::from(theta(-i) - theta(-i - 1)) * (pr.xi0() - pr.xi1());
        assert_eq!(lam, Rational::from(if i == 0 { 1 } else { 0 }));
        let b = qbracket(lam.to_i64().unwrap(), pr.qv()).unwrap();
        assert_eq!(lhs, PatternVector::unit(hw.clone()).scale_rational(&b), "i={i}");
    }
}

fn test_basis() -> (ModuleParams, Vec<CPattern>) {
    let pr = params("-1:1:2,1,0", 2, 0, "3/2");
    let b = enumerate_basis(pr.signature(), 4).unwrap();
    (pr, b)
}

#[test]
fn weight_covariance() {
    let (pr, basis) = test_basis();
    let eng = Engine::new(pr.clone());
    for p in &basis {
        for j in -4..=4 {
            for (g, sgn) in [(GeneratorLabel::E(j), 1), (GeneratorLabel::F(j), -1)] {
                for (t, _) in eng.apply(g, p).unwrap().iter() {
                    for i in -5..=5 {
                        let shift = i64::from(i == j) - i64::from(i == j + 1);
                        let expect = h_eigenvalue(p, i, &pr) + Rational::from(sgn * shift);
                        assert_eq!(h_eigenvalue(t, i, &pr), expect, "{g} on {p}, h{i}");
                    }
                }
            }
        }
    }
}

#[test]
fn diagonal_generators() {
    let (pr, basis) = test_basis();
    for p in &basis {
        for g in [GeneratorLabel::H(-2), GeneratorLabel::H(0), GeneratorLabel::H(3), GeneratorLabel::C] {
            let v = apply_generator(g, p, &pr).unwrap();
            assert!(v.len() <= 1);
            assert!(v.iter().all(|(t, _)| t == p));
        }
    }
}

/// Positions where two patterns differ, over rows up to `top`.
fn changed(a: &CPattern, b: &CPattern, top: usize) -> Vec<(i64, usize, i64)> {
    let mut out = Vec::new();
    for p in 1..=top {
        for i in crate::patterns::row_range(p) {
            let d = b.entry(i, p).unwrap() - a.entry(i, p).unwrap();
            if d != 0 {
                out.push((i, p, d));
            }
        }
    }
    out
}

#[test]
fn locality() {
    let (pr, basis) = test_basis();
    for p in &basis {
        for k in -5..=5 {
            for g in [GeneratorLabel::E(k), GeneratorLabel::F(k)] {
                for (t, _) in apply_generator(g, p, &pr).unwrap().iter() {
                    let ch = changed(p, t, 2 * 5 + 4);
                    if k == -1 {
                        assert_eq!(ch.len(), 1);
                        assert_eq!((ch[0].0, ch[0].1), (0, 1));
                    } else {
                        assert_eq!(ch.len(), 2, "{g} on {p}");
                        assert_eq!(ch[1].1, ch[0].1 + 1);
                        assert_eq!(ch[0].2, ch[1].2);
                        assert_eq!(ch[0].2.abs(), 1);
                    }
                    let top = ch.iter().map(|c| c.1).max().unwrap();
                    match g {
                        GeneratorLabel::E(_) => assert!(t.level() <= p.level()),
                        _ => assert!(t.level() <= p.level().max(top + 1)),
                    }
                }
            }
        }
    }
}

/// Squares each coefficient and compares with the bracket product evaluated
/// directly from `qbracket`, independent of the factoring path.
fn check_squares(pr: &ModuleParams, basis: &[CPattern]) {
    for p in basis {
        for k in -5..=5 {
            for g in [GeneratorLabel::E(k), GeneratorLabel::F(k)] {
                let image = apply_generator(g, p, pr).unwrap();
                for cand in candidates(g, p).unwrap().into_iter().filter(|c| c.valid) {
                    let mut r = Rational::one();
                    for &x in &cand.numerator_args {
                        r *= &qbracket(x, pr.qv()).unwrap();
                    }
                    for &x in &cand.denominator_args {
                        r = r.checked_div(&qbracket(x, pr.qv()).unwrap()).unwrap();
                    }
                    let t = cand.target.clone().into_pattern().unwrap();
                    let c = image.get(&t).cloned().unwrap_or_default();
                    assert_eq!(c.mul(&c).as_rational().unwrap(), r.abs(), "{g} on {p}");
                    if !c.is_zero() {
                        let sign = c.terms().next().unwrap().1.signum() as i64;
                        assert_eq!(sign, cand.sign);
                    }
                }
            }
        }
    }
}

#[test]
fn coefficients_square_to_bracket_products() {
    let (pr, basis) = test_basis();
    check_squares(&pr, &basis);
}

#[test]
fn classical_coefficients_square_to_integer_products() {
    let (pr, basis) = test_basis();
    let pr = pr.with_qv(QValue::Classical).unwrap();
    check_squares(&pr, &basis);
}

#[test]
fn deletion_convention_soundness() {
    for (sig, level) in [("-1:1:2,1,0", 4), ("0:1:1,0", 4), ("-2:1:3,2,2,0", 3)] {
        let pr = params(sig, 0, 0, "5/3");
        for p in enumerate_basis(pr.signature(), level).unwrap() {
            for k in -5..=5 {
                for g in [GeneratorLabel::E(k), GeneratorLabel::F(k)] {
                    for c in candidates(g, &p).unwrap() {
                        if c.valid {
                            assert!(!c.denominator_vanishes(), "{g} on {p}: valid target with a pole");
                        } else {
                            assert!(
                                c.numerator_vanishes() || c.denominator_vanishes(),
                                "{g} on {p}: invalid target j={} l={:?} with a finite nonzero coefficient",
                                c.j,
                                c.l
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn boundary_closed_form() {
    let pr = params("-1:1:2,1,0", 2, 0, "3/2");
    for level in 2..=4usize {
        for p in enumerate_basis(pr.signature(), level).unwrap() {
            for k in (level as i64 + 1) / 2..=4 {
                let v = apply_generator(GeneratorLabel::F(k), &p, &pr).unwrap();
                let s = pr.signature();
                let diff = s.value(k + 1) - s.value(k);
                if diff == 0 {
                    assert!(v.is_zero());
                    continue;
                }
                let t = shift(&p, &[(k, 2 * k as usize + 1, -1), (k, 2 * k as usize + 2, -1)])
                    .unwrap()
                    .into_pattern()
                    .unwrap();
                let coeff = crate::qnum::radical_of(&qbracket(diff, pr.qv()).unwrap().abs()).unwrap().neg();
                let mut expect = PatternVector::zero();
                expect.add_term(t, coeff);
                assert_eq!(v, expect, "F{k} on {p}");
            }
        }
    }
}

#[test]
fn engine_cache_agrees_with_one_shot() {
    let (pr, basis) = test_basis();
    let eng = Engine::new(pr.clone());
    for p in basis.iter().take(6) {
        for g in [GeneratorLabel::E(0), GeneratorLabel::F(-2), GeneratorLabel::F(2)] {
            let a = eng.apply(g, p).unwrap();
            let b = eng.apply(g, p).unwrap();
            assert!(Arc::ptr_eq(&a, &b));
            assert_eq!(*a, apply_generator(g, p, &pr).unwrap());
        }
    }
    assert!(eng.cached_images() > 0);
}

#[test]
fn signature_mismatch_is_an_error() {
    let pr = params("-1:1:2,1,0", 2, 0, "3/2");
    let other: Arc<Signature> = Arc::new("0:0:0".parse().unwrap());
    let p = highest_weight_pattern(&other);
    assert!(matches!(apply_generator(GeneratorLabel::E(0), &p, &pr), Err(ActionError::SignatureMismatch)));
}
