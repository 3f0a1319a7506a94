use super::*;
use crate::families::{generate, FamilyKind, FamilySpec};

fn set(v: &[i64]) -> FiniteRealSet {
    FiniteRealSet::from_integers(v.iter().copied()).unwrap()
}

fn fam(kind: FamilyKind, n: usize) -> FiniteRealSet {
    generate(&FamilySpec::new(kind, n)).unwrap()
}

#[test]
fn lemma_szt_worked_example() {
    let a = set(&[1, 4, 9, 16]);
    let rs = check_lemma_szt(&a, &a, 4.0, 2.0).unwrap();
    assert_eq!(rs.len(), 3);
    let mixed = &rs[2];
    assert_eq!(mixed.statement_id, "lemma-szt-mixed");
    assert_eq!(mixed.lhs, Some(28.0));
    assert!((mixed.rhs_without_constant.unwrap() - 32.0).abs() < 1e-9);
    assert!((mixed.effective_constant - 28.0 / 32.0).abs() < 1e-12);
    assert!(rs.iter().all(|r| r.passed));
    assert!(matches!(check_lemma_szt(&set(&[1, 2]), &a, 4.0, 2.0), Err(Error::Precondition(_))));
}

#[test]
fn lemma_szt_energies_match_direct_sums() {
    // E_3 and E for squares n=4: differences are all distinct except 0.
    let a = set(&[1, 4, 9, 16]);
    let rs = check_lemma_szt(&a, &a, 4.0, 2.0).unwrap();
    assert_eq!(rs[0].lhs, Some(64.0 + 12.0));
    assert_eq!(rs[1].lhs, Some(28.0f64.powi(3)));
}

#[test]
fn lemma_szt1_cases() {
    let a = fam(FamilyKind::ConvexSquares, 32);
    let r = check_lemma_szt1(&a, &a, 32.0, 32.0, 2.0).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(check_lemma_szt1(&a, &a, 32.0, 32.0, 1.0).is_err());
    assert!(check_lemma_szt1(&set(&[5]), &a, 32.0, 32.0, 2.0).is_err());
}

#[test]
fn lemma_e3_containment() {
    let a = fam(FamilyKind::ConvexSquares, 64);
    let two = Rational::from(2);
    let b = level_set(&convolve_minus(&a, &a), &two).unwrap();
    let r = check_lemma_e3(&a, &b, &two, 64.0, 2.0).unwrap();
    assert!(r.passed, "{r:?}");
    let full = convolve_minus(&a, &a).support();
    assert!(check_lemma_e3(&a, &full, &Rational::one(), 64.0, 2.0).is_ok());
    let outside = set(&[1]);
    assert!(matches!(
        check_lemma_e3(&a, &outside, &two, 64.0, 2.0),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn dyadic_examples() {
    let r = check_dyadic_decomposition(&set(&[0, 1, 2]), &set(&[0])).unwrap();
    assert_eq!(r.identity_holds, Some(true));
    assert!(r.passed);
    // only the class of (A∘A)(0) = 3 contributes: share 1
    assert_eq!(r.log2_lhs, 0.0);
    let classes = dyadic_classes(&set(&[0, 1, 2]), &set(&[0]));
    // classes partition the support of A∘A: values 3, 2, 2 in Q_1 and 1, 1 in Q_0
    assert_eq!(classes.len(), 2);
    assert_eq!(classes[&1], BigUint::from(9u32));
    assert!(classes[&0].is_zero());

    let a = fam(FamilyKind::ConvexSquares, 128);
    let b = level_set(&convolve_minus(&a, &a), &Rational::from(2)).unwrap();
    let r = check_dyadic_decomposition(&a, &b).unwrap();
    assert_eq!(r.identity_holds, Some(true));
    assert!((r.rhs_without_constant.unwrap() - 1.0 / 8.0).abs() < 1e-15);
    assert!(r.passed);
}

#[test]
fn thm_main_exponents_at_two() {
    let a = fam(FamilyKind::ConvexSquares, 256);
    let r = check_thm_main(&a, 256.0, 2.0).unwrap();
    let expected = 8.0 * 58.0 / 37.0 - 3.0 * 20.0 / 37.0;
    assert!((r.log2_rhs - expected).abs() < 1e-12);
    assert!(r.passed);
    assert!(check_thm_main(&set(&[1]), 1.0, 2.0).is_err());
}

#[test]
fn chain_on_squares() {
    let a = fam(FamilyKind::ConvexSquares, 24);
    let rs = check_thm_main_chain(&a, &Budget::default()).unwrap();
    assert_eq!(rs.len(), 4);
    for r in &rs {
        assert!(r.passed, "{r:?}");
    }
    assert_eq!(rs[1].identity_holds, Some(true));
}

#[test]
fn main_diff_symmetric_case() {
    let a = fam(FamilyKind::ConvexSquares, 64);
    let rs = check_thm_main_diff(&a, &a, 64.0, 64.0, 2.0, Sign::Plus).unwrap();
    assert_eq!(rs.len(), 4);
    // with A = A_* both branches of each max/min coincide
    let la: f64 = 6.0;
    let ll = libm::log2(12.0);
    let x = -64f64.log2() / 3.0 - 2.0 * 6.0 / 9.0 + 11.0 * la / 9.0 + 8.0 * la / 9.0;
    let y = -2.0 * 6.0 / 27.0 - 13.0 * 6.0 / 27.0 + 44.0 * la / 27.0 + 13.0 * la / 27.0;
    assert!((rs[2].log2_rhs - (x.max(y) - 2.0 * ll / 9.0)).abs() < 1e-12);
    let rs = check_thm_main_diff(&a, &a, 64.0, 64.0, 1.0, Sign::Minus).unwrap();
    assert_eq!(rs.len(), 2);
}

#[test]
fn main_diff_squares_cubes() {
    let a = fam(FamilyKind::ConvexSquares, 64);
    let b = fam(FamilyKind::ConvexCubes, 64);
    for sign in [Sign::Plus, Sign::Minus] {
        for r in check_thm_main_diff(&a, &b, 64.0, 64.0, 2.0, sign).unwrap() {
            assert!(r.passed, "{r:?}");
        }
        assert!(check_corollary_convex_diff(&a, &b, sign).unwrap().passed);
    }
    let ap = fam(FamilyKind::ArithmeticProgression, 64);
    assert!(check_corollary_convex_diff(&ap, &b, Sign::Plus).is_err());
}

#[test]
fn convex_map_gp() {
    let a = fam(FamilyKind::GeometricProgression, 64);
    let c = apply_convex_map(&a, ConvexMap::Square).unwrap();
    let rs = check_convex_map_theorems(&a, &c, ConvexMap::Square, (0.5, 2.0)).unwrap();
    assert_eq!(rs.len(), 6);
    let prod = rs.iter().find(|r| r.statement_id == "convex-map-product-lrn").unwrap();
    let expected = 42.0 * libm::log2(127.0) + 37.0 * libm::log2(2080.0);
    assert!((prod.log2_lhs - expected).abs() < 1e-9);
    assert!((prod.log2_rhs - (600.0 - 20.0 * libm::log2(6.0))).abs() < 1e-9);
    assert!(rs.iter().all(|r| r.passed));

    let small = fam(FamilyKind::ConvexSquares, 10);
    assert!(check_convex_map_theorems(&a, &small, ConvexMap::Square, (0.5, 2.0)).is_err());
    let with_zero = set(&[0, 1, 3, 6, 10]);
    let rs = check_convex_map_theorems(&with_zero, &with_zero, ConvexMap::Square, (0.5, 2.0)).unwrap();
    assert_eq!(rs.len(), 3);
}

#[test]
fn convex_map_on_interval() {
    let a = FiniteRealSet::from_integers(1..=128).unwrap();
    let c = apply_convex_map(&a, ConvexMap::Square).unwrap();
    for r in check_convex_map_theorems(&a, &c, ConvexMap::Square, (0.5, 2.0)).unwrap() {
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn action_g_on_small_sets() {
    let rs = check_action_g(&set(&[0, 1, 2]), &Budget::default()).unwrap();
    assert_eq!(rs.len(), 3);
    assert!(rs.iter().all(|r| r.passed));
}

#[test]
fn statement_names_round_trip() {
    for s in Statement::ALL {
        assert_eq!(s.name().parse::<Statement>().unwrap(), s);
    }
    assert!("lemma-nope".parse::<Statement>().is_err());
}

#[test]
fn multiplier_only_below_two() {
    assert_eq!(assert_multiplier("lemma-szt1", 2.0), 1.0);
    assert_eq!(assert_multiplier("lemma-szt1", 1.25), 4.0);
    assert_eq!(assert_multiplier("thm-main", 1.25), 1.0);
}

#[test]
fn evaluate_marks_estimated_constants_diagnostic() {
    let opts = CheckOptions::default();
    let b = Budget::default();
    let ap = FamilySpec::new(FamilyKind::ArithmeticProgression, 16);
    let rs = evaluate(Statement::ThmMain, &ap, None, &opts, &b).unwrap();
    assert!(rs.iter().all(|r| !r.asserted));
    let sq = FamilySpec::new(FamilyKind::ConvexSquares, 16);
    let rs = evaluate(Statement::ThmMain, &sq, None, &opts, &b).unwrap();
    assert!(rs[0].asserted && rs[0].passed);
    assert!(!rs[1].asserted);
    assert!(rs[0].instance.starts_with("convex-squares(n=16)"));
}

#[test]
fn evaluate_every_statement_small() {
    let opts = CheckOptions::default();
    let b = Budget::default();
    for kind in [FamilyKind::ConvexSquares, FamilyKind::GeometricProgression] {
        let spec = FamilySpec::new(kind, 16);
        for st in Statement::ALL {
            let rs = evaluate(st, &spec, None, &opts, &b).unwrap();
            assert!(!rs.is_empty(), "{st}");
            for r in rs {
                assert!(!r.is_failure(), "{r:?}");
            }
        }
    }
}
