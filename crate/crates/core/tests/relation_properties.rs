mod common;

use common::{alpha, close, dim, draw, method, mixed_method};
use proptest::prelude::*;
use wyd_core::linalg::{Alpha, DensityMatrix, HermitianOperator};
use wyd_core::relations::{
    check_additivity, check_heisenberg, check_luo_ij, check_luo_u, check_relation, check_wyd_ij,
    check_wyd_u, scalar_lemma_gap, Measure, RelationId, DEFAULT_TOL_REL,
};
use wyd_core::sampling::{random_hermitian, random_unitary, trial_rng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn wyd_relations_hold(seed in any::<u64>(), n in dim(), m in method(), a in alpha()) {
        let d = draw(seed, n, m);
        for r in [
            check_wyd_ij(&d.rho, &d.a, &d.b, a, false).unwrap(),
            check_wyd_ij(&d.rho, &d.a, &d.b, a, true).unwrap(),
            check_wyd_u(&d.rho, &d.a, &d.b, a).unwrap(),
        ] {
            prop_assert!(r.holds, "{:?} lhs {} rhs {}", r.relation, r.lhs, r.rhs);
            prop_assert!(r.relative_margin() >= -1e-9);
        }
    }

    #[test]
    fn half_relations_hold(seed in any::<u64>(), n in dim(), m in method()) {
        let d = draw(seed, n, m);
        prop_assert!(check_heisenberg(&d.rho, &d.a, &d.b).unwrap().holds);
        prop_assert!(check_luo_ij(&d.rho, &d.a, &d.b).unwrap().holds);
        prop_assert!(check_luo_u(&d.rho, &d.a, &d.b).unwrap().holds);
    }

    #[test]
    fn u_relation_is_between_the_orderings(seed in any::<u64>(), n in dim(), m in method(), a in alpha()) {
        // U_A U_B = sqrt(I_A J_B * I_B J_A) is the geometric mean of the two orderings
        let d = draw(seed, n, m);
        let ij = check_wyd_ij(&d.rho, &d.a, &d.b, a, false).unwrap().lhs;
        let ji = check_wyd_ij(&d.rho, &d.a, &d.b, a, true).unwrap().lhs;
        let u = check_wyd_u(&d.rho, &d.a, &d.b, a).unwrap().lhs;
        prop_assert!(close(u * u, ij * ji, 1e-9 * 1f64.max(ij * ji)));
    }

    #[test]
    fn scale_covariance(seed in any::<u64>(), n in dim(), m in method(), a in alpha(), c in 0.01f64..100.0) {
        let d = draw(seed, n, m);
        let scaled = d.a.scale(c);
        let base = check_wyd_ij(&d.rho, &d.a, &d.b, a, false).unwrap();
        let r = check_wyd_ij(&d.rho, &scaled, &d.b, a, false).unwrap();
        let c2 = c * c;
        prop_assert!((r.lhs - c2 * base.lhs).abs() <= 1e-9 * (c2 * base.lhs).abs().max(1e-300));
        prop_assert!((r.rhs - c2 * base.rhs).abs() <= 1e-9 * (c2 * base.rhs).abs().max(1e-300));
        prop_assert_eq!(r.holds, base.holds);
    }

    #[test]
    fn additivity(seed in any::<u64>(), n1 in 2usize..=3, n2 in 2usize..=3, m1 in method(), m2 in mixed_method(), a in alpha()) {
        let d1 = draw(seed, n1, m1);
        let d2 = draw(seed ^ 0x5555, n2, m2);
        for which in [Measure::I, Measure::J] {
            let rep = check_additivity(&d1.rho, &d2.rho, &d1.a, &d2.a, a, which).unwrap();
            prop_assert!(rep.max_deviation() <= 1e-9, "{rep:?}");
        }
    }

    #[test]
    fn lemma_is_symmetric_in_alpha_and_lhs_nonnegative(li in 0.0f64..=1.0, lj in 0.0f64..=1.0, a in alpha()) {
        let r = scalar_lemma_gap(li, lj, a).unwrap();
        let s = scalar_lemma_gap(li, lj, Alpha::new(a.complement()).unwrap()).unwrap();
        prop_assert_eq!(r.lhs, s.lhs);
        prop_assert_eq!(r.rhs, s.rhs);
        prop_assert!(r.lhs >= -1e-15);
        prop_assert_eq!(r.gap, r.lhs - r.rhs);
    }
}

#[test]
fn lemma_is_exact_at_half() {
    for (li, lj) in [(0.1, 0.7), (0.0, 1.0), (0.5, 0.5), (0.03, 0.08)] {
        let r = scalar_lemma_gap(li, lj, Alpha::HALF).unwrap();
        assert!(r.gap.abs() <= 1e-15, "{r:?}");
    }
}

#[test]
fn lemma_rejects_out_of_range_eigenvalues() {
    let a = Alpha::new(0.3).unwrap();
    assert!(scalar_lemma_gap(-0.1, 0.5, a).is_err());
    assert!(scalar_lemma_gap(0.5, 1.5, a).is_err());
}

#[test]
fn theorem_holds_where_the_lemma_fails() {
    // this eigenvalue pair has a negative lemma gap at alpha = 0.385
    let a = Alpha::new(0.385).unwrap();
    let gap = scalar_lemma_gap(0.0297, 0.0797, a).unwrap();
    assert!(gap.gap < -1e-3, "{gap:?}");

    let mut rng = trial_rng(2024, 0);
    let basis = random_unitary(3, &mut rng);
    let rho = DensityMatrix::from_spectrum(&[0.0297, 0.0797, 0.8906], &basis, Default::default()).unwrap();
    for _ in 0..200 {
        let x = random_hermitian(3, 1.0, &mut rng);
        let y = random_hermitian(3, 1.0, &mut rng);
        for id in [RelationId::WydIj, RelationId::WydJi, RelationId::WydU] {
            assert!(check_relation(id, &rho, &x, &y, a, DEFAULT_TOL_REL).unwrap().holds);
        }
    }
}

#[test]
fn luo_relation_fails_away_from_half_on_the_golden_spectrum() {
    let inst = wyd_core::relations::golden_instance();
    let report = wyd_core::relations::verify_luo_violation(&inst.rho, &inst.a, &inst.b, Alpha::new(0.25).unwrap()).unwrap();
    assert!(!report.holds);
    assert!(report.lhs < report.rhs);
}

#[test]
fn additivity_on_2x3_pauli_products() {
    let rho1 = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
    let rho2 = DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
    let a1 = wyd_core::linalg::pauli::sx();
    let a2 = random_hermitian(3, 2.0, &mut trial_rng(8, 8));
    let a = Alpha::new(0.2).unwrap();
    for which in [Measure::I, Measure::J] {
        let rep = check_additivity(&rho1, &rho2, &a1, &a2, a, which).unwrap();
        assert!(rep.max_deviation() <= 1e-9);
    }
    let wrong = HermitianOperator::identity(3);
    assert!(check_additivity(&rho1, &rho2, &wrong, &a2, a, Measure::I).is_err());
}
