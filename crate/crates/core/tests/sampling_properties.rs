mod common;

use common::close;
use proptest::prelude::*;
use wyd_core::linalg::{validate_hermitian, Alpha, CMatrix, DensityMatrix};
use wyd_core::relations::RelationId;
use wyd_core::sampling::{
    random_density, random_hermitian, random_unitary, search_violations, sweep_alpha, trial_rng,
    SampleMethod, SearchSpec,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sampled_objects_validate(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = trial_rng(seed, 0);
        for m in [SampleMethod::GinibreNormalized, SampleMethod::EigenDirichletHaar, SampleMethod::Pure] {
            let rho = random_density(n, m, &mut rng).unwrap();
            prop_assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        }
        let h = random_hermitian(n, 3.0, &mut rng);
        prop_assert!(validate_hermitian(h.matrix().clone(), 1e-9).is_ok());
        let u = random_unitary(n, &mut rng);
        prop_assert!((&u.adjoint() * &u).max_abs_diff(&CMatrix::identity(n)) <= 1e-10);
    }

    #[test]
    fn sweep_symmetric_about_half(seed in any::<u64>(), n in 2usize..=5) {
        let spec = SearchSpec::new(RelationId::WydIj, 1, vec![n], vec![0.5], seed);
        let inst = spec.draw(0).unwrap();
        let grid: Vec<Alpha> = [0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95]
            .iter()
            .map(|&a| Alpha::new(a).unwrap())
            .collect();
        let rows = sweep_alpha(&inst.rho, &inst.a, &inst.b, &grid).unwrap();
        for k in 0..3 {
            prop_assert!(close(rows[k].i_j_product, rows[6 - k].i_j_product, 1e-9));
            prop_assert!(close(rows[k].l_bound, rows[6 - k].l_bound, 1e-9));
        }
        prop_assert!((rows[3].l_bound - rows[3].commutator_bound).abs() <= 1e-10 * 1f64.max(rows[3].commutator_bound));
    }
}

#[test]
fn search_output_is_byte_identical() {
    let spec = SearchSpec::new(RelationId::LuoIj, 200, vec![2, 3, 4], vec![0.1, 0.25], 7);
    let render = || {
        let out = search_violations(&spec).unwrap();
        let summary = serde_json::to_string(&out.summary).unwrap();
        let records: Vec<String> = out.records.iter().map(|r| serde_json::to_string(r).unwrap()).collect();
        (summary, records)
    };
    let (s1, r1) = render();
    let (s2, r2) = render();
    assert_eq!(s1, s2);
    assert_eq!(r1, r2);
    assert!(!r1.is_empty());
}

#[test]
fn records_replay_exactly() {
    let spec = SearchSpec::new(RelationId::LuoIj, 300, vec![2, 3], vec![0.1], 7);
    let out = search_violations(&spec).unwrap();
    assert!(!out.records.is_empty());
    for rec in &out.records {
        let replay = spec.replay(rec.trial_index, rec.alpha).unwrap();
        assert!((replay.margin - rec.report.margin).abs() <= 1e-12);
        assert!(!replay.holds);
    }
}

#[test]
fn record_matrices_round_trip() {
    let spec = SearchSpec::new(RelationId::LuoIj, 100, vec![2], vec![0.1], 3);
    let out = search_violations(&spec).unwrap();
    let rec = out.records.first().expect("luo violations at alpha 0.1");
    let rho = rec.matrices.rho.to_matrix().unwrap();
    let original = spec.draw(rec.trial_index).unwrap();
    // 12 significant digits survive the text round trip
    assert!(rho.max_abs_diff(original.rho.matrix()) <= 1e-11);
}

#[test]
fn haar_unitary_first_column_is_uniform() {
    // for Haar U, |U_00|^2 is Beta(1, n - 1) with mean 1/n
    let n = 3;
    let samples = 20_000;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for i in 0..samples {
        let u = random_unitary(n, &mut trial_rng(31, i));
        let w = u[(0, 0)].norm_sqr();
        sum += w;
        sum_sq += w * w;
    }
    let mean = sum / samples as f64;
    let second = sum_sq / samples as f64;
    assert!((mean - 1.0 / 3.0).abs() < 0.01, "mean {mean}");
    // E[w^2] = 2 / (n (n + 1)) = 1/6
    assert!((second - 1.0 / 6.0).abs() < 0.01, "second moment {second}");
}

#[test]
fn haar_is_left_invariant_in_distribution() {
    // left-multiplying by a fixed unitary leaves the |U_00|^2 moments unchanged
    let fixed = random_unitary(3, &mut trial_rng(1, 1));
    let samples = 20_000;
    let mut mean = 0.0;
    for i in 0..samples {
        let u = &fixed * &random_unitary(3, &mut trial_rng(41, i));
        mean += u[(0, 0)].norm_sqr();
    }
    mean /= samples as f64;
    assert!((mean - 1.0 / 3.0).abs() < 0.01, "mean {mean}");
}

#[test]
fn dirichlet_spectrum_is_flat() {
    let n = 4;
    let samples = 20_000;
    let mut top = 0.0;
    let mut purity = 0.0;
    for i in 0..samples {
        let rho = random_density(n, SampleMethod::EigenDirichletHaar, &mut trial_rng(51, i)).unwrap();
        top += rho.eigenvalues()[0];
        purity += rho.eigenvalues().iter().map(|l| l * l).sum::<f64>();
    }
    // flat Dirichlet(1,1,1,1): E[sum p_i^2] = n * 2 / (n (n + 1)) = 2/5
    let purity = purity / samples as f64;
    assert!((purity - 0.4).abs() < 0.01, "purity {purity}");
    // expected largest spacing of 4 uniform pieces: (1 + 1/2 + 1/3 + 1/4) / 4
    let top = top / samples as f64;
    assert!((top - 25.0 / 48.0).abs() < 0.01, "top {top}");
}

#[test]
fn ginibre_purity_matches_hilbert_schmidt() {
    // Hilbert-Schmidt measure: E[Tr rho^2] = 2n / (n^2 + 1)
    let n = 3;
    let samples = 20_000;
    let mut purity = 0.0;
    for i in 0..samples {
        let rho = random_density(n, SampleMethod::GinibreNormalized, &mut trial_rng(61, i)).unwrap();
        purity += rho.eigenvalues().iter().map(|l| l * l).sum::<f64>();
    }
    let purity = purity / samples as f64;
    assert!((purity - 0.6).abs() < 0.01, "purity {purity}");
}
