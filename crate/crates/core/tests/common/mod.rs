#![allow(dead_code)]

use proptest::prelude::*;
use wyd_core::linalg::{Alpha, CMatrix, DensityMatrix, HermitianOperator};
use wyd_core::sampling::{random_density, random_hermitian, random_unitary, trial_rng, SampleMethod};

pub const MIXED: [SampleMethod; 2] = [SampleMethod::GinibreNormalized, SampleMethod::EigenDirichletHaar];

pub struct Draw {
    pub rho: DensityMatrix,
    pub a: HermitianOperator,
    pub b: HermitianOperator,
    pub u: CMatrix,
}

pub fn draw(seed: u64, dim: usize, method: SampleMethod) -> Draw {
    let mut rng = trial_rng(seed, dim as u64);
    Draw {
        rho: random_density(dim, method, &mut rng).unwrap(),
        a: random_hermitian(dim, 1.0, &mut rng),
        b: random_hermitian(dim, 1.0, &mut rng),
        u: random_unitary(dim, &mut rng),
    }
}

/// `|x - y| <= rel * max(1, |x|, |y|)`.
pub fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * 1f64.max(x.abs()).max(y.abs())
}

pub fn method() -> impl Strategy<Value = SampleMethod> {
    prop::sample::select(vec![
        SampleMethod::GinibreNormalized,
        SampleMethod::EigenDirichletHaar,
        SampleMethod::Pure,
    ])
}

pub fn mixed_method() -> impl Strategy<Value = SampleMethod> {
    prop::sample::select(MIXED.to_vec())
}

pub fn alpha() -> impl Strategy<Value = Alpha> {
    (0.001f64..0.999).prop_map(|a| Alpha::new(a).unwrap())
}

pub fn dim() -> impl Strategy<Value = usize> {
    2usize..=5
}
