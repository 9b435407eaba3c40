//! Dense complex-matrix substrate: Hermitian validation, the Jacobi
//! eigensolver, fractional powers of states, commutators and tensor products.

mod eigen;
mod matrix;
mod operator;
mod state;

pub use eigen::{hermitian_eigen, SpectralDecomposition};
pub use matrix::{trace_product, CMatrix};
pub use operator::{
    anticommutator, commutator, kron, pauli, spectral_decompose, validate_hermitian, Alpha,
    HermitianOperator, DEFAULT_TOL_HERM,
};
pub use state::{
    center_observable, density_from, eigenvalue_power, matrix_power, DensityMatrix, Tolerances,
};
