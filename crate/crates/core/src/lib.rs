//! Wigner–Yanase–Dyson information for mixed quantum states.
//!
//! - [`linalg`]: dense complex matrices, Hermitian validation, a Jacobi
//!   eigensolver, density matrices and their fractional powers.
//! - [`measures`]: variance, `I_alpha`, `J_alpha`, `U_alpha`, skew
//!   information and the commutator terms, each with trace and spectral forms.
//! - [`relations`]: inequality checkers, the scalar eigenvalue lemma,
//!   additivity on tensor products and the golden two-level counterexample.
//! - [`sampling`]: seeded random states and observables, parallel violation
//!   search and alpha sweeps.
//! - [`io`]: matrix JSON and the report number format.

pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod relations;
pub mod sampling;

pub use error::{Error, Result};
pub use linalg::{Alpha, CMatrix, DensityMatrix, HermitianOperator, SpectralDecomposition, Tolerances};
pub use measures::UncertaintyComponents;
pub use relations::{RelationId, RelationReport};
