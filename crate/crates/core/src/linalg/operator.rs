use num_complex::Complex64;

use super::eigen::{hermitian_eigen, SpectralDecomposition};
use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// Default Hermiticity tolerance for [`validate_hermitian`].
pub const DEFAULT_TOL_HERM: f64 = 1e-9;

/// A square complex matrix that equals its own adjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(CMatrix);

/// Accepts `raw` if `max |raw - raw^dagger|` is at most `tol_herm` and
/// returns the symmetrized `(raw + raw^dagger) / 2`.
pub fn validate_hermitian(raw: CMatrix, tol_herm: f64) -> Result<HermitianOperator> {
    let adj = raw.adjoint();
    let dev = raw.max_abs_diff(&adj);
    if dev > tol_herm || dev.is_nan() {
        return Err(Error::NotHermitian(dev));
    }
    Ok(HermitianOperator((&raw + &adj).scale_real(0.5)))
}

impl HermitianOperator {
    pub fn new(raw: CMatrix) -> Result<Self> {
        validate_hermitian(raw, DEFAULT_TOL_HERM)
    }

    /// Wraps a matrix that is Hermitian by construction; only symmetrizes.
    pub(crate) fn from_hermitian_unchecked(m: CMatrix) -> Self {
        let adj = m.adjoint();
        Self((&m + &adj).scale_real(0.5))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(CMatrix::from_real_diagonal(diag))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        self.0.check_same_dim(&other.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale_real(s))
    }

    /// Unitary conjugation `U H U^dagger`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        self.0.check_same_dim(u)?;
        Ok(Self::from_hermitian_unchecked(&(u * &self.0) * &u.adjoint()))
    }

    /// `H^2`, Hermitian again.
    pub fn square(&self) -> Self {
        Self::from_hermitian_unchecked(&self.0 * &self.0)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(kron(&self.0, &other.0))
    }

    /// `self (x) I + I (x) other`.
    pub fn local_sum(&self, other: &Self) -> Self {
        let left = kron(&self.0, &CMatrix::identity(other.dim()));
        let right = kron(&CMatrix::identity(self.dim()), &other.0);
        Self(&left + &right)
    }
}

impl std::ops::Add for &HermitianOperator {
    type Output = HermitianOperator;

    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator(&self.0 + &rhs.0)
    }
}

/// Diagonalizes a Hermitian operator.
pub fn spectral_decompose(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    hermitian_eigen(h.matrix())
}

/// `AB - BA`; anti-Hermitian for Hermitian inputs.
pub fn commutator(a: &HermitianOperator, b: &HermitianOperator) -> Result<CMatrix> {
    a.check_same_dim(b)?;
    Ok(&(a.matrix() * b.matrix()) - &(b.matrix() * a.matrix()))
}

/// `AB + BA`; Hermitian for Hermitian inputs.
pub fn anticommutator(a: &HermitianOperator, b: &HermitianOperator) -> Result<CMatrix> {
    a.check_same_dim(b)?;
    Ok(&(a.matrix() * b.matrix()) + &(b.matrix() * a.matrix()))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

/// Dyson's parameter, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub const HALF: Alpha = Alpha(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidAlpha(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - alpha`.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }

    /// `|2 alpha - 1|`, the exponent in the modified commutator term.
    pub fn commutator_exponent(self) -> f64 {
        (2.0 * self.0 - 1.0).abs()
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

/// Pauli matrices, handy for tests and small examples.
pub mod pauli {
    use super::*;

    fn m(rows: [[Complex64; 2]; 2]) -> CMatrix {
        CMatrix::from_fn(2, |i, j| rows[i][j])
    }

    const Z: Complex64 = Complex64::new(0.0, 0.0);
    const O: Complex64 = Complex64::new(1.0, 0.0);
    const I: Complex64 = Complex64::new(0.0, 1.0);

    pub fn x() -> CMatrix {
        m([[Z, O], [O, Z]])
    }

    pub fn y() -> CMatrix {
        m([[Z, -I], [I, Z]])
    }

    pub fn z() -> CMatrix {
        m([[O, Z], [Z, -O]])
    }

    pub fn sx() -> HermitianOperator {
        HermitianOperator(x())
    }

    pub fn sy() -> HermitianOperator {
        HermitianOperator(y())
    }

    pub fn sz() -> HermitianOperator {
        HermitianOperator(z())
    }
}
