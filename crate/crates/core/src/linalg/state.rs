use num_complex::Complex64;

use super::eigen::SpectralDecomposition;
use super::matrix::CMatrix;
use super::operator::{spectral_decompose, validate_hermitian, HermitianOperator};
use crate::error::{Error, Result};

/// Validation tolerances for user-supplied matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub herm: f64,
    pub trace: f64,
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-9,
            trace: 1e-9,
            psd: 1e-12,
        }
    }
}

/// A validated quantum state with its spectral decomposition cached.
///
/// Eigenvalues in `[-tol_psd, tol_psd]` are set to zero and the spectrum is
/// renormalized to sum to one; the stored operator is rebuilt from that
/// spectrum so trace and spectral evaluations see the same state.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
    spectral: SpectralDecomposition,
}

pub fn density_from(raw: CMatrix, tol: Tolerances) -> Result<DensityMatrix> {
    let op = validate_hermitian(raw, tol.herm)?;
    let decomp = spectral_decompose(&op)?;
    DensityMatrix::from_decomposition(decomp, tol)
}

impl DensityMatrix {
    pub fn new(raw: CMatrix) -> Result<Self> {
        density_from(raw, Tolerances::default())
    }

    /// Builds `sum_i p_i |b_i><b_i|` from a spectrum and a unitary basis
    /// whose columns are the eigenvectors.
    pub fn from_spectrum(eigenvalues: &[f64], basis: &CMatrix, tol: Tolerances) -> Result<Self> {
        if eigenvalues.len() != basis.dim() {
            return Err(Error::DimensionMismatch(eigenvalues.len(), basis.dim()));
        }
        let gram = &basis.adjoint() * basis;
        let dev = gram.max_abs_diff(&CMatrix::identity(basis.dim()));
        if dev > tol.herm {
            return Err(Error::OutOfRange {
                name: "basis unitarity deviation",
                value: dev,
                range: "[0, tol_herm]",
            });
        }
        let raw = SpectralDecomposition::new(eigenvalues.to_vec(), basis.clone()).reconstruct();
        density_from(raw, tol)
    }

    /// Diagonal state `diag(p)`.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_real_diagonal(p))
    }

    /// `I / n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self::diagonal(&vec![1.0 / n as f64; n]).expect("maximally mixed state is valid")
    }

    /// `|psi><psi|` for a nonzero vector, normalized internally.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::OutOfRange {
                name: "state vector norm",
                value: norm,
                range: "(0, inf)",
            });
        }
        let n = psi.len();
        Self::new(CMatrix::from_fn(n, |i, j| psi[i] * psi[j].conj() / (norm * norm)))
    }

    pub(crate) fn from_decomposition(
        decomp: SpectralDecomposition,
        tol: Tolerances,
    ) -> Result<Self> {
        let min = decomp.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -tol.psd {
            return Err(Error::NotPsd(min));
        }
        let total: f64 = decomp.eigenvalues.iter().sum();
        if (total - 1.0).abs() > tol.trace || !total.is_finite() {
            return Err(Error::TraceNotOne(total - 1.0));
        }
        let clamped: Vec<f64> = decomp
            .eigenvalues
            .iter()
            .map(|&l| if l <= tol.psd { 0.0 } else { l })
            .collect();
        let sum: f64 = clamped.iter().sum();
        let eigenvalues: Vec<f64> = clamped.iter().map(|l| l / sum).collect();
        let spectral = SpectralDecomposition::new(eigenvalues, decomp.eigenvectors().clone());
        let op = HermitianOperator::from_hermitian_unchecked(spectral.reconstruct());
        Ok(Self { op, spectral })
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectral
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectral.eigenvalues
    }

    pub fn is_full_rank(&self) -> bool {
        self.eigenvalues().iter().all(|&l| l > 0.0)
    }

    /// `Tr(rho X)`, real for Hermitian `X`.
    pub fn expectation(&self, x: &HermitianOperator) -> Result<f64> {
        self.op.check_same_dim(x)?;
        Ok(self.matrix().trace_of_product(x.matrix()).re)
    }

    /// `U rho U^dagger`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        let rotated = self.op.conjugate_by(u)?;
        density_from(rotated.into_matrix(), Tolerances::default())
    }

    /// `rho_1 (x) rho_2`, decomposed afresh.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::new(self.matrix().kron(other.matrix()))
    }

    /// `t rho_1 + (1 - t) rho_2`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        self.op.check_same_dim(&other.op)?;
        let m = &self.matrix().scale_real(t) + &other.matrix().scale_real(1.0 - t);
        Self::new(m)
    }
}

/// Scalar power with the conventions used throughout: `0^p = 0` for `p > 0`
/// and `x^0 = 1` for every `x`, including zero.
pub fn eigenvalue_power(lambda: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if lambda <= 0.0 {
        0.0
    } else {
        lambda.powf(p)
    }
}

/// `rho^p` through the cached spectral decomposition. `p = 0` gives the
/// identity even for singular states.
pub fn matrix_power(rho: &DensityMatrix, p: f64) -> Result<HermitianOperator> {
    if p < 0.0 || p.is_nan() {
        return Err(Error::NegativeExponent(p));
    }
    if p == 0.0 {
        return Ok(HermitianOperator::identity(rho.dim()));
    }
    if p == 1.0 {
        return Ok(rho.operator().clone());
    }
    Ok(HermitianOperator::from_hermitian_unchecked(
        rho.spectral().reconstruct_with(|l| eigenvalue_power(l, p)),
    ))
}

/// `X - Tr(rho X) I`.
pub fn center_observable(rho: &DensityMatrix, x: &HermitianOperator) -> Result<HermitianOperator> {
    let mean = rho.expectation(x)?;
    let shift = CMatrix::identity(x.dim()).scale_real(mean);
    Ok(HermitianOperator::from_hermitian_unchecked(x.matrix() - &shift))
}
