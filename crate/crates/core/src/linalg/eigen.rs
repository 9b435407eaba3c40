//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the real plane rotation that zeroes it, so the
//! accumulated transform stays unitary to working precision.

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (descending) and the unitary whose columns are the matching
/// eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn new(eigenvalues: Vec<f64>, eigenvectors: CMatrix) -> Self {
        debug_assert_eq!(eigenvalues.len(), eigenvectors.dim());
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Column `i` is the eigenvector for `eigenvalues[i]`.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        self.eigenvectors().column(i)
    }

    /// `sum_i f(lambda_i) |x_i><x_i|`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let v = self.eigenvectors();
        let n = self.dim();
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        CMatrix::from_fn(n, |r, c| {
            (0..n)
                .map(|k| v[(r, k)] * v[(c, k)].conj() * weights[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|l| l)
    }

    /// Matrix of `m` in the eigenbasis: entry (i, j) is `<x_i| m |x_j>`.
    pub fn to_eigenbasis(&self, m: &CMatrix) -> Result<CMatrix> {
        let v = self.eigenvectors();
        v.check_same_dim(m)?;
        Ok(&(&v.adjoint() * m) * v)
    }
}

/// Diagonalizes a Hermitian matrix. Only the upper triangle's consistency
/// with the lower triangle is assumed, not checked; callers validate first.
pub fn hermitian_eigen(m: &CMatrix) -> Result<SpectralDecomposition> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n);
    let scale = a.norm();

    if n > 0 && scale > 0.0 {
        let threshold = (n as f64) * f64::EPSILON * scale;
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= threshold {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
        if !converged && off_diagonal_norm(&a) > threshold {
            return Err(Error::ConvergenceFailure(MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let mut vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    fix_phases(&mut vectors);
    Ok(SpectralDecomposition::new(eigenvalues, vectors))
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase_conj = (apq / mag).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = phase_conj * -s;
    let jqq = phase_conj * c;

    let n = a.dim();
    // A <- A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    // A <- J^dagger A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V <- V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Rotates each column so its largest-modulus entry is real and positive.
fn fix_phases(v: &mut CMatrix) {
    let n = v.dim();
    for col in 0..n {
        let mut best = 0;
        let mut best_mag = -1.0;
        for row in 0..n {
            let mag = v[(row, col)].norm();
            if mag > best_mag * (1.0 + 1e-12) {
                best = row;
                best_mag = mag;
            }
        }
        if best_mag <= 0.0 {
            continue;
        }
        let rot = v[(best, col)].conj() / best_mag;
        for row in 0..n {
            v[(row, col)] *= rot;
        }
        v[(best, col)] = Complex64::new(v[(best, col)].re, 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn residual(m: &CMatrix, d: &SpectralDecomposition) -> f64 {
        (0..m.dim())
            .map(|i| {
                let x = d.eigenvector(i);
                let mx: Vec<Complex64> = (0..m.dim())
                    .map(|r| (0..m.dim()).map(|k| m[(r, k)] * x[k]).sum())
                    .collect();
                mx.iter()
                    .zip(&x)
                    .map(|(a, b)| (a - b * d.eigenvalues[i]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_input_sorted_descending() {
        let m = CMatrix::from_real_diagonal(&[0.25, 0.75]);
        let d = hermitian_eigen(&m).unwrap();
        assert_eq!(d.eigenvalues, vec![0.75, 0.25]);
        assert_eq!(d.eigenvector(0), vec![c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn rank_one_projector() {
        let m = CMatrix::from_fn(2, |_, _| c(0.5, 0.0));
        let d = hermitian_eigen(&m).unwrap();
        assert_abs_diff_eq!(d.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.eigenvalues[1], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn complex_pivot_and_residual() {
        // off-diagonal observable with complex coupling, eigenvalues +-sqrt(20)
        let m = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(4.0, 2.0)],
            vec![c(4.0, -2.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let d = hermitian_eigen(&m).unwrap();
        let r = 20f64.sqrt();
        assert_abs_diff_eq!(d.eigenvalues[0], r, epsilon = 1e-13);
        assert_abs_diff_eq!(d.eigenvalues[1], -r, epsilon = 1e-13);
        assert!(residual(&m, &d) < 1e-12);
        assert!(d.reconstruct().max_abs_diff(&m) < 1e-13);
    }

    #[test]
    fn dense_4x4_reconstruction_and_unitarity() {
        // Fixed Hermitian matrix with distinct and repeated structure.
        let entries = [
            [c(2.0, 0.0), c(1.0, -0.5), c(0.0, 0.3), c(-0.7, 0.0)],
            [c(1.0, 0.5), c(-1.0, 0.0), c(0.25, 0.25), c(0.0, -1.1)],
            [c(0.0, -0.3), c(0.25, -0.25), c(0.5, 0.0), c(0.9, 0.4)],
            [c(-0.7, 0.0), c(0.0, 1.1), c(0.9, -0.4), c(3.0, 0.0)],
        ];
        let m = CMatrix::from_fn(4, |i, j| entries[i][j]);
        let d = hermitian_eigen(&m).unwrap();
        assert!(d.reconstruct().max_abs_diff(&m) <= 4e-10);
        assert!(residual(&m, &d) <= 1e-10 * (1.0 + m.max_abs()));
        let v = d.eigenvectors();
        assert!((&v.adjoint() * v).max_abs_diff(&CMatrix::identity(4)) < 1e-13);
        assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        for i in 0..4 {
            let x = d.eigenvector(i);
            let big = x
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap();
            assert!(big.re > 0.0 && big.im == 0.0);
        }
    }

    #[test]
    fn zero_matrix() {
        let d = hermitian_eigen(&CMatrix::zeros(3)).unwrap();
        assert_eq!(d.eigenvalues, vec![0.0; 3]);
    }
}
