//! Dense square complex matrices.
//!
//! Storage is row-major. Dimensions in this crate stay small (n <= 64), so
//! every product is the plain triple loop.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from nested rows, rejecting ragged or non-square input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row,
                    cols: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from separate real and imaginary row-major parts.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        if let Some(im) = im {
            if im.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row: im.len().min(n),
                    cols: 0,
                });
            }
        }
        let rows = re
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let imag = im.map(|m| m[i].as_slice());
                match imag {
                    Some(ir) if ir.len() != r.len() => Err(Error::NotSquare {
                        rows: n,
                        row: i,
                        cols: ir.len(),
                    }),
                    _ => Ok(r
                        .iter()
                        .enumerate()
                        .map(|(j, &x)| Complex64::new(x, imag.map_or(0.0, |ir| ir[j])))
                        .collect()),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.n.max(1)).map(<[_]>::to_vec).collect()
    }

    pub fn real_part(&self) -> Vec<Vec<f64>> {
        self.rows()
            .into_iter()
            .map(|r| r.into_iter().map(|z| z.re).collect())
            .collect()
    }

    pub fn imag_part(&self) -> Vec<Vec<f64>> {
        self.rows()
            .into_iter()
            .map(|r| r.into_iter().map(|z| z.im).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(self.n, other.n))
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> Complex64 {
        let n = self.n;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    /// Kronecker product, dimension `self.dim() * other.dim()`.
    pub fn kron(&self, other: &Self) -> Self {
        let (n1, n2) = (self.n, other.n);
        Self::from_fn(n1 * n2, |r, c| {
            self[(r / n2, c / n2)] * other[(r % n2, c % n2)]
        })
    }

    /// `<u| M |v>` for column vectors `u`, `v`.
    pub fn sandwich(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        self.data
            .chunks(self.n)
            .zip(u)
            .map(|(row, ui)| ui.conj() * row.iter().zip(v).map(|(m, vj)| m * vj).sum::<Complex64>())
            .sum()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "add dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "sub dimension mismatch");
        CMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

/// Trace of the left-to-right product of `ms`.
pub fn trace_product(ms: &[&CMatrix]) -> Result<Complex64> {
    let (first, rest) = ms.split_first().ok_or(Error::EmptyList)?;
    for m in rest {
        first.check_same_dim(m)?;
    }
    Ok(match rest {
        [] => first.trace(),
        [last] => first.trace_of_product(last),
        _ => {
            let (last, middle) = rest.split_last().expect("nonempty");
            let prefix = middle.iter().fold((*first).clone(), |acc, m| acc.matmul(m));
            prefix.trace_of_product(last)
        }
    })
}
