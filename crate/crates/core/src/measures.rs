//! Wigner–Yanase–Dyson information quantities.
//!
//! Every quantity has a trace route, built from matrix products of `rho^p`
//! and the observables, and where it makes sense a spectral route that works
//! with the eigenvalues of `rho` and the observable's matrix elements in the
//! eigenbasis. The two routes share only the eigendecomposition, so each is
//! an oracle for the other.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::sci12;
use crate::linalg::{
    anticommutator, center_observable, commutator, eigenvalue_power, matrix_power, trace_product,
    Alpha, CMatrix, DensityMatrix, HermitianOperator, SpectralDecomposition,
};

/// Absolute slack (scaled by `1 + magnitude`) below zero that is still
/// treated as roundoff for quantities that are nonnegative in exact arithmetic.
pub const CLAMP_SLACK: f64 = 1e-12;

/// Relative tolerance for the internal cross-checks between equivalent forms.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

/// Slack on the real part of `Tr(rho [A, B])`, relative to `max(1, |A| |B|)`.
pub const IMAGINARY_TOL: f64 = 1e-10;

fn nonnegative(quantity: &'static str, value: f64, magnitude: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -CLAMP_SLACK * (1.0 + magnitude.abs()) {
        Ok(0.0)
    } else {
        Err(Error::NumericalFailure { quantity, value })
    }
}

fn check_dims(rho: &DensityMatrix, x: &HermitianOperator) -> Result<()> {
    rho.operator().check_same_dim(x)
}

/// `Tr(rho X^2)` and `Tr(rho X)`.
fn second_moments(rho: &DensityMatrix, x: &HermitianOperator) -> Result<(f64, f64)> {
    check_dims(rho, x)?;
    let tr_x2 = rho.matrix().trace_of_product(x.square().matrix()).re;
    let mean = rho.expectation(x)?;
    Ok((tr_x2, mean))
}

/// `Tr(rho^alpha X rho^(1-alpha) X)`.
fn wyd_correlation(rho: &DensityMatrix, x: &HermitianOperator, alpha: Alpha) -> Result<f64> {
    check_dims(rho, x)?;
    let ra = matrix_power(rho, alpha.value())?;
    let rb = matrix_power(rho, alpha.complement())?;
    Ok(trace_product(&[ra.matrix(), x.matrix(), rb.matrix(), x.matrix()])?.re)
}

/// `V(rho, X) = Tr(rho X^2) - Tr(rho X)^2`.
pub fn variance(rho: &DensityMatrix, x: &HermitianOperator) -> Result<f64> {
    let (tr_x2, mean) = second_moments(rho, x)?;
    nonnegative("variance", tr_x2 - mean * mean, tr_x2)
}

/// `I_alpha(rho, X) = Tr(rho X^2) - Tr(rho^alpha X rho^(1-alpha) X)`.
pub fn i_alpha(rho: &DensityMatrix, x: &HermitianOperator, alpha: Alpha) -> Result<f64> {
    let (tr_x2, _) = second_moments(rho, x)?;
    let corr = wyd_correlation(rho, x, alpha)?;
    nonnegative("I_alpha", tr_x2 - corr, tr_x2)
}

/// The same quantity with the centered observable `X - Tr(rho X)`.
pub fn i_alpha_centered(rho: &DensityMatrix, x: &HermitianOperator, alpha: Alpha) -> Result<f64> {
    let x0 = center_observable(rho, x)?;
    i_alpha(rho, &x0, alpha)
}

/// Spectral form of `I_alpha`:
/// `sum_{i<j} (l_i + l_j - l_i^a l_j^(1-a) - l_i^(1-a) l_j^a) |X_ij|^2`.
pub fn i_alpha_spectral(
    decomp: &SpectralDecomposition,
    x: &HermitianOperator,
    alpha: Alpha,
) -> Result<f64> {
    let xe = decomp.to_eigenbasis(x.matrix())?;
    let lam = &decomp.eigenvalues;
    let (a, b) = (alpha.value(), alpha.complement());
    let mut total = 0.0;
    let mut magnitude = 0.0;
    for i in 0..lam.len() {
        for j in i + 1..lam.len() {
            let w = xe[(i, j)].norm_sqr();
            let cross = eigenvalue_power(lam[i], a) * eigenvalue_power(lam[j], b)
                + eigenvalue_power(lam[i], b) * eigenvalue_power(lam[j], a);
            total += (lam[i] + lam[j] - cross) * w;
            magnitude += (lam[i] + lam[j]) * w;
        }
    }
    nonnegative("I_alpha (spectral)", total, magnitude)
}

/// `J_alpha(rho, Y) = Tr(rho Y^2) + Tr(rho^alpha Y rho^(1-alpha) Y) - 2 Tr(rho Y)^2`.
pub fn j_alpha(rho: &DensityMatrix, y: &HermitianOperator, alpha: Alpha) -> Result<f64> {
    let (tr_y2, mean) = second_moments(rho, y)?;
    let corr = wyd_correlation(rho, y, alpha)?;
    nonnegative("J_alpha", tr_y2 + corr - 2.0 * mean * mean, tr_y2)
}

/// `J_alpha` as `1/2 Tr({rho^alpha, Y0} {rho^(1-alpha), Y0})` with
/// `Y0 = Y - Tr(rho Y)`.
pub fn j_alpha_anticommutator(
    rho: &DensityMatrix,
    y: &HermitianOperator,
    alpha: Alpha,
) -> Result<f64> {
    let y0 = center_observable(rho, y)?;
    let ra = matrix_power(rho, alpha.value())?;
    let rb = matrix_power(rho, alpha.complement())?;
    let left = anticommutator(&ra, &y0)?;
    let right = anticommutator(&rb, &y0)?;
    let value = 0.5 * left.trace_of_product(&right).re;
    nonnegative("J_alpha (anticommutator)", value, y0.square().matrix().trace().re)
}

/// Spectral form of `J_alpha`:
/// `2 sum_i l_i |Y_ii|^2 - 2 (sum_i l_i Y_ii)^2
///  + sum_{i<j} (l_i + l_j + l_i^a l_j^(1-a) + l_i^(1-a) l_j^a) |Y_ij|^2`.
pub fn j_alpha_spectral(
    decomp: &SpectralDecomposition,
    y: &HermitianOperator,
    alpha: Alpha,
) -> Result<f64> {
    let ye = decomp.to_eigenbasis(y.matrix())?;
    let lam = &decomp.eigenvalues;
    let (a, b) = (alpha.value(), alpha.complement());
    let mut diag_sq = 0.0;
    let mut diag_mean = 0.0;
    for (i, &l) in lam.iter().enumerate() {
        let d = ye[(i, i)].re;
        diag_sq += l * d * d;
        diag_mean += l * d;
    }
    let mut off = 0.0;
    for i in 0..lam.len() {
        for j in i + 1..lam.len() {
            let cross = eigenvalue_power(lam[i], a) * eigenvalue_power(lam[j], b)
                + eigenvalue_power(lam[i], b) * eigenvalue_power(lam[j], a);
            off += (lam[i] + lam[j] + cross) * ye[(i, j)].norm_sqr();
        }
    }
    let total = 2.0 * diag_sq - 2.0 * diag_mean * diag_mean + off;
    nonnegative("J_alpha (spectral)", total, 2.0 * diag_sq + off)
}

/// `U_alpha = sqrt(I_alpha J_alpha)`, cross-checked against
/// `sqrt(V^2 - (V - I_alpha)^2)`.
pub fn u_alpha(rho: &DensityMatrix, x: &HermitianOperator, alpha: Alpha) -> Result<f64> {
    Ok(decompose_variance(rho, x, alpha)?.u_alpha)
}

/// Wigner–Yanase skew information `-1/2 Tr([rho^(1/2), X]^2)`, computed
/// without going through `I_alpha`.
pub fn skew_information(rho: &DensityMatrix, x: &HermitianOperator) -> Result<f64> {
    check_dims(rho, x)?;
    let root = matrix_power(rho, 0.5)?;
    let c = commutator(&root, x)?;
    let value = -0.5 * c.trace_of_product(&c).re;
    let magnitude = rho.matrix().trace_of_product(x.square().matrix()).re;
    nonnegative("skew information", value, magnitude)
}

fn imaginary_trace(weight: &CMatrix, comm: &CMatrix, scale: f64) -> Result<Complex64> {
    let t = weight.trace_of_product(comm);
    if t.re.abs() > IMAGINARY_TOL * scale.max(1.0) {
        return Err(Error::NonImaginaryResult(t.re));
    }
    Ok(Complex64::new(0.0, t.im))
}

/// `Tr(rho [A, B])`, purely imaginary for Hermitian `A`, `B`.
pub fn commutator_expectation(
    rho: &DensityMatrix,
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<Complex64> {
    check_dims(rho, a)?;
    let c = commutator(a, b)?;
    imaginary_trace(rho.matrix(), &c, a.matrix().norm() * b.matrix().norm())
}

/// `2i Im sum_{i<j} (l_i - l_j) A_ij B_ji`.
pub fn commutator_expectation_spectral(
    decomp: &SpectralDecomposition,
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<Complex64> {
    spectral_commutator_sum(decomp, a, b, |li, lj| li - lj)
}

fn spectral_commutator_sum(
    decomp: &SpectralDecomposition,
    a: &HermitianOperator,
    b: &HermitianOperator,
    weight: impl Fn(f64, f64) -> f64,
) -> Result<Complex64> {
    a.check_same_dim(b)?;
    let ae = decomp.to_eigenbasis(a.matrix())?;
    let be = decomp.to_eigenbasis(b.matrix())?;
    let lam = &decomp.eigenvalues;
    let mut s = 0.0;
    for i in 0..lam.len() {
        for j in i + 1..lam.len() {
            s += weight(lam[i], lam[j]) * (ae[(i, j)] * be[(j, i)]).im;
        }
    }
    Ok(Complex64::new(0.0, 2.0 * s))
}

/// `l_alpha(rho, A, B) = Tr(rho [A, B]) - Tr(rho^|2 alpha - 1| [A, B])`.
///
/// At `alpha = 1/2` this is exactly `Tr(rho [A, B])` because `rho^0 = I`.
pub fn l_alpha(
    rho: &DensityMatrix,
    a: &HermitianOperator,
    b: &HermitianOperator,
    alpha: Alpha,
) -> Result<Complex64> {
    let base = commutator_expectation(rho, a, b)?;
    let p = alpha.commutator_exponent();
    if p == 0.0 {
        return Ok(base);
    }
    let c = commutator(a, b)?;
    let weight = matrix_power(rho, p)?;
    let shifted = imaginary_trace(weight.matrix(), &c, a.matrix().norm() * b.matrix().norm())?;
    Ok(base - shifted)
}

/// `2i sum_{i<j} (l_i - l_j - (l_i^p - l_j^p)) Im(A_ij B_ji)` with
/// `p = |2 alpha - 1|`.
pub fn l_alpha_spectral(
    decomp: &SpectralDecomposition,
    a: &HermitianOperator,
    b: &HermitianOperator,
    alpha: Alpha,
) -> Result<Complex64> {
    let p = alpha.commutator_exponent();
    spectral_commutator_sum(decomp, a, b, |li, lj| {
        li - lj - (eigenvalue_power(li, p) - eigenvalue_power(lj, p))
    })
}

/// `1/4 |z|^2`, the bound every relation compares against.
pub fn quarter_modulus_sq(z: Complex64) -> f64 {
    0.25 * z.norm_sqr()
}

/// Variance split into its quantum and classical parts for one observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyComponents {
    #[serde(serialize_with = "sci12::serialize")]
    pub variance: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub i_alpha: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub j_alpha: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub u_alpha: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub classical: f64,
}

/// Computes `V`, `I_alpha`, `J_alpha`, `U_alpha` and `V - I_alpha`.
pub fn decompose_variance(
    rho: &DensityMatrix,
    x: &HermitianOperator,
    alpha: Alpha,
) -> Result<UncertaintyComponents> {
    let (tr_x2, mean) = second_moments(rho, x)?;
    let v = nonnegative("variance", tr_x2 - mean * mean, tr_x2)?;
    let corr = wyd_correlation(rho, x, alpha)?;
    let i = nonnegative("I_alpha", tr_x2 - corr, tr_x2)?;
    let j = nonnegative("J_alpha", tr_x2 + corr - 2.0 * mean * mean, tr_x2)?;

    let product = i * j;
    let difference_of_squares = v * v - (v - i) * (v - i);
    if (product - difference_of_squares).abs() > CROSS_CHECK_TOL * (v * v).max(1.0) {
        return Err(Error::CrossCheck {
            quantity: "U_alpha^2",
            first: product,
            second: difference_of_squares,
        });
    }
    let classical = nonnegative("V - I_alpha", v - i, tr_x2)?;
    Ok(UncertaintyComponents {
        variance: v,
        i_alpha: i,
        j_alpha: j,
        u_alpha: product.max(0.0).sqrt(),
        classical,
    })
}
