//! Uncertainty-relation checkers.
//!
//! Every relation compares a product of nonnegative uncertainty measures of
//! two observables against a quarter of a squared commutator term:
//!
//! | id           | left side                     | right side                   |
//! |--------------|-------------------------------|------------------------------|
//! | `heisenberg` | `V(A) V(B)`                   | `1/4 |Tr(rho [A,B])|^2`      |
//! | `luo_ij`     | `I_a(A) J_a(B)`               | `1/4 |Tr(rho [A,B])|^2`      |
//! | `luo_u`      | `U_a(A) U_a(B)`               | `1/4 |Tr(rho [A,B])|^2`      |
//! | `wyd_ij`     | `I_a(A) J_a(B)`               | `1/4 |l_a(rho, A, B)|^2`      |
//! | `wyd_ji`     | `I_a(B) J_a(A)`               | `1/4 |l_a(rho, A, B)|^2`      |
//! | `wyd_u`      | `U_a(A) U_a(B)`               | `1/4 |l_a(rho, A, B)|^2`      |
//!
//! The `luo_*` relations are theorems at `alpha = 1/2` only; away from it they
//! can fail, which is what [`verify_luo_violation`] and the golden instance
//! demonstrate.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::sci12;
use crate::linalg::{Alpha, CMatrix, DensityMatrix, HermitianOperator};
use crate::measures::{
    commutator_expectation, decompose_variance, i_alpha, j_alpha, l_alpha, quarter_modulus_sq,
    UncertaintyComponents,
};

/// Default relative slack for deciding whether a relation holds.
pub const DEFAULT_TOL_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationId {
    Heisenberg,
    LuoIj,
    LuoU,
    WydIj,
    WydJi,
    WydU,
}

impl RelationId {
    pub const ALL: [RelationId; 6] = [
        RelationId::Heisenberg,
        RelationId::LuoIj,
        RelationId::LuoU,
        RelationId::WydIj,
        RelationId::WydJi,
        RelationId::WydU,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationId::Heisenberg => "heisenberg",
            RelationId::LuoIj => "luo_ij",
            RelationId::LuoU => "luo_u",
            RelationId::WydIj => "wyd_ij",
            RelationId::WydJi => "wyd_ji",
            RelationId::WydU => "wyd_u",
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        RelationId::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<_> = RelationId::ALL.iter().map(|r| r.as_str()).collect();
                format!("unknown relation '{s}' (expected one of {})", known.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableComponents {
    pub a: UncertaintyComponents,
    pub b: UncertaintyComponents,
}

/// Outcome of one inequality check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub relation: RelationId,
    #[serde(serialize_with = "sci12::serialize")]
    pub alpha: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub lhs: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub rhs: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub margin: f64,
    pub holds: bool,
    pub components: ObservableComponents,
}

impl RelationReport {
    /// `margin / max(1, |lhs|, |rhs|)`.
    pub fn relative_margin(&self) -> f64 {
        self.margin / self.lhs.abs().max(self.rhs.abs()).max(1.0)
    }
}

/// `lhs - rhs >= -tol * max(1, |lhs|, |rhs|)`.
pub fn holds_within(lhs: f64, rhs: f64, tol_rel: f64) -> bool {
    lhs - rhs >= -tol_rel * lhs.abs().max(rhs.abs()).max(1.0)
}

/// Evaluates relation `id` on `(rho, A, B)`. `alpha` sets the Dyson
/// parameter for every relation except `heisenberg`, whose sides do not
/// depend on it (its components are still reported at `alpha`).
pub fn check_relation(
    id: RelationId,
    rho: &DensityMatrix,
    a: &HermitianOperator,
    b: &HermitianOperator,
    alpha: Alpha,
    tol_rel: f64,
) -> Result<RelationReport> {
    let ca = decompose_variance(rho, a, alpha)?;
    let cb = decompose_variance(rho, b, alpha)?;
    let commutator_bound = || commutator_expectation(rho, a, b).map(quarter_modulus_sq);
    let wyd_bound = || l_alpha(rho, a, b, alpha).map(quarter_modulus_sq);
    let (lhs, rhs) = match id {
        RelationId::Heisenberg => (ca.variance * cb.variance, commutator_bound()?),
        RelationId::LuoIj => (ca.i_alpha * cb.j_alpha, commutator_bound()?),
        RelationId::LuoU => (ca.u_alpha * cb.u_alpha, commutator_bound()?),
        RelationId::WydIj => (ca.i_alpha * cb.j_alpha, wyd_bound()?),
        RelationId::WydJi => (cb.i_alpha * ca.j_alpha, wyd_bound()?),
        RelationId::WydU => (ca.u_alpha * cb.u_alpha, wyd_bound()?),
    };
    Ok(RelationReport {
        relation: id,
        alpha: alpha.value(),
        lhs,
        rhs,
        margin: lhs - rhs,
        holds: holds_within(lhs, rhs, tol_rel),
        components: ObservableComponents { a: ca, b: cb },
    })
}

/// `V(X) V(Y) >= 1/4 |Tr(rho [X, Y])|^2`.
pub fn check_heisenberg(
    rho: &DensityMatrix,
    x: &HermitianOperator,
    y: &HermitianOperator,
) -> Result<RelationReport> {
    check_relation(RelationId::Heisenberg, rho, x, y, Alpha::HALF, DEFAULT_TOL_REL)
}

/// `I(X) J(Y) >= 1/4 |Tr(rho [X, Y])|^2` with the skew information (`alpha = 1/2`).
pub fn check_luo_ij(
    rho: &DensityMatrix,
    x: &HermitianOperator,
    y: &HermitianOperator,
) -> Result<RelationReport> {
    check_relation(RelationId::LuoIj, rho, x, y, Alpha::HALF, DEFAULT_TOL_REL)
}

/// `U(X) U(Y) >= 1/4 |Tr(rho [X, Y])|^2` at `alpha = 1/2`.
pub fn check_luo_u(
    rho: &DensityMatrix,
    x: &HermitianOperator,
    y: &HermitianOperator,
) -> Result<RelationReport> {
    check_relation(RelationId::LuoU, rho, x, y, Alpha::HALF, DEFAULT_TOL_REL)
}

/// `I_a(A) J_a(B) >= 1/4 |l_a|^2`, or `I_a(B) J_a(A)` when `swapped`.
pub fn check_wyd_ij(
    rho: &DensityMatrix,
    a: &HermitianOperator,
    b: &HermitianOperator,
    alpha: Alpha,
    swapped: bool,
) -> Result<RelationReport> {
    let id = if swapped {
        RelationId::WydJi
    } else {
        RelationId::WydIj
    };
    check_relation(id, rho, a, b, alpha, DEFAULT_TOL_REL)
}

/// `U_a(A) U_a(B) >= 1/4 |l_a|^2`.
pub fn check_wyd_u(
    rho: &DensityMatrix,
    a: &HermitianOperator,
    b: &HermitianOperator,
    alpha: Alpha,
) -> Result<RelationReport> {
    check_relation(RelationId::WydU, rho, a, b, alpha, DEFAULT_TOL_REL)
}

/// The skew-information relation evaluated with `I_alpha`, `J_alpha` at an
/// arbitrary `alpha`; `holds == false` marks a violation.
pub fn verify_luo_violation(
    rho: &DensityMatrix,
    a: &HermitianOperator,
    b: &HermitianOperator,
    alpha: Alpha,
) -> Result<RelationReport> {
    check_relation(RelationId::LuoIj, rho, a, b, alpha, DEFAULT_TOL_REL)
}

/// Two sides of the scalar inequality on a pair of eigenvalues:
/// `(l_i + l_j)^2 - (l_i^a l_j^(1-a) + l_i^(1-a) l_j^a)^2`
/// against `|(l_i - l_j) - (l_i^p - l_j^p)|^2`, `p = |2a - 1|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaGapRecord {
    pub lambda_i: f64,
    pub lambda_j: f64,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

pub fn scalar_lemma_gap(lambda_i: f64, lambda_j: f64, alpha: Alpha) -> Result<LemmaGapRecord> {
    for (name, value) in [("lambda_i", lambda_i), ("lambda_j", lambda_j)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::OutOfRange {
                name,
                value,
                range: "[0, 1]",
            });
        }
    }
    // evaluated at beta = max(alpha, 1 - alpha), with exponent 2 beta - 1 = |2 alpha - 1|
    let a = alpha.value().max(alpha.complement());
    let b = 1.0 - a;
    let p = 2.0 * a - 1.0;
    let pow = crate::linalg::eigenvalue_power;
    let sum = lambda_i + lambda_j;
    let cross = pow(lambda_i, a) * pow(lambda_j, b) + pow(lambda_i, b) * pow(lambda_j, a);
    let lhs = sum * sum - cross * cross;
    let diff = (lambda_i - lambda_j) - (pow(lambda_i, p) - pow(lambda_j, p));
    let rhs = diff * diff;
    Ok(LemmaGapRecord {
        lambda_i,
        lambda_j,
        alpha: alpha.value(),
        lhs,
        rhs,
        gap: lhs - rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    I,
    J,
}

/// Result of the tensor-product additivity check for one measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdditivityReport {
    pub measure: Measure,
    pub alpha: f64,
    /// `M(rho_1 (x) rho_2, A_1 (x) I + I (x) A_2)`.
    pub joint: f64,
    /// `M(rho_1, A_1)` and `M(rho_2, A_2)`.
    pub parts: [f64; 2],
    /// `|joint - parts[0] - parts[1]|`.
    pub deviation: f64,
    /// Deviations of the three intermediate trace identities: the WYD
    /// correlation, the second moment and the mean of the local sum.
    pub identity_deviations: [f64; 3],
}

impl AdditivityReport {
    pub fn max_deviation(&self) -> f64 {
        self.identity_deviations
            .iter()
            .copied()
            .fold(self.deviation, f64::max)
    }
}

pub fn check_additivity(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    a1: &HermitianOperator,
    a2: &HermitianOperator,
    alpha: Alpha,
    which: Measure,
) -> Result<AdditivityReport> {
    use crate::linalg::{matrix_power, trace_product};

    rho1.operator().check_same_dim(a1)?;
    rho2.operator().check_same_dim(a2)?;
    let rho12 = rho1.tensor(rho2)?;
    let local = a1.local_sum(a2);

    let measure = |rho: &DensityMatrix, x: &HermitianOperator| match which {
        Measure::I => i_alpha(rho, x, alpha),
        Measure::J => j_alpha(rho, x, alpha),
    };
    let joint = measure(&rho12, &local)?;
    let parts = [measure(rho1, a1)?, measure(rho2, a2)?];

    let corr = |rho: &DensityMatrix, x: &HermitianOperator| -> Result<f64> {
        let pa = matrix_power(rho, alpha.value())?;
        let pb = matrix_power(rho, alpha.complement())?;
        Ok(trace_product(&[pa.matrix(), x.matrix(), pb.matrix(), x.matrix()])?.re)
    };
    let second = |rho: &DensityMatrix, x: &HermitianOperator| -> f64 {
        rho.matrix().trace_of_product(x.square().matrix()).re
    };
    let m1 = rho1.expectation(a1)?;
    let m2 = rho2.expectation(a2)?;

    let corr_dev = (corr(&rho12, &local)? - (corr(rho1, a1)? + 2.0 * m1 * m2 + corr(rho2, a2)?)).abs();
    let second_dev = (second(&rho12, &local) - (second(rho1, a1) + 2.0 * m1 * m2 + second(rho2, a2))).abs();
    let mean_dev = (rho12.expectation(&local)? - (m1 + m2)).abs();

    Ok(AdditivityReport {
        measure: which,
        alpha: alpha.value(),
        joint,
        parts,
        deviation: (joint - parts[0] - parts[1]).abs(),
        identity_deviations: [corr_dev, second_dev, mean_dev],
    })
}

/// The two-level counterexample: `rho = diag(1/4, 3/4)`,
/// `A = [[0, 4 + 2i], [4 - 2i, 0]]`, `B = [[0, 1 - 5i], [1 + 5i, 0]]`.
/// The diagonals of `A` and `B` are not pinned by the construction; zero is
/// used, which affects only the variances.
#[derive(Debug, Clone)]
pub struct GoldenInstance {
    pub rho: DensityMatrix,
    pub a: HermitianOperator,
    pub b: HermitianOperator,
}

pub const GOLDEN_ALPHA: f64 = 0.25;

/// Builds the 2x2 instance from `x = y = a = b = 0`, `u = 4`, `v = 2`,
/// `c = 1`, `d = -5`.
pub fn golden_instance() -> GoldenInstance {
    let two_level = |u: f64, v: f64| {
        let m = CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => Complex64::new(u, v),
            (1, 0) => Complex64::new(u, -v),
            _ => Complex64::new(0.0, 0.0),
        });
        HermitianOperator::new(m).expect("two-level observable is Hermitian")
    };
    GoldenInstance {
        rho: DensityMatrix::diagonal(&[0.25, 0.75]).expect("diag(1/4, 3/4) is a state"),
        a: two_level(4.0, 2.0),
        b: two_level(1.0, -5.0),
    }
}

/// One numeric golden assertion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueCheck {
    pub field: &'static str,
    #[serde(serialize_with = "sci12::serialize")]
    pub expected: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub actual: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub tolerance: f64,
    pub passed: bool,
}

/// One golden assertion about whether a relation holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictCheck {
    pub field: &'static str,
    pub expected_holds: bool,
    pub report: RelationReport,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenReport {
    #[serde(serialize_with = "sci12::serialize")]
    pub alpha: f64,
    pub values: Vec<ValueCheck>,
    pub verdicts: Vec<VerdictCheck>,
    pub passed: bool,
}

impl GoldenReport {
    pub fn first_mismatch(&self) -> Option<Error> {
        let value = self.values.iter().find(|c| !c.passed).map(|c| Error::GoldenMismatch {
            field: c.field.to_owned(),
            expected: c.expected,
            got: c.actual,
        });
        value.or_else(|| {
            self.verdicts.iter().find(|c| !c.passed).map(|c| Error::GoldenMismatch {
                field: format!("{}.holds", c.field),
                expected: f64::from(u8::from(c.expected_holds)),
                got: f64::from(u8::from(c.report.holds)),
            })
        })
    }

    pub fn ensure(self) -> Result<Self> {
        match self.first_mismatch() {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }
}

/// Reference values for the golden instance and the precision they are quoted to.
pub const GOLDEN_IJ_PRODUCT: (f64, f64) = (99.83, 0.01);
pub const GOLDEN_COMMUTATOR_BOUND: (f64, f64) = (121.0, 1e-9);
pub const GOLDEN_L_BOUND: (f64, f64) = (8.6874, 0.001);

/// Evaluates the counterexample at `alpha`. `tolerance` replaces every
/// per-value tolerance when given.
pub fn golden_counterexample_report(alpha: Alpha, tolerance: Option<f64>) -> Result<GoldenReport> {
    let inst = golden_instance();
    let (rho, a, b) = (&inst.rho, &inst.a, &inst.b);

    let ij = i_alpha(rho, a, alpha)? * j_alpha(rho, b, alpha)?;
    let comm = quarter_modulus_sq(commutator_expectation(rho, a, b)?);
    let l = quarter_modulus_sq(l_alpha(rho, a, b, alpha)?);

    let value = |field, actual: f64, (expected, tol): (f64, f64)| {
        let tolerance = tolerance.unwrap_or(tol);
        ValueCheck {
            field,
            expected,
            actual,
            tolerance,
            passed: (actual - expected).abs() <= tolerance,
        }
    };
    let values = vec![
        value("I_alpha(A)*J_alpha(B)", ij, GOLDEN_IJ_PRODUCT),
        value("commutator_bound", comm, GOLDEN_COMMUTATOR_BOUND),
        value("l_alpha_bound", l, GOLDEN_L_BOUND),
    ];

    let verdict = |field, id, expected_holds| -> Result<VerdictCheck> {
        let report = check_relation(id, rho, a, b, alpha, DEFAULT_TOL_REL)?;
        Ok(VerdictCheck {
            field,
            expected_holds,
            passed: report.holds == expected_holds,
            report,
        })
    };
    let verdicts = vec![
        verdict("luo_ij", RelationId::LuoIj, false)?,
        verdict("wyd_ij", RelationId::WydIj, true)?,
        verdict("wyd_ji", RelationId::WydJi, true)?,
        verdict("wyd_u", RelationId::WydU, true)?,
    ];
    let passed = values.iter().all(|c| c.passed) && verdicts.iter().all(|c| c.passed);
    Ok(GoldenReport {
        alpha: alpha.value(),
        values,
        verdicts,
        passed,
    })
}

/// Reproduces the golden counterexample at `alpha = 1/4`, failing with
/// [`Error::GoldenMismatch`] on the first assertion that does not match.
pub fn verify_golden_counterexample() -> Result<GoldenReport> {
    golden_counterexample_report(Alpha::new(GOLDEN_ALPHA)?, None)?.ensure()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use approx::assert_abs_diff_eq;

    fn quarter() -> Alpha {
        Alpha::new(0.25).unwrap()
    }

    #[test]
    fn relation_ids_round_trip_through_strings() {
        for id in RelationId::ALL {
            assert_eq!(id.as_str().parse::<RelationId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{id}\""));
        }
        assert!("luo".parse::<RelationId>().is_err());
    }

    #[test]
    fn heisenberg_examples() {
        let inst = golden_instance();
        let r = check_heisenberg(&inst.rho, &inst.a, &inst.b).unwrap();
        assert_abs_diff_eq!(r.lhs, 520.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.rhs, 121.0, epsilon = 1e-9);
        assert!(r.holds);

        let same = check_heisenberg(&inst.rho, &inst.a, &inst.a).unwrap();
        assert_eq!(same.rhs, 0.0);
        assert!(same.holds);

        let up = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let z = pauli::sz();
        let r = check_heisenberg(&up, &z, &pauli::sx()).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.holds);
    }

    #[test]
    fn luo_examples_at_half() {
        let inst = golden_instance();
        let r = check_luo_ij(&inst.rho, &inst.a, &inst.b).unwrap();
        let s: f64 = 2.0 * (0.25f64 * 0.75).sqrt();
        let expected = (1.0 - s) * 20.0 * (1.0 + s) * 26.0;
        assert_abs_diff_eq!(r.lhs, expected, epsilon = 1e-9);
        assert_abs_diff_eq!(r.lhs, 130.0, epsilon = 1e-9);
        assert!(r.holds);
        assert!(check_luo_u(&inst.rho, &inst.a, &inst.b).unwrap().holds);

        let mixed = DensityMatrix::maximally_mixed(2);
        let r = check_luo_ij(&mixed, &pauli::sx(), &pauli::sy()).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rhs, 0.0, epsilon = 1e-15);
        assert!(r.holds);
    }

    #[test]
    fn wyd_examples() {
        let inst = golden_instance();
        let r = check_wyd_ij(&inst.rho, &inst.a, &inst.b, quarter(), false).unwrap();
        assert_abs_diff_eq!(r.lhs, 99.834, epsilon = 1e-3);
        assert_abs_diff_eq!(r.rhs, 8.68741, epsilon = 1e-5);
        assert!(r.holds);
        assert!(check_wyd_ij(&inst.rho, &inst.a, &inst.b, quarter(), true).unwrap().holds);

        let half = check_wyd_ij(&inst.rho, &inst.a, &inst.b, Alpha::HALF, false).unwrap();
        let luo = check_luo_ij(&inst.rho, &inst.a, &inst.b).unwrap();
        assert_eq!(half.lhs, luo.lhs);
        assert_eq!(half.rhs, luo.rhs);

        let same = check_wyd_ij(&inst.rho, &inst.a, &inst.a, quarter(), false).unwrap();
        assert_eq!(same.rhs, 0.0);
    }

    #[test]
    fn wyd_u_examples() {
        let inst = golden_instance();
        let r = check_wyd_u(&inst.rho, &inst.a, &inst.b, quarter()).unwrap();
        let ua = r.components.a.u_alpha;
        let ub = r.components.b.u_alpha;
        assert_abs_diff_eq!(r.lhs, ua * ub, epsilon = 1e-12);
        assert!(r.holds);

        // pure state: U = V, so the left side is V(A) V(B)
        let psi = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let pure = DensityMatrix::pure(&psi).unwrap();
        let r = check_wyd_u(&pure, &inst.a, &inst.b, quarter()).unwrap();
        let va = crate::measures::variance(&pure, &inst.a).unwrap();
        let vb = crate::measures::variance(&pure, &inst.b).unwrap();
        assert_abs_diff_eq!(r.lhs, va * vb, epsilon = 1e-9 * va * vb);
        assert!(r.holds);
    }

    #[test]
    fn luo_violation_examples() {
        let inst = golden_instance();
        let r = verify_luo_violation(&inst.rho, &inst.a, &inst.b, quarter()).unwrap();
        assert_abs_diff_eq!(r.lhs, 99.834, epsilon = 1e-3);
        assert_abs_diff_eq!(r.rhs, 121.0, epsilon = 1e-9);
        assert!(!r.holds);
        let r = verify_luo_violation(&inst.rho, &inst.a, &inst.b, Alpha::HALF).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn lemma_gap_examples() {
        let r = scalar_lemma_gap(0.3, 0.3, quarter()).unwrap();
        assert_abs_diff_eq!(r.gap, 0.0, epsilon = 1e-16);

        // Direct scalar evaluation, frozen.
        let r = scalar_lemma_gap(0.75, 0.25, quarter()).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.19198729810778062, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rhs, 0.017949192431122717, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gap, 0.174_038_105_676_657_9, epsilon = 1e-12);

        let r = scalar_lemma_gap(0.1, 0.001, Alpha::new(0.95).unwrap()).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.0036898416620056, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rhs, 0.0006198744948540826, epsilon = 1e-12);
        assert!(r.gap > 0.0);

        assert!(matches!(
            scalar_lemma_gap(1.5, 0.1, quarter()),
            Err(Error::OutOfRange { name: "lambda_i", .. })
        ));
    }

    #[test]
    fn lemma_fails_at_some_small_eigenvalue_pairs() {
        // The scalar inequality is not universal on the simplex.
        let r = scalar_lemma_gap(0.03, 0.08, Alpha::new(0.4).unwrap()).unwrap();
        assert!(r.gap < -1e-4, "gap = {}", r.gap);
    }

    #[test]
    fn additivity_trivial_instance() {
        let mixed = DensityMatrix::maximally_mixed(2);
        let z = pauli::sz();
        let r = check_additivity(&mixed, &mixed, &z, &z, quarter(), Measure::I).unwrap();
        assert_abs_diff_eq!(r.joint, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.parts[0], 0.0, epsilon = 1e-14);
        assert!(r.max_deviation() < 1e-14);
    }

    #[test]
    fn additivity_2x3_golden_state() {
        let inst = golden_instance();
        let rho2 = DensityMatrix::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let a2 = HermitianOperator::new(CMatrix::from_fn(3, |i, j| {
            Complex64::new((i + j) as f64, i as f64 - j as f64)
        }))
        .unwrap();
        for which in [Measure::I, Measure::J] {
            let r = check_additivity(&inst.rho, &rho2, &inst.a, &a2, quarter(), which).unwrap();
            assert!(r.max_deviation() <= 1e-9, "{which:?}: {r:?}");
        }
    }

    #[test]
    fn golden_counterexample() {
        let report = verify_golden_counterexample().unwrap();
        assert!(report.passed);
        assert_abs_diff_eq!(report.values[0].actual, 99.834, epsilon = 1e-3);

        let half = golden_counterexample_report(Alpha::HALF, None).unwrap();
        assert!(half.verdicts[0].report.holds);
        assert_abs_diff_eq!(half.verdicts[0].report.lhs, 130.0, epsilon = 1e-9);

        let strict = golden_counterexample_report(quarter(), Some(0.0)).unwrap();
        match strict.ensure() {
            Err(Error::GoldenMismatch { field, expected, .. }) => {
                assert_eq!(field, "I_alpha(A)*J_alpha(B)");
                assert_eq!(expected, 99.83);
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn report_json_key_order() {
        let inst = golden_instance();
        let r = check_wyd_ij(&inst.rho, &inst.a, &inst.b, quarter(), false).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let keys = ["\"relation\"", "\"alpha\"", "\"lhs\"", "\"rhs\"", "\"margin\"", "\"holds\"", "\"components\""];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["relation"], "wyd_ij");
        assert!((v["rhs"].as_f64().unwrap() - 8.68741).abs() < 1e-5);
    }
}
