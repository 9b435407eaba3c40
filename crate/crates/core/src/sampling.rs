//! Seeded sampling of states and observables, violation search, and
//! alpha sweeps.
//!
//! Every trial owns a ChaCha8 stream: the generator is seeded from the
//! master seed and its stream number is the trial index. Trials therefore
//! draw identical numbers no matter how they are scheduled across threads,
//! and any recorded trial can be regenerated from `(master_seed, index)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{sci12, MatrixJson};
use crate::linalg::{Alpha, CMatrix, DensityMatrix, HermitianOperator};
use crate::measures::{
    commutator_expectation, i_alpha, j_alpha, l_alpha, quarter_modulus_sq, u_alpha,
};
use crate::relations::{check_relation, holds_within, RelationId, RelationReport, DEFAULT_TOL_REL};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 64;

/// Generator for trial `index` under `master_seed`.
pub fn trial_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMethod {
    /// Flat Dirichlet spectrum conjugated by a Haar unitary.
    EigenDirichletHaar,
    /// `G G^dagger / Tr(G G^dagger)` for complex Gaussian `G` (Hilbert–Schmidt).
    GinibreNormalized,
    /// Rank-one projector onto a Haar-random vector.
    Pure,
}

impl SampleMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleMethod::EigenDirichletHaar => "eigen_dirichlet_haar",
            SampleMethod::GinibreNormalized => "ginibre_normalized",
            SampleMethod::Pure => "pure",
        }
    }
}

impl std::str::FromStr for SampleMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [
            SampleMethod::EigenDirichletHaar,
            SampleMethod::GinibreNormalized,
            SampleMethod::Pure,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
        .ok_or_else(|| format!("unknown sampling method '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub dim: usize,
    pub seed: u64,
    pub method: SampleMethod,
    pub observable_scale: f64,
}

impl SampleSpec {
    pub fn validate(&self) -> Result<()> {
        if !(MIN_DIM..=MAX_DIM).contains(&self.dim) {
            return Err(Error::InvalidSpec(format!(
                "dim {} outside [{MIN_DIM}, {MAX_DIM}]",
                self.dim
            )));
        }
        if !(self.observable_scale > 0.0 && self.observable_scale.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "observable scale {} must be positive",
                self.observable_scale
            )));
        }
        Ok(())
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        entries.push(complex_normal(rng));
    }
    CMatrix::from_fn(dim, |i, j| entries[i * dim + j])
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
}

/// Haar-distributed unitary: Gram–Schmidt on the columns of a complex
/// Gaussian matrix. The triangular factor this implies has a positive real
/// diagonal, which is the phase correction that makes the result Haar.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(dim, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let proj = dot(q, &v);
                for (x, &qk) in v.iter_mut().zip(q) {
                    *x -= proj * qk;
                }
            }
        }
        normalize(&mut v);
        cols.push(v);
    }
    CMatrix::from_fn(dim, |i, j| cols[j][i])
}

fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim).map(|_| complex_normal(rng)).collect();
    normalize(&mut v);
    v
}

/// Flat Dirichlet draw on the probability simplex.
pub fn dirichlet_spectrum<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

pub fn random_density<R: Rng + ?Sized>(
    dim: usize,
    method: SampleMethod,
    rng: &mut R,
) -> Result<DensityMatrix> {
    match method {
        SampleMethod::EigenDirichletHaar => {
            let spectrum = dirichlet_spectrum(dim, rng);
            let u = random_unitary(dim, rng);
            let m = CMatrix::from_fn(dim, |r, c| {
                (0..dim)
                    .map(|k| u[(r, k)] * u[(c, k)].conj() * spectrum[k])
                    .sum()
            });
            DensityMatrix::new(m)
        }
        SampleMethod::GinibreNormalized => {
            let g = ginibre(dim, rng);
            let w = &g * &g.adjoint();
            let tr = w.trace().re;
            DensityMatrix::new(w.scale_real(1.0 / tr))
        }
        SampleMethod::Pure => DensityMatrix::pure(&haar_vector(dim, rng)),
    }
}

/// Draws a state according to `spec`, seeded from `spec.seed`.
pub fn sample_density(spec: &SampleSpec) -> Result<DensityMatrix> {
    spec.validate()?;
    random_density(spec.dim, spec.method, &mut spec.rng())
}

/// GUE-style observable: `(G + G^dagger) / 2` with `G` entries whose real
/// and imaginary parts have standard deviation `scale`.
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> HermitianOperator {
    let g = ginibre(dim, rng).scale_real(scale);
    let h = (&g + &g.adjoint()).scale_real(0.5);
    HermitianOperator::from_hermitian_unchecked(h)
}

/// One random `(rho, A, B)` triple.
#[derive(Debug, Clone)]
pub struct Instance {
    pub dim: usize,
    pub method: SampleMethod,
    pub rho: DensityMatrix,
    pub a: HermitianOperator,
    pub b: HermitianOperator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub trials: u64,
    pub dims: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    pub relation: RelationId,
    pub master_seed: u64,
    pub methods: Vec<SampleMethod>,
    pub observable_scale: f64,
    pub tol_rel: f64,
}

impl SearchSpec {
    /// Spec with the default ensembles (Hilbert–Schmidt and Dirichlet+Haar),
    /// unit observable scale and the default relation tolerance.
    pub fn new(
        relation: RelationId,
        trials: u64,
        dims: Vec<usize>,
        alpha_grid: Vec<f64>,
        master_seed: u64,
    ) -> Self {
        Self {
            trials,
            dims,
            alpha_grid,
            relation,
            master_seed,
            methods: vec![
                SampleMethod::GinibreNormalized,
                SampleMethod::EigenDirichletHaar,
            ],
            observable_scale: 1.0,
            tol_rel: DEFAULT_TOL_REL,
        }
    }

    pub fn validate(&self) -> Result<Vec<Alpha>> {
        if self.dims.is_empty() {
            return Err(Error::InvalidSpec("empty dimension list".into()));
        }
        if let Some(&d) = self.dims.iter().find(|d| !(MIN_DIM..=MAX_DIM).contains(*d)) {
            return Err(Error::InvalidSpec(format!(
                "dim {d} outside [{MIN_DIM}, {MAX_DIM}]"
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidSpec("empty method list".into()));
        }
        if !(self.observable_scale > 0.0 && self.observable_scale.is_finite()) {
            return Err(Error::InvalidSpec("observable scale must be positive".into()));
        }
        if self.alpha_grid.is_empty() {
            return Err(Error::InvalidSpec("empty alpha grid".into()));
        }
        self.alpha_grid.iter().map(|&a| Alpha::new(a)).collect()
    }

    /// Regenerates the random triple of trial `index`.
    pub fn draw(&self, index: u64) -> Result<Instance> {
        let mut rng = trial_rng(self.master_seed, index);
        let dim = self.dims[rng.random_range(0..self.dims.len())];
        let method = self.methods[rng.random_range(0..self.methods.len())];
        let rho = random_density(dim, method, &mut rng)?;
        let a = random_hermitian(dim, self.observable_scale, &mut rng);
        let b = random_hermitian(dim, self.observable_scale, &mut rng);
        Ok(Instance {
            dim,
            method,
            rho,
            a,
            b,
        })
    }

    /// Re-evaluates trial `index` at `alpha`.
    pub fn replay(&self, index: u64, alpha: f64) -> Result<RelationReport> {
        let inst = self.draw(index)?;
        check_relation(
            self.relation,
            &inst.rho,
            &inst.a,
            &inst.b,
            Alpha::new(alpha)?,
            self.tol_rel,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceMatrices {
    pub rho: MatrixJson,
    pub a: MatrixJson,
    pub b: MatrixJson,
}

/// A violating evaluation, with enough provenance to replay it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationRecord {
    pub trial_index: u64,
    pub seed: u64,
    pub dim: usize,
    pub method: SampleMethod,
    #[serde(serialize_with = "sci12::serialize")]
    pub alpha: f64,
    pub report: RelationReport,
    pub matrices: InstanceMatrices,
}

/// Margins are relative: `(lhs - rhs) / max(1, |lhs|, |rhs|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchSummary {
    pub trials: u64,
    pub violations: u64,
    pub skipped: u64,
    #[serde(serialize_with = "sci12::serialize")]
    pub worst_margin: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub min_holding_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub summary: SearchSummary,
    pub records: Vec<ViolationRecord>,
    /// `(trial_index, error)` for trials that failed numerically.
    pub failures: Vec<(u64, Error)>,
}

struct TrialOutcome {
    records: Vec<ViolationRecord>,
    margins: Vec<(f64, bool)>,
}

fn run_trial(spec: &SearchSpec, grid: &[Alpha], index: u64) -> Result<TrialOutcome> {
    let inst = spec.draw(index)?;
    let mut records = Vec::new();
    let mut margins = Vec::with_capacity(grid.len());
    for &alpha in grid {
        let report = check_relation(spec.relation, &inst.rho, &inst.a, &inst.b, alpha, spec.tol_rel)?;
        margins.push((report.relative_margin(), report.holds));
        if !report.holds {
            records.push(ViolationRecord {
                trial_index: index,
                seed: spec.master_seed,
                dim: inst.dim,
                method: inst.method,
                alpha: alpha.value(),
                report,
                matrices: InstanceMatrices {
                    rho: MatrixJson::from_matrix(inst.rho.matrix()),
                    a: MatrixJson::from_matrix(inst.a.matrix()),
                    b: MatrixJson::from_matrix(inst.b.matrix()),
                },
            });
        }
    }
    Ok(TrialOutcome { records, margins })
}

/// Runs `spec.trials` independent trials in parallel. Results are merged in
/// trial order, so the outcome does not depend on the thread count.
pub fn search_violations(spec: &SearchSpec) -> Result<SearchOutcome> {
    let grid = spec.validate()?;
    let outcomes: Vec<(u64, Result<TrialOutcome>)> = (0..spec.trials)
        .into_par_iter()
        .map(|i| (i, run_trial(spec, &grid, i)))
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut min_holding = f64::INFINITY;
    for (index, outcome) in outcomes {
        match outcome {
            Ok(t) => {
                for (m, holds) in t.margins {
                    worst = worst.min(m);
                    if holds {
                        min_holding = min_holding.min(m);
                    } else {
                        violations += 1;
                    }
                }
                records.extend(t.records);
            }
            Err(e) => failures.push((index, e)),
        }
    }
    let finite_or_zero = |x: f64| if x.is_finite() { x } else { 0.0 };
    Ok(SearchOutcome {
        summary: SearchSummary {
            trials: spec.trials,
            violations,
            skipped: failures.len() as u64,
            worst_margin: finite_or_zero(worst),
            min_holding_margin: finite_or_zero(min_holding),
        },
        records,
        failures,
    })
}

/// One row of an alpha sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(serialize_with = "sci12::serialize")]
    pub alpha: f64,
    #[serde(rename = "I_J_product", serialize_with = "sci12::serialize")]
    pub i_j_product: f64,
    #[serde(rename = "U_product", serialize_with = "sci12::serialize")]
    pub u_product: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub l_bound: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub commutator_bound: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub margin_wyd: f64,
    #[serde(serialize_with = "sci12::serialize")]
    pub margin_luo: f64,
}

impl SweepRow {
    pub const COLUMNS: [&'static str; 7] = [
        "alpha",
        "I_J_product",
        "U_product",
        "l_bound",
        "commutator_bound",
        "margin_wyd",
        "margin_luo",
    ];

    pub fn values(&self) -> [f64; 7] {
        [
            self.alpha,
            self.i_j_product,
            self.u_product,
            self.l_bound,
            self.commutator_bound,
            self.margin_wyd,
            self.margin_luo,
        ]
    }

    pub fn wyd_holds(&self, tol_rel: f64) -> bool {
        holds_within(self.i_j_product, self.l_bound, tol_rel)
    }
}

/// Tabulates both sides of the `I J` relations across `grid`.
pub fn sweep_alpha(
    rho: &DensityMatrix,
    a: &HermitianOperator,
    b: &HermitianOperator,
    grid: &[Alpha],
) -> Result<Vec<SweepRow>> {
    let commutator_bound = quarter_modulus_sq(commutator_expectation(rho, a, b)?);
    grid.iter()
        .map(|&alpha| {
            let ij = i_alpha(rho, a, alpha)? * j_alpha(rho, b, alpha)?;
            let u = u_alpha(rho, a, alpha)? * u_alpha(rho, b, alpha)?;
            let l_bound = quarter_modulus_sq(l_alpha(rho, a, b, alpha)?);
            Ok(SweepRow {
                alpha: alpha.value(),
                i_j_product: ij,
                u_product: u,
                l_bound,
                commutator_bound,
                margin_wyd: ij - l_bound,
                margin_luo: ij - commutator_bound,
            })
        })
        .collect()
}
