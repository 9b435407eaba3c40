//! Matrix JSON input and the fixed-precision number format used in reports.
//!
//! Matrices are `{"n": 2, "re": [[..], [..]], "im": [[..], [..]]}` with
//! row-major real and imaginary parts; `im` may be omitted. A density matrix
//! may instead be given by its spectrum,
//! `{"eigenvalues": [..], "basis": <matrix JSON>}`, where the basis columns
//! are the eigenvectors and default to the standard basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{validate_hermitian, CMatrix, DensityMatrix, HermitianOperator, Tolerances};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub n: usize,
    #[serde(serialize_with = "sci12::serialize_rows")]
    pub re: Vec<Vec<f64>>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "sci12::serialize_opt_rows"
    )]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumJson {
    eigenvalues: Vec<f64>,
    #[serde(default)]
    basis: Option<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum DensityJson {
    Matrix(MatrixJson),
    Spectrum(SpectrumJson),
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let im = m.imag_part();
        let has_im = im.iter().flatten().any(|&x| x != 0.0);
        Self {
            n: m.dim(),
            re: m.real_part(),
            im: has_im.then_some(im),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.re.len() != self.n {
            return Err(Error::Parse(format!(
                "field \"re\": expected {} rows, found {}",
                self.n,
                self.re.len()
            )));
        }
        if let Some(im) = &self.im {
            if im.len() != self.n {
                return Err(Error::Parse(format!(
                    "field \"im\": expected {} rows, found {}",
                    self.n,
                    im.len()
                )));
            }
        }
        for (field, rows) in [("re", Some(&self.re)), ("im", self.im.as_ref())] {
            for (i, row) in rows.into_iter().flatten().enumerate() {
                if row.len() != self.n {
                    return Err(Error::Parse(format!(
                        "field \"{field}\" row {i}: expected {} entries, found {}",
                        self.n,
                        row.len()
                    )));
                }
            }
        }
        CMatrix::from_parts(&self.re, self.im.as_deref())
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let json: MatrixJson = serde_json::from_str(text).map_err(parse_error)?;
    json.to_matrix()
}

pub fn parse_observable(text: &str, tol: Tolerances) -> Result<HermitianOperator> {
    validate_hermitian(parse_matrix(text)?, tol.herm)
}

pub fn parse_density(text: &str, tol: Tolerances) -> Result<DensityMatrix> {
    let json: DensityJson = serde_json::from_str(text).map_err(|e| {
        match serde_json::from_str::<MatrixJson>(text) {
            Err(inner) if !text.contains("eigenvalues") => parse_error(inner),
            _ => match serde_json::from_str::<SpectrumJson>(text) {
                Err(inner) => parse_error(inner),
                Ok(_) => parse_error(e),
            },
        }
    })?;
    match json {
        DensityJson::Matrix(m) => crate::linalg::density_from(m.to_matrix()?, tol),
        DensityJson::Spectrum(s) => {
            let basis = match s.basis {
                Some(b) => b.to_matrix()?,
                None => CMatrix::identity(s.eigenvalues.len()),
            };
            DensityMatrix::from_spectrum(&s.eigenvalues, &basis, tol)
        }
    }
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("matrix JSON serializes")
}

/// Numbers in reports are written with 12 significant digits in scientific
/// notation; non-finite values become `null`.
pub mod sci12 {
    use serde::ser::Error as _;
    use serde::{Serialize, Serializer};
    use serde_json::value::RawValue;

    pub fn format(x: f64) -> String {
        if x.is_finite() {
            format!("{x:.11e}")
        } else {
            "null".to_owned()
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        RawValue::from_string(format(*x))
            .map_err(S::Error::custom)?
            .serialize(s)
    }

    pub fn serialize_rows<S: Serializer>(rows: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
        let text = format!(
            "[{}]",
            rows.iter()
                .map(|r| format!("[{}]", r.iter().map(|&x| format(x)).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join(",")
        );
        RawValue::from_string(text)
            .map_err(S::Error::custom)?
            .serialize(s)
    }

    pub fn serialize_opt_rows<S: Serializer>(
        rows: &Option<Vec<Vec<f64>>>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        match rows {
            Some(r) => serialize_rows(r, s),
            None => s.serialize_none(),
        }
    }
}
