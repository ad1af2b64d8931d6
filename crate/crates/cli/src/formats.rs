//! File formats: JSON form specs and certificates, CSV tables, float
//! formatting, atomic writes, and the error envelope.
//!
//! Scalars travel as their display strings (`"1/2-3/4*sqrt(2)"`), which parse
//! back to identical values, so every emitted JSON artifact round-trips
//! exactly. Floats in tables are fixed at 12 significant digits (printf
//! `%.12g` semantics) so identical runs produce byte-identical output.

use std::fmt;
use std::io::Write as _;
use std::path::Path;

use qflow_core::forms::{InhomogeneousForm, LinearForm, QuadraticForm};
use qflow_core::linalg::{Matrix, Vector};
use qflow_core::normalize::NormalizationCertificate;
use qflow_core::affine::AffineMap;
use qflow_core::scalar::Scalar;
use qflow_core::Error;
use serde::{Deserialize, Serialize};

use crate::explorer::{ReduceError, TableRow};

/// Failure carrying the process exit code and the machine-readable envelope
/// fields. Domain errors exit 1, I/O and schema errors exit 2.
#[derive(Debug)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn schema(message: impl Into<String>) -> CliError {
        CliError {
            code: "schema".into(),
            message: message.into(),
            exit: 2,
        }
    }

    pub fn domain(code: impl Into<String>, message: impl Into<String>) -> CliError {
        CliError {
            code: code.into(),
            message: message.into(),
            exit: 1,
        }
    }

    /// The JSON error envelope printed to stderr on failure.
    pub fn envelope(&self) -> String {
        serde_json::json!({
            "error": { "code": self.code, "message": self.message }
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        // Unparseable scalar text inside an otherwise well-formed document is
        // a schema problem; everything else is a domain failure.
        let exit = match e {
            Error::Parse(_) => 2,
            _ => 1,
        };
        CliError {
            code: e.code().into(),
            message: e.to_string(),
            exit,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError {
            code: "io".into(),
            message: e.to_string(),
            exit: 2,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::schema(e.to_string())
    }
}

impl From<ReduceError> for CliError {
    fn from(e: ReduceError) -> CliError {
        CliError {
            code: e.source.code().into(),
            message: e.to_string(),
            exit: 1,
        }
    }
}

/// A scalar in a JSON document: either a plain integer or the display
/// string of a `Scalar`. Serialization always uses the string form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl ScalarText {
    pub fn of(s: &Scalar) -> ScalarText {
        ScalarText::Text(s.to_string())
    }

    pub fn parse(&self) -> Result<Scalar, Error> {
        match self {
            ScalarText::Int(n) => Ok(Scalar::from_int(*n)),
            ScalarText::Text(t) => t.parse(),
        }
    }
}

/// Input document: a symmetric matrix A, a shift ξ, an optional linear form
/// L, and the field discriminant d every entry must live in (entries may
/// also be plain rationals).
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub d: u64,
    #[serde(rename = "A")]
    pub gram: Vec<Vec<ScalarText>>,
    pub xi: Vec<ScalarText>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<Vec<ScalarText>>,
}

impl PairSpec {
    pub fn from_parts(d: u64, f: &InhomogeneousForm, l: Option<&LinearForm>) -> PairSpec {
        PairSpec {
            d,
            gram: matrix_text(f.gram()),
            xi: vector_text(f.shift()),
            linear: l.map(|l| vector_text(l.coeffs())),
        }
    }

    /// Parse and validate into core types. Scalars whose discriminant is
    /// neither 1 nor the declared d are rejected as schema errors.
    pub fn to_parts(&self) -> Result<(QuadraticForm, Vector, Option<LinearForm>), CliError> {
        if self.d != 1 {
            // Validates positivity and squarefreeness of the declared field.
            Scalar::sqrt_of(self.d).map_err(CliError::from)?;
        }
        let check = |s: &Scalar| -> Result<(), CliError> {
            let ds = s.discriminant();
            if ds != 1 && ds != self.d {
                return Err(CliError::schema(format!(
                    "scalar {} lives in Q(sqrt({})), not the declared Q(sqrt({}))",
                    s, ds, self.d
                )));
            }
            Ok(())
        };
        let n = self.gram.len();
        let mut rows = Vec::with_capacity(n);
        for row in &self.gram {
            if row.len() != n {
                return Err(CliError::schema("A must be a square matrix"));
            }
            let mut out = Vec::with_capacity(n);
            for entry in row {
                let s = entry.parse()?;
                check(&s)?;
                out.push(s);
            }
            rows.push(out);
        }
        let q = QuadraticForm::new(Matrix::from_rows(rows))?;
        if self.xi.len() != n {
            return Err(CliError::domain(
                "dimension_mismatch",
                "xi must have one entry per row of A",
            ));
        }
        let mut xi = Vec::with_capacity(n);
        for entry in &self.xi {
            let s = entry.parse()?;
            check(&s)?;
            xi.push(s);
        }
        let l = match &self.linear {
            None => None,
            Some(coeffs) => {
                if coeffs.len() != n {
                    return Err(CliError::domain(
                        "dimension_mismatch",
                        "L must have one entry per row of A",
                    ));
                }
                let mut v = Vec::with_capacity(n);
                for entry in coeffs {
                    let s = entry.parse()?;
                    check(&s)?;
                    v.push(s);
                }
                Some(LinearForm::new(Vector::new(v)))
            }
        };
        Ok((q, Vector::new(xi), l))
    }
}

pub fn vector_text(v: &Vector) -> Vec<ScalarText> {
    v.iter().map(ScalarText::of).collect()
}

pub fn matrix_text(m: &Matrix) -> Vec<Vec<ScalarText>> {
    (0..m.rows()).map(|i| vector_text(&m.row(i))).collect()
}

pub fn parse_vector(entries: &[ScalarText]) -> Result<Vector, CliError> {
    let mut out = Vec::with_capacity(entries.len());
    for e in entries {
        out.push(e.parse()?);
    }
    Ok(Vector::new(out))
}

pub fn parse_matrix(rows: &[Vec<ScalarText>]) -> Result<Matrix, CliError> {
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r = Vec::with_capacity(row.len());
        for e in row {
            r.push(e.parse()?);
        }
        out.push(r);
    }
    Ok(Matrix::from_rows(out))
}

/// Normalization certificate as a JSON document, with a re-derived validity
/// flag and the zero-residual count of the re-checked transform.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub lambda: ScalarText,
    pub mu: ScalarText,
    pub g: Vec<Vec<ScalarText>>,
    pub v: Vec<ScalarText>,
    pub alpha: ScalarText,
    pub detg: ScalarText,
    /// True iff transporting the input pair through (λ, μ, g, v) reproduces
    /// the normal pair with every residual coefficient identically zero.
    pub residuals_zero: bool,
}

impl CertificateDoc {
    pub fn of(cert: &NormalizationCertificate, residuals_zero: bool) -> CertificateDoc {
        CertificateDoc {
            lambda: ScalarText::of(&cert.lambda),
            mu: ScalarText::of(&cert.mu),
            g: matrix_text(cert.map.linear_part()),
            v: vector_text(cert.map.translation_part()),
            alpha: ScalarText::of(&cert.alpha),
            detg: ScalarText::of(&cert.detg),
            residuals_zero,
        }
    }

    pub fn to_certificate(&self) -> Result<NormalizationCertificate, CliError> {
        Ok(NormalizationCertificate {
            lambda: self.lambda.parse()?,
            mu: self.mu.parse()?,
            map: AffineMap::new(parse_matrix(&self.g)?, parse_vector(&self.v)?)?,
            alpha: self.alpha.parse()?,
            detg: self.detg.parse()?,
        })
    }
}

/// printf `%.12g`: 12 significant digits, fixed or scientific notation by
/// the rounded decimal exponent, trailing zeros trimmed.
pub fn format_g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp_s) = sci.split_once('e').expect("{:e} always carries an exponent");
    let exp: i32 = exp_s.parse().expect("exponent is an integer");
    if exp < -4 || exp >= 12 {
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{}e{}{:02}", mant, if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let prec = (11 - exp).max(0) as usize;
        let fixed = format!("{:.*}", prec, x);
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    }
}

/// Integer value of an exact integral scalar from a search result.
fn scalar_int(s: &Scalar) -> i64 {
    s.to_f64().round() as i64
}

pub const TABLE_HEADER: &str = "target_a,target_b,R,x1,x2,x3,err_q,err_l,visited,mode";

/// Density table as CSV. Column layout is fixed; floats use `%.12g`; the
/// target_b column is empty when no linear form is in play.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for row in rows {
        let b = row.target_b.map(format_g12).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            format_g12(row.target_a),
            b,
            row.radius,
            scalar_int(&row.result.best_x[0]),
            scalar_int(&row.result.best_x[1]),
            scalar_int(&row.result.best_x[2]),
            format_g12(row.result.err_q),
            format_g12(row.result.err_l),
            row.result.visited,
            row.result.mode_used,
        ));
    }
    out
}

/// Density table as a JSON array mirroring the CSV columns. Floats are the
/// same `%.12g` strings as in the CSV, so both formats are byte-stable.
pub fn table_json(rows: &[TableRow]) -> String {
    let items: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            serde_json::json!({
                "target_a": format_g12(row.target_a),
                "target_b": row.target_b.map(format_g12),
                "R": row.radius,
                "x1": scalar_int(&row.result.best_x[0]),
                "x2": scalar_int(&row.result.best_x[1]),
                "x3": scalar_int(&row.result.best_x[2]),
                "err_q": format_g12(row.result.err_q),
                "err_l": format_g12(row.result.err_l),
                "visited": row.result.visited,
                "mode": row.result.mode_used.to_string(),
            })
        })
        .collect();
    serde_json::to_string_pretty(&items).expect("table serializes") + "\n"
}

/// Write through a temp file in the destination directory, then rename, so
/// readers never observe a half-written artifact.
pub fn atomic_write(path: &Path, data: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(data.as_bytes())?;
    tmp.persist(path).map_err(|e| CliError::from(e.error))?;
    Ok(())
}

/// Route output to a file (atomically) or stdout.
pub fn write_output(path: Option<&Path>, data: &str) -> Result<(), CliError> {
    match path {
        Some(p) => atomic_write(p, data),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}
