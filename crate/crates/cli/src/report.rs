//! CSV outputs with fixed schemas.

use std::path::Path;

use serde::Serialize;

/// One row of `report.csv`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub check: String,
    pub value: String,
    pub threshold: String,
    pub pass: bool,
    pub paper_ref: String,
}

/// Plain decimal for moderate magnitudes, scientific otherwise.
pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) || !v.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

impl Check {
    pub fn new(check: impl Into<String>, value: f64, threshold: f64, pass: bool, paper_ref: &str) -> Self {
        Self { check: check.into(), value: fmt_num(value), threshold: fmt_num(threshold), pass, paper_ref: paper_ref.into() }
    }

    /// A measured number with no pass criterion of its own.
    pub fn measured(check: impl Into<String>, value: f64, paper_ref: &str) -> Self {
        Self::info(check, fmt_num(value), paper_ref)
    }

    /// A measured quantity with no pass criterion of its own.
    pub fn info(check: impl Into<String>, value: impl ToString, paper_ref: &str) -> Self {
        Self { check: check.into(), value: value.to_string(), threshold: String::new(), pass: true, paper_ref: paper_ref.into() }
    }
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct ScanRow {
    pub p: f64,
    pub growth_exponent: Option<f64>,
    pub verdict: String,
}

#[derive(Debug, Serialize)]
pub struct VerdictRow {
    pub verdict: String,
    pub cited_case: String,
    pub also_cited: String,
    pub conditional: bool,
    pub fujita_exponent: f64,
    pub intermediate_exponent: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct HorizonRow {
    pub t: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Serialize)]
pub struct WitnessRow {
    pub t: f64,
    pub w_max: f64,
}

#[derive(Debug, Serialize)]
pub struct PointValueRow {
    pub point_id: usize,
    pub value: f64,
}
