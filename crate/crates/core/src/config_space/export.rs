//! CSV, JSON and OBJ writers for sample sets.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use super::ConfigSample;
use crate::error::{FoldError, Result};
use crate::geometry::{folded_geometry, CreasePattern, FoldAngleVector, CLOSURE_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
    Obj,
}

impl FromStr for ExportFormat {
    type Err = FoldError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            "obj" => Ok(ExportFormat::Obj),
            _ => Err(FoldError::InvalidInput(format!(
                "unknown export format '{s}'"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExportReport {
    pub written: usize,
    /// Samples left out of an OBJ because they do not close.
    pub skipped: usize,
}

fn width(samples: &[ConfigSample]) -> Result<usize> {
    let first = samples
        .first()
        .ok_or_else(|| FoldError::InvalidInput("nothing to export".into()))?;
    let n = first.rho.len();
    if samples.iter().any(|s| s.rho.len() != n) {
        return Err(FoldError::InvalidInput(
            "samples have different lengths".into(),
        ));
    }
    Ok(n)
}

/// Twelve significant digits; negative zero prints as zero.
fn fmt_f(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn csv_string(samples: &[ConfigSample]) -> Result<String> {
    let n = width(samples)?;
    let mut s = String::new();
    for k in 1..=n {
        let _ = write!(s, "rho{k},");
    }
    s.push_str("residual,valid,branch\n");
    for smp in samples {
        for x in smp.rho.as_slice() {
            s.push_str(&fmt_f(*x));
            s.push(',');
        }
        let _ = writeln!(s, "{},{},{}", fmt_f(smp.residual), smp.valid, smp.branch);
    }
    Ok(s)
}

pub fn export_csv(samples: &[ConfigSample], path: &Path) -> Result<ExportReport> {
    fs::write(path, csv_string(samples)?)?;
    Ok(ExportReport {
        written: samples.len(),
        skipped: 0,
    })
}

fn to_value(s: &ConfigSample) -> Value {
    let mut m = Map::new();
    for (k, x) in s.rho.as_slice().iter().enumerate() {
        m.insert(format!("rho{}", k + 1), Value::from(*x));
    }
    m.insert("residual".into(), Value::from(s.residual));
    m.insert("valid".into(), Value::from(s.valid));
    m.insert("branch".into(), Value::from(s.branch));
    Value::Object(m)
}

pub fn json_string(samples: &[ConfigSample]) -> Result<String> {
    width(samples)?;
    let arr = Value::Array(samples.iter().map(to_value).collect());
    Ok(serde_json::to_string_pretty(&arr)? + "\n")
}

pub fn export_json(samples: &[ConfigSample], path: &Path) -> Result<ExportReport> {
    fs::write(path, json_string(samples)?)?;
    Ok(ExportReport {
        written: samples.len(),
        skipped: 0,
    })
}

fn from_value(v: &Value) -> Result<ConfigSample> {
    let bad = |what: &str| FoldError::InvalidInput(format!("sample is missing {what}"));
    let m = v.as_object().ok_or_else(|| bad("an object"))?;
    let mut rho = Vec::new();
    while let Some(x) = m.get(&format!("rho{}", rho.len() + 1)) {
        rho.push(x.as_f64().ok_or_else(|| bad("numeric angles"))?);
    }
    Ok(ConfigSample {
        rho: FoldAngleVector::new(rho)?,
        residual: m
            .get("residual")
            .and_then(Value::as_f64)
            .ok_or_else(|| bad("residual"))?,
        valid: m
            .get("valid")
            .and_then(Value::as_bool)
            .ok_or_else(|| bad("valid"))?,
        branch: m
            .get("branch")
            .and_then(Value::as_u64)
            .and_then(|b| u32::try_from(b).ok())
            .ok_or_else(|| bad("branch"))?,
    })
}

pub fn import_json(path: &Path) -> Result<Vec<ConfigSample>> {
    let v: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    v.as_array()
        .ok_or_else(|| FoldError::InvalidInput("expected a JSON array".into()))?
        .iter()
        .map(from_value)
        .collect()
}

/// One object per sample: the vertex, the unit crease tips and the sector
/// triangles, with 1-based indices running across the whole file.
pub fn obj_string(
    samples: &[ConfigSample],
    pattern: &CreasePattern,
) -> Result<(String, ExportReport)> {
    let n = width(samples)?;
    if n != pattern.len() {
        return Err(FoldError::InvalidInput(format!(
            "samples have {n} angles but the pattern has {} creases",
            pattern.len()
        )));
    }
    let mut s = String::new();
    let mut base = 1;
    let mut report = ExportReport {
        written: 0,
        skipped: 0,
    };
    for (k, smp) in samples.iter().enumerate() {
        let Ok(state) = folded_geometry(pattern, &smp.rho, CLOSURE_TOL.max(smp.residual.min(1e-8)))
        else {
            report.skipped += 1;
            continue;
        };
        let _ = writeln!(s, "o sample_{k}");
        s.push_str("v 0 0 0\n");
        for p in &state.crease_images {
            let _ = writeln!(s, "v {} {} {}", fmt_f(p.x), fmt_f(p.y), fmt_f(p.z));
        }
        for i in 0..n {
            let a = base + 1 + i;
            let b = base + 1 + (i + 1) % n;
            let _ = writeln!(s, "f {base} {a} {b}");
        }
        base += n + 1;
        report.written += 1;
    }
    Ok((s, report))
}

pub fn export_obj(
    samples: &[ConfigSample],
    pattern: &CreasePattern,
    path: &Path,
) -> Result<ExportReport> {
    let (s, report) = obj_string(samples, pattern)?;
    fs::write(path, s)?;
    Ok(report)
}

/// Writes `samples` in `format`; OBJ needs the crease pattern they fold.
pub fn export(
    samples: &[ConfigSample],
    format: ExportFormat,
    path: &Path,
    pattern: Option<&CreasePattern>,
) -> Result<ExportReport> {
    match format {
        ExportFormat::Csv => export_csv(samples, path),
        ExportFormat::Json => export_json(samples, path),
        ExportFormat::Obj => {
            let p = pattern.ok_or_else(|| {
                FoldError::InvalidInput("OBJ export needs a crease pattern".into())
            })?;
            export_obj(samples, p, path)
        }
    }
}
