//! Deterministic JSON and CSV output.
//!
//! Floating-point values are rounded to twelve significant digits so that
//! output is stable across platforms and free of round-off noise.

use serde::Serialize;
use serde_json::{Map, Number, Value};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unsupported output format {0:?} (expected json or csv)")]
pub struct UnsupportedFormat(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = UnsupportedFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(UnsupportedFormat(s.to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

#[derive(Debug, Error)]
pub enum EmitError {
    #[error(transparent)]
    Format(#[from] UnsupportedFormat),
    #[error("cannot serialize output: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv output needs a list of flat records")]
    NotTabular,
}

pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_significant(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .expect("formatted float parses");
    // avoid printing "-0.0"
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64 number"));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(results: &T) -> Result<Value, EmitError> {
    Ok(round_value(serde_json::to_value(results)?))
}

pub fn json<T: Serialize>(results: &T) -> Result<Vec<u8>, EmitError> {
    let mut out = serde_json::to_vec_pretty(&to_value(results)?)?;
    out.push(b'\n');
    Ok(out)
}

fn cell(v: &Value) -> Result<String, EmitError> {
    Ok(match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Array(_) | Value::Object(_) => return Err(EmitError::NotTabular),
    })
}

/// CSV with one column per field, in declaration order. `rows` must
/// serialize to a list of flat records.
pub fn csv<T: Serialize>(rows: &T) -> Result<Vec<u8>, EmitError> {
    let Value::Array(items) = to_value(rows)? else {
        return Err(EmitError::NotTabular);
    };
    let records: Vec<&Map<String, Value>> = items
        .iter()
        .map(|v| v.as_object().ok_or(EmitError::NotTabular))
        .collect::<Result<_, _>>()?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    if let Some(first) = records.first() {
        writer.write_record(first.keys())?;
    }
    for rec in records {
        let fields: Vec<String> = rec.values().map(cell).collect::<Result<_, _>>()?;
        writer.write_record(&fields)?;
    }
    writer.into_inner().map_err(|e| EmitError::Csv(e.into_error().into()))
}

/// Serializes `results` as a document (JSON) or a table (CSV) of `rows`.
pub fn emit<T: Serialize, R: Serialize>(results: &T, rows: &R, format: Format) -> Result<Vec<u8>, EmitError> {
    match format {
        Format::Json => json(results),
        Format::Csv => csv(rows),
    }
}
