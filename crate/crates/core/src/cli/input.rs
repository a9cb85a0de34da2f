//! Input decoding for the command-line front end.
//!
//! JSON: a single object or an array of objects. Matrices live under
//! `"matrix"` as row-major nested arrays, quaternions under `"quaternion"` as
//! `{"w","x","y","z"}`, pairs under `"left"` and `"right"`. Unknown keys are
//! ignored, so the output of `random` can be fed straight into `verify`.
//!
//! Plain: whitespace-separated numbers, one matrix row (or one quaternion)
//! per line. Blank lines separate records.

use serde::Deserialize;

use super::CliError;
use crate::linalg::{Mat3, Mat4};
use crate::quaternion::Quaternion;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    Quaternion,
    Pair,
    Matrix3,
    Matrix4,
    AnyMatrix,
}

impl Shape {
    fn describe(self) -> &'static str {
        match self {
            Shape::Quaternion => "a quaternion (4 numbers)",
            Shape::Pair => "a left/right quaternion pair",
            Shape::Matrix3 => "a 3x3 matrix",
            Shape::Matrix4 => "a 4x4 matrix",
            Shape::AnyMatrix => "a 3x3 or 4x4 matrix",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Record {
    Quaternion(Quaternion),
    Pair(Quaternion, Quaternion),
    Matrix3(Mat3),
    Matrix4(Mat4),
}

#[derive(Deserialize)]
struct QuatJson {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl QuatJson {
    fn into_quaternion(self) -> Result<Quaternion, CliError> {
        Ok(Quaternion::new(self.w, self.x, self.y, self.z)?)
    }
}

#[derive(Deserialize)]
struct RecordJson {
    matrix: Option<Vec<Vec<f64>>>,
    quaternion: Option<QuatJson>,
    left: Option<QuatJson>,
    right: Option<QuatJson>,
}

fn missing(shape: Shape) -> CliError {
    CliError::Invalid(format!("expected {}", shape.describe()))
}

fn square<const N: usize>(rows: &[Vec<f64>]) -> Option<[[f64; N]; N]> {
    if rows.len() != N || rows.iter().any(|r| r.len() != N) {
        return None;
    }
    Some(std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j])))
}

fn matrix_record(rows: &[Vec<f64>], shape: Shape) -> Result<Record, CliError> {
    if matches!(shape, Shape::Matrix3 | Shape::AnyMatrix) {
        if let Some(m) = square::<3>(rows) {
            return Ok(Record::Matrix3(Mat3::new(m)?));
        }
    }
    if matches!(shape, Shape::Matrix4 | Shape::AnyMatrix) {
        if let Some(m) = square::<4>(rows) {
            return Ok(Record::Matrix4(Mat4::new(m)?));
        }
    }
    Err(missing(shape))
}

fn quaternion_from_row(row: &[f64]) -> Result<Quaternion, CliError> {
    match row {
        &[w, x, y, z] => Ok(Quaternion::new(w, x, y, z)?),
        _ => Err(CliError::Invalid(format!("a quaternion needs 4 numbers, got {}", row.len()))),
    }
}

fn json_record(r: RecordJson, shape: Shape) -> Result<Record, CliError> {
    match shape {
        Shape::Quaternion => Ok(Record::Quaternion(r.quaternion.ok_or_else(|| missing(shape))?.into_quaternion()?)),
        Shape::Pair => match (r.left, r.right) {
            (Some(l), Some(rr)) => Ok(Record::Pair(l.into_quaternion()?, rr.into_quaternion()?)),
            _ => Err(missing(shape)),
        },
        _ => matrix_record(&r.matrix.ok_or_else(|| missing(shape))?, shape),
    }
}

fn plain_record(rows: &[Vec<f64>], shape: Shape) -> Result<Record, CliError> {
    match shape {
        Shape::Quaternion => match rows {
            [row] => Ok(Record::Quaternion(quaternion_from_row(row)?)),
            _ => Err(missing(shape)),
        },
        Shape::Pair => match rows {
            [l, r] => Ok(Record::Pair(quaternion_from_row(l)?, quaternion_from_row(r)?)),
            _ => Err(missing(shape)),
        },
        _ => matrix_record(rows, shape),
    }
}

/// Decoded records and whether the input was a batch (JSON array or more
/// than one plain block).
pub(crate) struct Parsed {
    pub records: Vec<Record>,
    pub batch: bool,
}

pub(crate) fn parse_json(input: &[u8], shape: Shape) -> Result<Parsed, CliError> {
    let value: serde_json::Value = serde_json::from_slice(input).map_err(|e| CliError::Parse(e.to_string()))?;
    let (items, batch) = match value {
        serde_json::Value::Array(items) => (items, true),
        obj @ serde_json::Value::Object(_) => (vec![obj], false),
        _ => return Err(CliError::Parse("expected a JSON object or array of objects".into())),
    };
    let records = items
        .into_iter()
        .map(|v| {
            let r: RecordJson = serde_json::from_value(v).map_err(|e| CliError::Parse(e.to_string()))?;
            json_record(r, shape)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Parsed { records, batch })
}

pub(crate) fn parse_plain(input: &[u8], shape: Shape) -> Result<Parsed, CliError> {
    let text = std::str::from_utf8(input).map_err(|e| CliError::Parse(e.to_string()))?;
    let mut blocks: Vec<Vec<Vec<f64>>> = vec![];
    let mut current: Vec<Vec<f64>> = vec![];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            if !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| CliError::Parse(format!("line {}: cannot parse {tok:?} as a number", lineno + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        current.push(row);
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    if blocks.is_empty() {
        return Err(CliError::Parse("empty input".into()));
    }
    let batch = blocks.len() > 1;
    let records = blocks.iter().map(|b| plain_record(b, shape)).collect::<Result<Vec<_>, _>>()?;
    Ok(Parsed { records, batch })
}
