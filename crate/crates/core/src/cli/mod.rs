//! Command-line front end.
//!
//! [`run`] is the whole program minus process plumbing: it takes a
//! [`JobSpec`] and the raw input bytes and returns what goes to stdout and
//! stderr together with the exit code. Results are one JSON document on
//! stdout. Failures are a single-line `{"error": code, "detail": text}` on
//! stderr with exit code 2 (input could not be parsed or validated) or 3
//! (the input was understood but is mathematically rejected).

mod input;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::linalg::{check_orthonormal, Mat3, Mat4, DEFAULT_TOLERANCE};
use crate::quaternion::{Quaternion, UnitQuaternion};
use crate::random::{random_rotation_3d, random_rotation_4d, GENERATOR_NAME};
use crate::rot3::{
    self, classify, embed_4d_within, euler_rodrigues, extract_rotation, extract_rotoreflection,
    rotation_angle_within, rotoreflection_matrix, IsometryKind,
};
use crate::rot4::{associate_matrix, compose_4d, decompose_4d};
use input::{Record, Shape};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;

/// Identifies the sign representative chosen among `±q`.
pub const SIGN_CONVENTION: &str = "first_component_above_1e-12_positive";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Euler parameters to a 3×3 rotation (or rotoreflection) matrix.
    Quat2mat,
    /// 3×3 rotation or rotoreflection matrix to Euler parameters.
    Mat2quat,
    /// 4×4 rotation to its left/right unit quaternions.
    Decompose4,
    /// Left/right unit quaternions to a 4×4 rotation.
    Compose4,
    /// Rotation or rotoreflection, from the determinant.
    Classify,
    /// Rotation angle from the trace.
    Angle,
    /// Embed a 3×3 isometry into a 4×4 rotation.
    Embed,
    /// Seeded random rotation.
    Random,
    /// Run the full pipeline on a matrix and report every residual.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Rotation,
    Rotoreflection,
}

impl From<KindArg> for IsometryKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Rotation => IsometryKind::Rotation,
            KindArg::Rotoreflection => IsometryKind::Rotoreflection,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub format: Format,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub dim: Option<u8>,
    /// Forces the isometry kind; when absent it is inferred from the determinant.
    pub kind: Option<KindArg>,
}

impl JobSpec {
    pub fn new(command: Command) -> Self {
        Self { command, format: Format::Json, tolerance: DEFAULT_TOLERANCE, seed: None, dim: None, kind: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
    pub exit_code: i32,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Parse(String),
    Invalid(String),
    Math(Error),
    Verification(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Math(e)
    }
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io_error",
            CliError::Parse(_) => "parse_error",
            CliError::Invalid(_) => "invalid_input",
            CliError::Math(e) => e.code(),
            CliError::Verification(_) => "verification_failed",
        }
    }

    fn detail(&self) -> String {
        match self {
            CliError::Usage(s) | CliError::Io(s) | CliError::Parse(s) | CliError::Invalid(s) | CliError::Verification(s) => {
                s.clone()
            }
            CliError::Math(e) => e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Parse(_) | CliError::Invalid(_) => EXIT_INVALID,
            CliError::Math(Error::NonFinite { .. } | Error::NotUnit { .. } | Error::OriginPoint) => EXIT_INVALID,
            CliError::Math(_) | CliError::Verification(_) => EXIT_REJECTED,
        }
    }

    /// The single-line error object written to stderr.
    pub fn to_json_line(&self) -> String {
        #[derive(Serialize)]
        struct ErrorObject<'a> {
            error: &'a str,
            detail: String,
        }
        let obj = ErrorObject { error: self.code(), detail: self.detail() };
        let mut line = serde_json::to_string(&obj).expect("error object serializes");
        line.push('\n');
        line
    }
}

/// Floats for output: `-0.0` is written as `0.0`.
fn clean(x: f64) -> f64 {
    x + 0.0
}

#[derive(Serialize)]
struct QuatOut {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl From<Quaternion> for QuatOut {
    fn from(q: Quaternion) -> Self {
        Self { w: clean(q.w), x: clean(q.x), y: clean(q.y), z: clean(q.z) }
    }
}

impl From<UnitQuaternion> for QuatOut {
    fn from(q: UnitQuaternion) -> Self {
        q.quaternion().into()
    }
}

fn rows<const N: usize>(m: &crate::linalg::Matrix<N>) -> [[f64; N]; N] {
    m.rows().map(|row| row.map(clean))
}

#[derive(Serialize)]
#[serde(untagged)]
enum MatrixOut {
    Three([[f64; 3]; 3]),
    Four([[f64; 4]; 4]),
}

impl From<&Mat3> for MatrixOut {
    fn from(m: &Mat3) -> Self {
        MatrixOut::Three(rows(m))
    }
}

impl From<&Mat4> for MatrixOut {
    fn from(m: &Mat4) -> Self {
        MatrixOut::Four(rows(m))
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum Output {
    Matrix {
        matrix: MatrixOut,
        #[serde(skip_serializing_if = "Option::is_none")]
        kind: Option<IsometryKind>,
    },
    Extraction {
        quaternion: QuatOut,
        residual: f64,
        branch: rot3::Branch,
        kind: IsometryKind,
        sign_convention: &'static str,
    },
    Decomposition {
        left: QuatOut,
        right: QuatOut,
        rank1_residual: f64,
        reconstruction_error: f64,
        sign_convention: &'static str,
    },
    Classification {
        kind: IsometryKind,
        det: f64,
        gram_deviation: f64,
    },
    Angle {
        alpha: f64,
        cos_alpha: f64,
        kind: IsometryKind,
    },
    Random3 {
        matrix: MatrixOut,
        quaternion: QuatOut,
        dim: u8,
        seed: u64,
        generator: &'static str,
    },
    Random4 {
        matrix: MatrixOut,
        left: QuatOut,
        right: QuatOut,
        dim: u8,
        seed: u64,
        generator: &'static str,
    },
    Verify3 {
        dim: u8,
        kind: IsometryKind,
        gram_deviation: f64,
        det: f64,
        quaternion: QuatOut,
        branch: rot3::Branch,
        residual: f64,
        reconstruction_error: f64,
        tolerance: f64,
        pass: bool,
    },
    Verify4 {
        dim: u8,
        gram_deviation: f64,
        det: f64,
        associate_norm: f64,
        left: QuatOut,
        right: QuatOut,
        rank1_residual: f64,
        reconstruction_error: f64,
        tolerance: f64,
        pass: bool,
    },
}

fn shape_for(command: Command) -> Shape {
    match command {
        Command::Quat2mat => Shape::Quaternion,
        Command::Compose4 => Shape::Pair,
        Command::Decompose4 => Shape::Matrix4,
        Command::Mat2quat | Command::Classify | Command::Angle | Command::Embed => Shape::Matrix3,
        Command::Verify | Command::Random => Shape::AnyMatrix,
    }
}

fn as_mat3(r: &Record) -> &Mat3 {
    match r {
        Record::Matrix3(m) => m,
        _ => unreachable!("shape checked at parse time"),
    }
}

fn kind_of(m: &Mat3, forced: Option<KindArg>, tol: f64) -> Result<IsometryKind, CliError> {
    match forced {
        Some(k) => Ok(k.into()),
        None => Ok(classify(m, tol)?),
    }
}

fn extract(m: &Mat3, kind: IsometryKind, tol: f64) -> Result<rot3::ExtractionResult, Error> {
    match kind {
        IsometryKind::Rotation => extract_rotation(m, tol),
        IsometryKind::Rotoreflection => extract_rotoreflection(m, tol),
    }
}

fn process(spec: &JobSpec, record: &Record) -> Result<Output, CliError> {
    let tol = spec.tolerance;
    match spec.command {
        Command::Quat2mat => {
            let Record::Quaternion(q) = record else { unreachable!("shape checked at parse time") };
            let q = UnitQuaternion::new(*q)?;
            let kind: IsometryKind = spec.kind.unwrap_or(KindArg::Rotation).into();
            let m = match kind {
                IsometryKind::Rotation => euler_rodrigues(&q),
                IsometryKind::Rotoreflection => rotoreflection_matrix(&q),
            };
            Ok(Output::Matrix { matrix: (&m).into(), kind: Some(kind) })
        }
        Command::Mat2quat => {
            let m = as_mat3(record);
            let kind = match spec.kind {
                Some(k) => k.into(),
                None => classify(m, tol).map_err(|e| Error::NotARotation { reason: e.to_string() })?,
            };
            let r = extract(m, kind, tol)?;
            Ok(Output::Extraction {
                quaternion: r.params.into(),
                residual: clean(r.residual),
                branch: r.branch,
                kind,
                sign_convention: SIGN_CONVENTION,
            })
        }
        Command::Decompose4 => {
            let Record::Matrix4(m) = record else { unreachable!("shape checked at parse time") };
            let d = decompose_4d(m, tol)?;
            Ok(Output::Decomposition {
                left: d.left.into(),
                right: d.right.into(),
                rank1_residual: clean(d.rank1_residual),
                reconstruction_error: clean(d.reconstruction_error),
                sign_convention: SIGN_CONVENTION,
            })
        }
        Command::Compose4 => {
            let Record::Pair(l, r) = record else { unreachable!("shape checked at parse time") };
            let m = compose_4d(&UnitQuaternion::new(*l)?, &UnitQuaternion::new(*r)?);
            Ok(Output::Matrix { matrix: (&m).into(), kind: None })
        }
        Command::Classify => {
            let m = as_mat3(record);
            let kind = classify(m, tol)?;
            let rep = check_orthonormal(m, tol);
            Ok(Output::Classification {
                kind,
                det: clean(rep.determinant),
                gram_deviation: clean(rep.max_abs_gram_deviation),
            })
        }
        Command::Angle => {
            let m = as_mat3(record);
            let kind = kind_of(m, spec.kind, tol)?;
            let a = rotation_angle_within(m, kind, tol)?;
            Ok(Output::Angle { alpha: clean(a.alpha), cos_alpha: clean(a.cos_alpha), kind })
        }
        Command::Embed => {
            let m = as_mat3(record);
            let kind = kind_of(m, spec.kind, tol)?;
            let e = embed_4d_within(m, kind, tol)?;
            Ok(Output::Matrix { matrix: (&e).into(), kind: Some(kind) })
        }
        Command::Verify => match record {
            Record::Matrix3(m) => verify3(m, spec.kind, tol),
            Record::Matrix4(m) => verify4(m, tol),
            _ => unreachable!("shape checked at parse time"),
        },
        Command::Random => unreachable!("random takes no input records"),
    }
}

fn verify3(m: &Mat3, forced: Option<KindArg>, tol: f64) -> Result<Output, CliError> {
    let rep = check_orthonormal(m, tol);
    let kind = kind_of(m, forced, tol)?;
    let r = extract(m, kind, tol)?;
    let rebuilt = match kind {
        IsometryKind::Rotation => euler_rodrigues(&r.params),
        IsometryKind::Rotoreflection => rotoreflection_matrix(&r.params),
    };
    let reconstruction_error = (*m - rebuilt).frobenius_norm();
    let pass = rep.max_abs_gram_deviation <= tol && r.residual <= tol && reconstruction_error <= tol;
    Ok(Output::Verify3 {
        dim: 3,
        kind,
        gram_deviation: clean(rep.max_abs_gram_deviation),
        det: clean(rep.determinant),
        quaternion: r.params.into(),
        branch: r.branch,
        residual: clean(r.residual),
        reconstruction_error: clean(reconstruction_error),
        tolerance: tol,
        pass,
    })
}

fn verify4(m: &Mat4, tol: f64) -> Result<Output, CliError> {
    let rep = check_orthonormal(m, tol);
    let associate_norm = associate_matrix(m).frobenius_norm();
    let d = decompose_4d(m, tol)?;
    let pass = rep.max_abs_gram_deviation <= tol
        && (associate_norm - 1.0).abs() <= tol
        && d.rank1_residual <= tol
        && d.reconstruction_error <= tol;
    Ok(Output::Verify4 {
        dim: 4,
        gram_deviation: clean(rep.max_abs_gram_deviation),
        det: clean(rep.determinant),
        associate_norm: clean(associate_norm),
        left: d.left.into(),
        right: d.right.into(),
        rank1_residual: clean(d.rank1_residual),
        reconstruction_error: clean(d.reconstruction_error),
        tolerance: tol,
        pass,
    })
}

fn random(spec: &JobSpec) -> Result<Output, CliError> {
    let seed = spec.seed.unwrap_or(0);
    match spec.dim.unwrap_or(3) {
        3 => {
            let (m, q) = random_rotation_3d(seed);
            Ok(Output::Random3 { matrix: (&m).into(), quaternion: q.into(), dim: 3, seed, generator: GENERATOR_NAME })
        }
        4 => {
            let (m, l, r) = random_rotation_4d(seed);
            Ok(Output::Random4 {
                matrix: (&m).into(),
                left: l.into(),
                right: r.into(),
                dim: 4,
                seed,
                generator: GENERATOR_NAME,
            })
        }
        d => Err(CliError::Invalid(format!("--dim must be 3 or 4, got {d}"))),
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum Document {
    One(Output),
    Batch(Vec<Output>),
}

impl Document {
    fn failed_verification(&self) -> bool {
        let failed = |o: &Output| matches!(o, Output::Verify3 { pass: false, .. } | Output::Verify4 { pass: false, .. });
        match self {
            Document::One(o) => failed(o),
            Document::Batch(items) => items.iter().any(failed),
        }
    }
}

fn execute(spec: &JobSpec, input: &[u8]) -> Result<Document, CliError> {
    if !(spec.tolerance > 0.0 && spec.tolerance.is_finite()) {
        return Err(CliError::Invalid(format!("--tol must be positive and finite, got {}", spec.tolerance)));
    }
    if spec.command == Command::Random {
        return Ok(Document::One(random(spec)?));
    }
    let parsed = match spec.format {
        Format::Json => input::parse_json(input, shape_for(spec.command))?,
        Format::Plain => input::parse_plain(input, shape_for(spec.command))?,
    };
    // records are independent; collect keeps input order
    let results: Vec<Result<Output, CliError>> = parsed.records.par_iter().map(|r| process(spec, r)).collect();
    let mut outputs = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    if parsed.batch {
        Ok(Document::Batch(outputs))
    } else {
        Ok(Document::One(outputs.pop().expect("one record")))
    }
}

/// Runs one job. Never panics on bad input; every failure becomes an error
/// object and a non-zero exit code.
pub fn run(spec: &JobSpec, input: &[u8]) -> RunOutput {
    match execute(spec, input) {
        Ok(doc) => {
            let mut stdout = serde_json::to_vec(&doc).expect("output serializes");
            stdout.push(b'\n');
            if doc.failed_verification() {
                let err = CliError::Verification(format!("a residual exceeds tolerance {}", spec.tolerance));
                return RunOutput { stdout, stderr: err.to_json_line().into_bytes(), exit_code: err.exit_code() };
            }
            RunOutput { stdout, stderr: vec![], exit_code: EXIT_OK }
        }
        Err(err) => RunOutput { stdout: vec![], stderr: err.to_json_line().into_bytes(), exit_code: err.exit_code() },
    }
}
