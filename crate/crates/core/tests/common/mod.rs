#![allow(dead_code)]

//! Golden-file harness for the `quatrot` binary, shared by the CLI tests
//! and the acceptance suite.
//!
//! Each case runs the binary with the given arguments and input file and
//! compares stdout, stderr and the exit code byte for byte against
//! `tests/golden/expected/<case>.{out,err,code}`. Run with `UPDATE_GOLDEN=1`
//! to rewrite the expected files.

use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    /// Relative to `tests/golden`; `None` runs without stdin.
    pub input: Option<&'static str>,
}

pub const CASES: &[Case] = &[
    Case { name: "quat2mat_identity", args: &["quat2mat"], input: Some("inputs/quat_identity.json") },
    Case { name: "quat2mat_k_rotoreflection", args: &["quat2mat", "--kind", "rotoreflection"], input: Some("inputs/quat_k.json") },
    Case { name: "mat2quat_identity", args: &["mat2quat"], input: Some("inputs/identity3.json") },
    Case { name: "mat2quat_identity_plain", args: &["mat2quat", "--format", "plain"], input: Some("inputs/identity3.txt") },
    Case { name: "mat2quat_half_turn_z", args: &["mat2quat"], input: Some("inputs/half_turn_z.json") },
    Case { name: "mat2quat_mirror_xy", args: &["mat2quat"], input: Some("inputs/mirror_xy.json") },
    Case { name: "mat2quat_stretch", args: &["mat2quat"], input: Some("inputs/stretch3.json") },
    Case { name: "mat2quat_forced_rotoreflection", args: &["mat2quat", "--kind", "rotoreflection"], input: Some("inputs/identity3.json") },
    Case { name: "mat2quat_truncated", args: &["mat2quat"], input: Some("inputs/truncated.json") },
    Case { name: "decompose4_quarter_turn", args: &["decompose4"], input: Some("inputs/quarter_turn_z4.json") },
    Case { name: "decompose4_reflection", args: &["decompose4"], input: Some("inputs/reflection4.json") },
    Case { name: "decompose4_wrong_shape", args: &["decompose4"], input: Some("inputs/identity3.json") },
    Case { name: "compose4_i_identity", args: &["compose4"], input: Some("inputs/pair_i_identity.json") },
    Case { name: "compose4_i_identity_plain", args: &["compose4", "--format", "plain"], input: Some("inputs/pair_i_identity.txt") },
    Case { name: "classify_mirror_xy", args: &["classify"], input: Some("inputs/mirror_xy.json") },
    Case { name: "classify_stretch", args: &["classify"], input: Some("inputs/stretch3.json") },
    Case { name: "classify_batch", args: &["classify"], input: Some("inputs/batch3.json") },
    Case { name: "angle_quarter_turn", args: &["angle"], input: Some("inputs/quarter_turn_z.json") },
    Case { name: "angle_point_reflection", args: &["angle"], input: Some("inputs/point_reflection.json") },
    Case { name: "angle_kind_mismatch", args: &["angle", "--kind", "rotoreflection"], input: Some("inputs/identity3.json") },
    Case { name: "embed_mirror_xy", args: &["embed"], input: Some("inputs/mirror_xy.json") },
    Case { name: "embed_identity", args: &["embed", "--kind", "rotation"], input: Some("inputs/identity3.json") },
    Case { name: "random_seed42_dim3", args: &["random", "--seed", "42", "--dim", "3"], input: None },
    Case { name: "random_seed42_dim4", args: &["random", "--seed", "42", "--dim", "4"], input: None },
    Case { name: "verify_random3", args: &["verify"], input: Some("expected/random_seed42_dim3.out") },
    Case { name: "verify_random4", args: &["verify"], input: Some("expected/random_seed42_dim4.out") },
    Case { name: "verify_stretch4", args: &["verify"], input: Some("inputs/stretch4.json") },
    Case { name: "bad_tolerance", args: &["classify", "--tol=0"], input: Some("inputs/identity3.json") },
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Run {
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
    pub code: i32,
}

pub fn run_binary(args: &[&str], input: Option<&Path>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quatrot"));
    cmd.args(args);
    match input {
        Some(path) => cmd.stdin(std::fs::File::open(path).expect("golden input exists")),
        None => cmd.stdin(Stdio::null()),
    };
    let out = cmd.output().expect("binary runs");
    Run { stdout: out.stdout, stderr: out.stderr, code: out.status.code().expect("exited normally") }
}

/// Runs one case; returns a description of the first mismatch.
pub fn check_case(case: &Case) -> Result<(), String> {
    let dir = golden_dir();
    let run = run_binary(case.args, case.input.map(|p| dir.join(p)).as_deref());
    let expected = dir.join("expected");
    let files = [
        (format!("{}.out", case.name), run.stdout.clone()),
        (format!("{}.err", case.name), run.stderr.clone()),
        (format!("{}.code", case.name), format!("{}\n", run.code).into_bytes()),
    ];
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        for (file, bytes) in &files {
            std::fs::write(expected.join(file), bytes).unwrap();
        }
        return Ok(());
    }
    for (file, actual) in &files {
        let want = std::fs::read(expected.join(file)).map_err(|e| format!("{file}: {e}"))?;
        if &want != actual {
            return Err(format!(
                "{file}: expected {:?}, got {:?}",
                String::from_utf8_lossy(&want),
                String::from_utf8_lossy(actual)
            ));
        }
    }
    Ok(())
}
