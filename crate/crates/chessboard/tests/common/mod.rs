#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chessboard::ExactScalar;
use serde_json::Value;

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

pub fn oracle() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/oracle.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// `[re, im]` from the fixture.
pub fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

pub fn close_to(x: &ExactScalar, v: &Value) -> bool {
    let z = x.to_complex();
    let (re, im) = complex(v);
    (z.re - re).abs() < 1e-12 && (z.im - im).abs() < 1e-12
}

pub fn chessboard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chessboard")).args(args).output().unwrap()
}
