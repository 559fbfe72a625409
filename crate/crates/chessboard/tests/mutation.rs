//! Builds the binary with j replaced by j² and checks that verification notices.

mod common;

use std::process::Command;

use serde_json::Value;

#[test]
fn flipped_j_build_fails_verification() {
    let root = common::workspace_root();
    let target = root.join("target").join("mutant");
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let build = Command::new(cargo)
        .current_dir(&root)
        .args(["build", "--offline", "-p", "chessboard", "--bin", "chessboard", "--features", "mutant-flip-j"])
        .env("CARGO_TARGET_DIR", &target)
        .output()
        .unwrap();
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));

    let out = Command::new(target.join("debug").join("chessboard")).args(["verify", "--suite", "all"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
    let failed: Vec<&str> =
        report["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    assert!(failed.contains(&"j_is_principal_root"), "{failed:?}");
}
