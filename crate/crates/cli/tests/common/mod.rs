//! Fixture corpus shared by the golden and acceptance tests.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub struct Case {
    pub name: String,
    pub verb: String,
    pub inputs: Vec<String>,
    pub args: Vec<String>,
}

pub fn cases() -> Vec<Case> {
    let text = fs::read_to_string(fixtures().join("cases.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let strings = |v: &Value| -> Vec<String> {
        v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
    };
    v.as_array()
        .unwrap()
        .iter()
        .map(|c| Case {
            name: c["name"].as_str().unwrap().to_string(),
            verb: c["verb"].as_str().unwrap().to_string(),
            inputs: strings(&c["inputs"]),
            args: strings(&c["args"]),
        })
        .collect()
}

/// Status line, then standard output, then standard error.
pub fn transcript(case: &Case) -> String {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fcrystal"));
    cmd.current_dir(fixtures()).arg(&case.verb);
    for i in &case.inputs {
        cmd.arg("--in").arg(i);
    }
    cmd.args(&case.args);
    let out = cmd.output().expect("binary runs");
    format!(
        "status: {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

pub fn golden_path(case: &Case) -> PathBuf {
    fixtures().join("golden").join(format!("{}.txt", case.name))
}
