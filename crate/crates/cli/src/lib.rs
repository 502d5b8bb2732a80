//! Scripted front end for `fcrystal-core`: one verb per library operation,
//! JSON documents in, canonical JSON reports out.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use fcrystal_core::{Error, ErrorKind};
use rayon::prelude::*;
use serde_json::{json, Value};

mod verbs;

pub use verbs::execute;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Verb {
    WittEval,
    CrystalVerify,
    CrystalSlopes,
    CrystalDual,
    CrystalTwist,
    CrystalTensor,
    /// Emit a single Dieudonné block as a module document.
    CrystalBlock,
    MotiveAssemble,
    MotiveVerify,
    MotiveDual,
    MotivePair,
    MotiveHeight,
    SimplicialCochar,
    SimplicialDiv0,
    PicardSkeleton,
    H1Ledger,
}

impl Verb {
    /// Verbs that combine all inputs into one report rather than one report
    /// per input.
    fn folds_inputs(self) -> bool {
        matches!(self, Verb::CrystalTensor)
    }

    /// Where the ring of a document lives, if anywhere.
    fn ring_slots(self, doc: &Value) -> Vec<&'static str> {
        match self {
            Verb::SimplicialCochar | Verb::SimplicialDiv0 => vec![],
            Verb::PicardSkeleton if doc.get("ring").is_none() => vec![],
            Verb::MotiveVerify if doc.get("spec").is_some() => vec!["spec", "module"],
            _ => vec![""],
        }
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.to_possible_value().expect("no skipped variants");
        f.write_str(name.get_name())
    }
}

#[derive(Clone, Debug, Parser)]
#[command(name = "fcrystal", version, about = "Exact filtered F-crystals and 1-motive realizations")]
pub struct Command {
    pub verb: Verb,
    /// Input document; repeat for batch runs.
    #[arg(long = "in", value_name = "FILE", required = true)]
    pub inputs: Vec<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long = "out", value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Ring document replacing the ring of every input.
    #[arg(long, value_name = "FILE")]
    pub ring: Option<PathBuf>,
    /// Override the Witt length n.
    #[arg(long, value_name = "N")]
    pub precision: Option<u32>,
    /// Torsion level for motive-height.
    #[arg(long, value_name = "N", default_value_t = 1)]
    pub torsion: u32,
    /// Worker threads for batch runs over several inputs.
    #[arg(long, value_name = "K")]
    pub jobs: Option<usize>,
}

/// Everything a verb needs besides its documents.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub torsion: u32,
}

/// A report plus whether the data passed the verb's checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub value: Value,
    pub passed: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, passed: true }
    }
}

/// Failure of a whole invocation, with its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub status: i32,
    pub code: String,
    pub message: String,
}

impl Failure {
    fn new(status: i32, code: impl Into<String>, message: impl Into<String>) -> Self {
        Failure {
            status,
            code: code.into(),
            message: message.into(),
        }
    }

    fn malformed(message: impl Into<String>) -> Self {
        Failure::new(2, "malformed", message)
    }

    pub fn to_value(&self) -> Value {
        json!({ "error": { "code": self.code, "message": self.message } })
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.kind() {
            ErrorKind::Verification => 1,
            ErrorKind::Malformed => 2,
            ErrorKind::Precision => 3,
        };
        Failure::new(status, e.code(), e.to_string())
    }
}

/// Result of [`run`]: exit status, the report (if any) and the error
/// document for standard error (if any).
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub report: Option<String>,
    pub error: Option<String>,
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(2, "io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))
}

fn apply_overrides(verb: Verb, doc: &mut Value, ring: Option<&Value>, precision: Option<u32>) -> Result<(), Failure> {
    for slot in verb.ring_slots(doc) {
        let target = if slot.is_empty() {
            &mut *doc
        } else {
            match doc.get_mut(slot) {
                Some(t) => t,
                None => continue,
            }
        };
        let Some(obj) = target.as_object_mut() else {
            return Err(Failure::malformed(format!("{verb} input must be an object")));
        };
        if let Some(r) = ring {
            obj.insert("ring".into(), r.clone());
        }
        if let Some(n) = precision {
            match obj.get_mut("ring").and_then(Value::as_object_mut) {
                Some(r) => {
                    r.insert("n".into(), json!(n));
                }
                None => return Err(Failure::malformed("--precision needs a ring in the input")),
            }
        }
    }
    Ok(())
}

fn load(c: &Command) -> Result<Vec<Value>, Failure> {
    let ring = c.ring.as_ref().map(read_json).transpose()?;
    c.inputs
        .iter()
        .map(|p| {
            let mut doc = read_json(p)?;
            apply_overrides(c.verb, &mut doc, ring.as_ref(), c.precision)?;
            Ok(doc)
        })
        .collect()
}

fn finish(reports: Vec<Result<Report, Failure>>, batch: bool) -> Outcome {
    let worst = reports
        .iter()
        .filter_map(|r| r.as_ref().err())
        .max_by_key(|f| f.status)
        .cloned();
    let failed_checks = reports.iter().filter(|r| matches!(r, Ok(rep) if !rep.passed)).count();
    if let (false, Some(f)) = (batch, &worst) {
        return Outcome {
            status: f.status,
            report: None,
            error: Some(render(&f.to_value())),
        };
    }
    let values: Vec<Value> = reports
        .into_iter()
        .map(|r| match r {
            Ok(rep) => rep.value,
            Err(f) => f.to_value(),
        })
        .collect();
    let report = if batch {
        Value::Array(values)
    } else {
        values.into_iter().next().unwrap_or(Value::Null)
    };
    let (status, error) = match worst {
        Some(f) => (f.status, Some(f)),
        None if failed_checks > 0 => (
            1,
            Some(Failure::new(1, "verification-failed", format!("{failed_checks} input(s) failed verification"))),
        ),
        None => (0, None),
    };
    Outcome {
        status,
        report: Some(render(&report)),
        error: error.map(|f| render(&f.to_value())),
    }
}

/// Run one invocation. Nothing is printed; see [`Outcome`].
pub fn run(c: &Command) -> Outcome {
    let docs = match load(c) {
        Ok(d) => d,
        Err(f) => return finish(vec![Err(f)], false),
    };
    let opts = Options { torsion: c.torsion };
    let mut outcome = if c.verb.folds_inputs() || docs.len() == 1 {
        finish(vec![execute(c.verb, &docs, &opts)], false)
    } else {
        let one = |d: &Value| execute(c.verb, std::slice::from_ref(d), &opts);
        let reports = match c.jobs {
            Some(k) if k > 1 => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
                Ok(pool) => pool.install(|| docs.par_iter().map(one).collect()),
                Err(e) => vec![Err(Failure::new(2, "jobs", e.to_string()))],
            },
            _ => docs.iter().map(one).collect(),
        };
        finish(reports, true)
    };
    if let (Some(path), Some(report)) = (&c.output, &outcome.report) {
        if let Err(e) = fs::write(path, report) {
            let f = Failure::new(2, "io", format!("{}: {e}", path.display()));
            outcome = Outcome {
                status: 2,
                report: None,
                error: Some(render(&f.to_value())),
            };
        } else {
            outcome.report = None;
        }
    }
    outcome
}
