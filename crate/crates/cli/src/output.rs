use std::process::ExitCode;

use incidence_core::io::to_json;
use incidence_core::Error;
use serde_json::{json, Value};

/// Result of a subcommand: a verdict plus both renderings of it.
#[derive(Debug)]
pub struct Report {
    pub holds: bool,
    pub lines: Vec<String>,
    pub json: Value,
}

impl Report {
    pub fn new(holds: bool, lines: Vec<String>, json: Value) -> Self {
        Report { holds, lines, json }
    }

    pub fn success(lines: Vec<String>, json: Value) -> Self {
        Report::new(true, lines, json)
    }
}

pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Budget(_) => EXIT_BUDGET,
        e if e.is_violation() => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

fn kind(err: &Error) -> &'static str {
    match err {
        Error::UnknownAtom(_) => "unknown_atom",
        Error::Input(_) => "input",
        Error::NotBalanced(_) => "not_balanced",
        Error::RingMismatch(_) => "ring_mismatch",
        Error::NotAHomomorphism(_) => "not_a_homomorphism",
        Error::ClosureViolation(_) => "closure_violation",
        Error::NotACompression { .. } => "not_a_compression",
        Error::Budget(_) => "budget_exceeded",
        Error::Refused(_) => "refused",
        Error::NotFound(_) => "not_found",
        Error::Json(_) => "json",
    }
}

pub fn emit(json: bool, outcome: Result<Report, Error>) -> ExitCode {
    match outcome {
        Ok(report) => {
            if json {
                println!("{}", to_json(&json!({ "holds": report.holds, "result": report.json })));
            } else {
                for line in &report.lines {
                    println!("{line}");
                }
            }
            ExitCode::from(if report.holds { 0 } else { EXIT_VIOLATION })
        }
        Err(err) => {
            let code = exit_code(&err);
            if json {
                let mut body = json!({ "kind": kind(&err), "message": err.to_string() });
                if let Error::NotACompression { condition, .. } = err {
                    body["condition"] = json!(condition);
                }
                println!("{}", to_json(&json!({ "error": body, "exit_code": code })));
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(code)
        }
    }
}
