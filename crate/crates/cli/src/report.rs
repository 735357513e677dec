//! JSON report assembly.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use semijulia_core::{Complex64, SpherePoint};

use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize)]
pub struct Reproducibility {
    pub package: &'static str,
    pub version: &'static str,
    pub seed: Option<u64>,
}

#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub phases: Vec<Phase>,
}

#[derive(Debug, Serialize)]
pub struct Phase {
    pub name: String,
    pub seconds: f64,
}

/// Timings sit last so that reports of identical runs differ only in that
/// block.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub argv: Vec<String>,
    pub config: Value,
    pub results: Value,
    pub reproducibility: Reproducibility,
    pub timings: Timings,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }

    pub fn emit(&self, out: Option<&Path>) -> CliResult<()> {
        let text = self.to_json();
        match out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

/// Wall-clock phases of one command.
#[derive(Debug)]
pub struct Stopwatch {
    start: Instant,
    last: Instant,
    phases: Vec<Phase>,
}

impl Stopwatch {
    pub fn start() -> Self {
        let now = Instant::now();
        Stopwatch {
            start: now,
            last: now,
            phases: Vec::new(),
        }
    }

    pub fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.phases.push(Phase {
            name: name.to_string(),
            seconds: (now - self.last).as_secs_f64(),
        });
        self.last = now;
    }

    pub fn finish(self) -> Timings {
        Timings {
            total_seconds: self.start.elapsed().as_secs_f64(),
            phases: self.phases,
        }
    }
}

/// Finite numbers as JSON numbers, the rest as strings.
pub fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn complex(z: Complex64) -> Value {
    json!([real(z.re), real(z.im)])
}

/// `[re, im]`, or `"inf"` for the point at infinity.
pub fn point(p: SpherePoint) -> Value {
    match p {
        SpherePoint::Finite(z) => complex(z),
        SpherePoint::Infinity => json!("inf"),
    }
}
