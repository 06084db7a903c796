use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }
}

/// Outcome of one command; rendered as text lines or as a JSON object.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub findings: Vec<String>,
    /// Wall-clock milliseconds per phase.
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            status: Status::Ok,
            findings: Vec::new(),
            timings: BTreeMap::new(),
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.findings.push(line.into());
    }

    pub fn violation(&mut self, line: impl Into<String>) {
        self.status = Status::Violation;
        self.findings.push(line.into());
    }

    pub fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.timings.entry(phase.to_string()).or_default() += start.elapsed().as_secs_f64() * 1e3;
        out
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            return serde_json::to_string_pretty(self).expect("reports always serialize") + "\n";
        }
        let mut out = String::new();
        for line in &self.findings {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}
