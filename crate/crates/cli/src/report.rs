//! The report every subcommand produces.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use halfflat::stable::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Reported, not gated.
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub name: String,
    pub status: Status,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    /// SHA-256 over the arguments and the contents of every input file.
    pub inputs_digest: String,
    pub checks: Vec<Entry>,
    pub artifacts: Vec<String>,
    pub result: Value,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            inputs_digest: String::new(),
            checks: Vec::new(),
            artifacts: Vec::new(),
            result: Value::Null,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, residual: f64) {
        self.checks.push(Entry {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            residual: Some(residual),
        });
    }

    pub fn info(&mut self, name: impl Into<String>, residual: Option<f64>) {
        self.checks.push(Entry {
            name: name.into(),
            status: Status::Info,
            residual,
        });
    }

    pub fn absorb(&mut self, prefix: &str, v: &ValidationReport) {
        for c in &v.checks {
            self.check(format!("{prefix}{}", c.name), c.passed, c.residual);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn seal(&mut self, inputs: &[Vec<u8>]) {
        let mut h = Sha256::new();
        for a in &self.command {
            h.update(a.as_bytes());
            h.update([0]);
        }
        for i in inputs {
            h.update((i.len() as u64).to_le_bytes());
            h.update(i);
        }
        self.inputs_digest = h.finalize().iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "halfflat {}", self.command.join(" "));
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            match c.residual {
                Some(r) => {
                    let _ = writeln!(out, "  {tag}  {:<58} {}", c.name, sig17(r));
                }
                None => {
                    let _ = writeln!(out, "  {tag}  {}", c.name);
                }
            }
        }
        for a in &self.artifacts {
            let _ = writeln!(out, "  wrote {a}");
        }
        if !self.result.is_null() {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&self.result).unwrap_or_default());
        }
        let _ = write!(out, "{}", if self.passed() { "all checks passed" } else { "some checks FAILED" });
        out
    }
}

/// 17 significant digits.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_depends_on_inputs() {
        let mut a = Report::new(vec!["x".into()]);
        a.seal(&[b"1".to_vec()]);
        let mut b = Report::new(vec!["x".into()]);
        b.seal(&[b"2".to_vec()]);
        assert_ne!(a.inputs_digest, b.inputs_digest);
        assert_eq!(a.inputs_digest.len(), 64);
    }

    #[test]
    fn info_does_not_fail() {
        let mut r = Report::new(vec![]);
        r.info("note", None);
        r.check("ok", true, 0.0);
        assert!(r.passed());
        r.check("bad", false, 1.0);
        assert!(!r.passed());
        assert_eq!(sig17(0.1), "1.0000000000000001e-1");
    }
}
