//! Command outcomes and their text and JSON renderings.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// What a command produced, before rendering.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Value,
    pub text: Vec<String>,
    pub warnings: Vec<String>,
    /// A verification inside the command failed.
    pub failed: bool,
}

impl Outcome {
    pub fn new(results: Value) -> Self {
        Outcome {
            results,
            ..Default::default()
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn warn(&mut self, s: impl Into<String>) {
        self.warnings.push(s.into());
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub status: &'static str,
    pub warnings: Vec<String>,
    pub results: Value,
}

impl Report {
    pub fn new(command: &str, digest: String, out: &Outcome) -> Self {
        Report {
            command: command.to_string(),
            inputs_digest: digest,
            status: if out.failed { "failed" } else { "ok" },
            warnings: out.warnings.clone(),
            results: out.results.clone(),
        }
    }
}

/// SHA-256 over the command arguments and the bytes of every input file,
/// each prefixed with its length.
pub fn digest(args: &[String], files: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for a in args {
        h.update((a.len() as u64).to_le_bytes());
        h.update(a.as_bytes());
    }
    for f in files {
        h.update((f.len() as u64).to_le_bytes());
        h.update(f);
    }
    hex::encode(h.finalize())
}

/// Print the report. Write errors (a closed pipe) are ignored.
pub fn emit(report: &Report, out: &Outcome, json: bool) {
    let mut stdout = std::io::stdout().lock();
    if json {
        let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(report).expect("report serializes"));
        return;
    }
    for line in &out.text {
        if writeln!(stdout, "{line}").is_err() {
            return;
        }
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let _ = writeln!(stdout, "status: {}", report.status);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_depends_on_everything() {
        let a = digest(&["cols".into()], &[b"{}".to_vec()]);
        assert_eq!(a, digest(&["cols".into()], &[b"{}".to_vec()]));
        assert_ne!(a, digest(&["products".into()], &[b"{}".to_vec()]));
        assert_ne!(a, digest(&["cols".into()], &[b"{ }".to_vec()]));
        assert_eq!(a.len(), 64);
    }
}
