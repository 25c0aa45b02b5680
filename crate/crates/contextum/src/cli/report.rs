//! Machine-readable run reports.
//!
//! Every command produces one report: what ran, content digests of the
//! inputs, the verdict with canonically ordered witnesses (listing capped,
//! full count always present), any certificate or section, and the wall
//! time. The JSON form is self-contained; the text rendering is a digest of
//! the same data.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::operational::{Verdict, Witness};

/// Most witnesses/listings a report embeds; the counts stay exact.
pub const LISTING_CAP: usize = 100;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    /// One of: holds, violation, section-found, infeasible, error, capacity,
    /// ok.
    pub outcome: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub counts: BTreeMap<String, u64>,
    pub witness_total: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub section: Option<crate::sheaf::GlobalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<crate::sheaf::FarkasCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_go: Option<crate::kosp::NoGoReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub listing: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub written: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub wall_time_ms: u128,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            inputs: Vec::new(),
            outcome: "ok".to_string(),
            exit_code: 0,
            flags: Vec::new(),
            counts: BTreeMap::new(),
            witness_total: 0,
            witnesses: Vec::new(),
            section: None,
            certificate: None,
            certificate_verified: None,
            no_go: None,
            listing: Vec::new(),
            written: Vec::new(),
            message: None,
            wall_time_ms: 0,
        }
    }

    pub fn add_input(&mut self, path: &Path) {
        let sha256 = match std::fs::read(path) {
            Ok(bytes) => hex::encode(Sha256::digest(&bytes)),
            Err(_) => "unreadable".to_string(),
        };
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256,
        });
    }

    /// Records a verdict: outcome, flags, capped witnesses, exact total.
    pub fn set_verdict(&mut self, verdict: &Verdict) {
        self.outcome = if verdict.holds { "holds" } else { "violation" }.to_string();
        self.exit_code = if verdict.holds { 0 } else { 1 };
        self.flags = verdict.flags.iter().map(|f| f.to_string()).collect();
        self.witness_total = verdict.witnesses.len();
        self.witnesses = verdict.witnesses.iter().take(LISTING_CAP).cloned().collect();
    }

    pub fn fail(&mut self, exit_code: i32, outcome: &str, message: impl Into<String>) {
        self.exit_code = exit_code;
        self.outcome = outcome.to_string();
        self.message = Some(message.into());
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "contextum {}: {}", self.command, self.outcome);
        if !self.flags.is_empty() {
            let _ = writeln!(out, "  flags: {}", self.flags.join(", "));
        }
        for (key, value) in &self.counts {
            let _ = writeln!(out, "  {key}: {value}");
        }
        if self.witness_total > 0 {
            let _ = writeln!(out, "  witnesses: {}", self.witness_total);
            for witness in self.witnesses.iter().take(10) {
                let _ = writeln!(out, "    - {witness}");
            }
            if self.witness_total > 10 {
                let _ = writeln!(out, "    ... ({} total)", self.witness_total);
            }
        }
        if let Some(section) = &self.section {
            let _ = writeln!(out, "  global section with {} atoms:", section.weights.len());
            for (assignment, weight) in section.weights.iter().take(10) {
                let _ = writeln!(out, "    {} -> {}", assignment.join(","), weight);
            }
        }
        if let Some(verified) = self.certificate_verified {
            let _ = writeln!(
                out,
                "  infeasibility certificate re-verified: {}",
                if verified { "yes" } else { "NO" }
            );
        }
        if let Some(no_go) = &self.no_go {
            let _ = writeln!(
                out,
                "  assignments: {} of {} candidates",
                no_go.assignment_count, no_go.candidate_count
            );
            let _ = writeln!(
                out,
                "  rules out deterministic simultaneous-noncontextual models: {}",
                no_go.rules_out_simultaneous_nc
            );
            let _ = writeln!(
                out,
                "  rules out deterministic measurement-noncontextual models: {}",
                no_go.rules_out_measurement_nc
            );
        }
        for path in &self.written {
            let _ = writeln!(out, "  wrote {path}");
        }
        if let Some(message) = &self.message {
            for line in message.lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        let _ = writeln!(out, "  exit code {} in {} ms", self.exit_code, self.wall_time_ms);
        out
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("serializable report");
        text.push('\n');
        std::fs::write(path, text)
    }
}
