//! Compilation-driven, cascading repair: bracket repair, rule-based regex
//! repairs, then backend refinement, accepting only candidates that
//! strictly reduce the compiler error count.

mod diags;

pub use diags::{parse_diagnostics, DiagEntry, DiagLevel, DiagSpan, Diagnostics};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepairError {
    #[error("malformed diagnostic at line {line}: {text}")]
    MalformedDiagnostic { line: usize, text: String },
    #[error("completion backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("repair failed; {remaining} errors remain")]
    RepairFailed {
        remaining: usize,
        diagnostics: Diagnostics,
    },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed repair rule file: {0}")]
    MalformedRuleFile(String),
}

/// Which stage of the chain produced a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepairStage {
    Bracket,
    Rule,
    Refine,
}

/// One repair attempt: candidate hash, error counts before/after, verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepairStep {
    pub stage: RepairStage,
    pub round: usize,
    pub candidate_sha256: String,
    pub errors_before: usize,
    pub errors_after: usize,
    pub accepted: bool,
    /// Names of rules applied (rule stage only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rules_applied: Vec<String>,
}

/// The per-unit history of repair candidates with error-count deltas.
/// Within every trace, accepted steps have strictly decreasing error
/// counts.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RepairTrace {
    pub stages: Vec<RepairStep>,
}

impl RepairTrace {
    pub fn record(&mut self, step: RepairStep) {
        debug_assert!(!step.accepted || step.errors_after < step.errors_before);
        self.stages.push(step);
    }

    /// Error counts over accepted steps, in order.
    pub fn accepted_counts(&self) -> Vec<usize> {
        self.stages
            .iter()
            .filter(|s| s.accepted)
            .map(|s| s.errors_after)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

pub(crate) fn sha256_hex(text: &str) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(text.as_bytes()))
}
