//! Parsing of the compiler's machine-readable (JSON) diagnostic stream.

use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use super::RepairError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagLevel {
    Error,
    Warning,
    Note,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagSpan {
    pub file: PathBuf,
    pub line_start: usize,
    pub col_start: usize,
    pub line_end: usize,
    pub col_end: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagEntry {
    pub level: DiagLevel,
    pub code: Option<String>,
    pub message: String,
    pub span: Option<DiagSpan>,
    /// True for child diagnostics (notes/helps attached to a parent).
    pub is_child: bool,
}

/// Parsed compiler output. `error_count()` counts error entries; summary
/// lines ("aborting due to ...") are dropped during parsing so the count
/// reflects real diagnostics.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    pub entries: Vec<DiagEntry>,
}

impl Diagnostics {
    pub fn error_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.level == DiagLevel::Error && !e.is_child)
            .count()
    }

    pub fn errors(&self) -> impl Iterator<Item = &DiagEntry> {
        self.entries
            .iter()
            .filter(|e| e.level == DiagLevel::Error && !e.is_child)
    }

    /// Human-readable rendering for prompts and traces.
    pub fn rendered(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            if e.is_child {
                continue;
            }
            let level = match e.level {
                DiagLevel::Error => "error",
                DiagLevel::Warning => "warning",
                DiagLevel::Note => "note",
            };
            match (&e.code, &e.span) {
                (Some(code), Some(s)) => {
                    out.push_str(&format!(
                        "{level}[{code}]: {} at {}:{}:{}\n",
                        e.message,
                        s.file.display(),
                        s.line_start,
                        s.col_start
                    ));
                }
                (None, Some(s)) => {
                    out.push_str(&format!(
                        "{level}: {} at {}:{}:{}\n",
                        e.message,
                        s.file.display(),
                        s.line_start,
                        s.col_start
                    ));
                }
                (Some(code), None) => out.push_str(&format!("{level}[{code}]: {}\n", e.message)),
                (None, None) => out.push_str(&format!("{level}: {}\n", e.message)),
            }
        }
        out
    }
}

#[derive(Deserialize)]
struct RawDiag {
    message: String,
    code: Option<RawCode>,
    level: String,
    #[serde(default)]
    spans: Vec<RawSpan>,
    #[serde(default)]
    children: Vec<RawDiag>,
}

#[derive(Deserialize)]
struct RawCode {
    code: String,
}

#[derive(Deserialize)]
struct RawSpan {
    file_name: String,
    line_start: usize,
    column_start: usize,
    line_end: usize,
    column_end: usize,
    #[serde(default)]
    is_primary: bool,
}

fn level_of(s: &str) -> DiagLevel {
    if s.starts_with("error") {
        DiagLevel::Error
    } else if s == "warning" {
        DiagLevel::Warning
    } else {
        DiagLevel::Note
    }
}

fn is_summary(message: &str) -> bool {
    message.starts_with("aborting due to")
        || message.ends_with("warning emitted")
        || message.ends_with("warnings emitted")
}

/// Parse one toolchain run's JSON diagnostic stream (one JSON object per
/// line). Unknown fields are ignored; a non-JSON line is a
/// `MalformedDiagnostic` carrying its 1-based line number.
pub fn parse_diagnostics(raw: &str) -> Result<Diagnostics, RepairError> {
    let mut entries = Vec::new();
    for (i, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let diag: RawDiag = serde_json::from_str(line).map_err(|_| {
            RepairError::MalformedDiagnostic {
                line: i + 1,
                text: line.chars().take(120).collect(),
            }
        })?;
        push_diag(&diag, false, &mut entries);
    }
    Ok(Diagnostics { entries })
}

fn push_diag(diag: &RawDiag, is_child: bool, entries: &mut Vec<DiagEntry>) {
    if is_summary(&diag.message) {
        return;
    }
    let span = diag
        .spans
        .iter()
        .find(|s| s.is_primary)
        .or_else(|| diag.spans.first())
        .map(|s| DiagSpan {
            file: PathBuf::from(&s.file_name),
            line_start: s.line_start,
            col_start: s.column_start,
            line_end: s.line_end,
            col_end: s.column_end,
        });
    entries.push(DiagEntry {
        level: level_of(&diag.level),
        code: diag.code.as_ref().map(|c| c.code.clone()),
        message: diag.message.clone(),
        span,
        is_child,
    });
    for child in &diag.children {
        push_diag(child, true, entries);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_line(level: &str, msg: &str, code: Option<&str>) -> String {
        let code = match code {
            Some(c) => format!("{{\"code\":\"{c}\",\"explanation\":null}}"),
            None => "null".to_string(),
        };
        format!(
            "{{\"message\":\"{msg}\",\"code\":{code},\"level\":\"{level}\",\"spans\":[],\"children\":[],\"rendered\":null}}"
        )
    }

    #[test]
    fn counts_errors_not_warnings() {
        let raw = [
            diag_line("error", "first", Some("E0308")),
            diag_line("warning", "w1", None),
            diag_line("error", "second", None),
            diag_line("warning", "w2", None),
            diag_line("error", "third", Some("E0502")),
            diag_line("error", "aborting due to 3 previous errors", None),
        ]
        .join("\n");
        let d = parse_diagnostics(&raw).unwrap();
        assert_eq!(d.error_count(), 3);
        assert_eq!(
            d.entries.len(),
            5,
            "summary line must not become an entry"
        );
    }

    #[test]
    fn empty_stream_has_zero_errors() {
        let d = parse_diagnostics("").unwrap();
        assert_eq!(d.error_count(), 0);
    }

    #[test]
    fn malformed_line_is_reported_with_its_number() {
        let raw = format!("{}\nnot json at all\n", diag_line("error", "x", None));
        match parse_diagnostics(&raw) {
            Err(RepairError::MalformedDiagnostic { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected MalformedDiagnostic, got {other:?}"),
        }
    }
}
