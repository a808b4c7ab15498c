//! Regex repair rules, shipped as data so deployments can extend them.
//!
//! Each rule is `{name, diagnostic_gate, pattern, replacement}`. The gate is
//! a regex matched against a diagnostic's code or message; its named
//! captures (`g1`, `g2`, ...) substitute into `{g1}`-style holes in the
//! pattern and replacement before compilation, which pins rewrites to the
//! identifiers the compiler actually complained about. Rules with a
//! spanned diagnostic apply within the spanned lines only; spanless
//! diagnostics apply rule patterns across the whole candidate. Per
//! diagnostic, the first rule whose pattern rewrites anything wins.

use super::{DiagEntry, Diagnostics, RepairError};
use fancy_regex::Regex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepairRule {
    pub name: String,
    pub diagnostic_gate: String,
    pub pattern: String,
    pub replacement: String,
}

#[derive(Debug, Clone)]
pub struct RuleSet {
    pub rules: Vec<RepairRule>,
}

const DEFAULT_RULES: &str = include_str!("../../data/repair_rules.json");

pub fn default_rule_set() -> RuleSet {
    RuleSet::from_json(DEFAULT_RULES).expect("shipped rule file parses")
}

impl RuleSet {
    pub fn from_json(text: &str) -> Result<RuleSet, RepairError> {
        let rules: Vec<RepairRule> = serde_json::from_str(text)
            .map_err(|e| RepairError::MalformedRuleFile(e.to_string()))?;
        Ok(RuleSet { rules })
    }

    pub fn load(path: &std::path::Path) -> Result<RuleSet, RepairError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn substitute_holes(template: &str, captures: &[(String, String)]) -> String {
    let mut out = template.to_string();
    for (name, value) in captures {
        out = out.replace(&format!("{{{name}}}"), &fancy_regex::escape(value));
    }
    out
}

fn substitute_holes_plain(template: &str, captures: &[(String, String)]) -> String {
    let mut out = template.to_string();
    for (name, value) in captures {
        out = out.replace(&format!("{{{name}}}"), value);
    }
    out
}

fn gate_captures(rule: &RepairRule, diag: &DiagEntry) -> Option<Vec<(String, String)>> {
    let gate = Regex::new(&rule.diagnostic_gate).ok()?;
    let hay = match &diag.code {
        Some(code) => format!("{code} {}", diag.message),
        None => diag.message.clone(),
    };
    let caps = gate.captures(&hay).ok()??;
    let mut out = Vec::new();
    for name in gate.capture_names().flatten() {
        if let Some(m) = caps.name(name) {
            out.push((name.to_string(), m.as_str().to_string()));
        }
    }
    Some(out)
}

/// Apply the rule set once over `code` given the diagnostics. Returns the
/// rewritten code and the names of the rules that fired. Deterministic;
/// rules that do not match are no-ops.
pub fn apply_rule_repairs_with(
    code: &str,
    diags: &Diagnostics,
    rules: &RuleSet,
) -> (String, Vec<String>) {
    let mut current = code.to_string();
    let mut applied = Vec::new();
    for diag in &diags.entries {
        for rule in &rules.rules {
            let Some(caps) = gate_captures(rule, diag) else {
                continue;
            };
            let pattern = substitute_holes(&rule.pattern, &caps);
            let replacement = substitute_holes_plain(&rule.replacement, &caps);
            let Ok(re) = Regex::new(&pattern) else {
                continue;
            };
            let next = match &diag.span {
                Some(span) => replace_in_lines(
                    &current,
                    span.line_start,
                    span.line_end,
                    &re,
                    &replacement,
                ),
                None => re.replace_all(&current, replacement.as_str()).into_owned(),
            };
            if next != current {
                current = next;
                applied.push(rule.name.clone());
                break; // first matching rule wins for this diagnostic
            }
        }
    }
    (current, applied)
}

/// Apply the shipped rule set.
pub fn apply_rule_repairs(code: &str, diags: &Diagnostics) -> (String, Vec<String>) {
    apply_rule_repairs_with(code, diags, &default_rule_set())
}

fn replace_in_lines(
    code: &str,
    line_start: usize,
    line_end: usize,
    re: &Regex,
    replacement: &str,
) -> String {
    let lines: Vec<&str> = code.split_inclusive('\n').collect();
    if line_start == 0 || line_start > lines.len() {
        // Span outside the candidate (e.g. a whole-file diagnostic):
        // fall back to whole-code application.
        return re.replace_all(code, replacement).into_owned();
    }
    let end = line_end.min(lines.len());
    let region: String = lines[line_start - 1..end].concat();
    let rewritten = re.replace_all(&region, replacement).into_owned();
    if rewritten == region {
        return code.to_string();
    }
    let mut out = String::new();
    out.push_str(&lines[..line_start - 1].concat());
    out.push_str(&rewritten);
    out.push_str(&lines[end..].concat());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repair::{DiagLevel, DiagSpan};

    fn diag(code: Option<&str>, message: &str, line: Option<usize>) -> Diagnostics {
        Diagnostics {
            entries: vec![DiagEntry {
                level: DiagLevel::Error,
                code: code.map(String::from),
                message: message.to_string(),
                span: line.map(|l| DiagSpan {
                    file: "unit.rs".into(),
                    line_start: l,
                    col_start: 1,
                    line_end: l,
                    col_end: 1,
                }),
                is_child: false,
            }],
        }
    }

    #[test]
    fn index_self_borrow_gets_a_temp() {
        let code = "fn f(s: &mut S) {\n    s[s.i] = 0;\n}\n";
        let d = diag(
            Some("E0502"),
            "cannot borrow `s` as immutable because it is also borrowed as mutable",
            Some(2),
        );
        let (out, applied) = apply_rule_repairs(code, &d);
        assert!(out.contains("let tmp_idx = s.i; s[tmp_idx] = 0;"), "{out}");
        assert_eq!(applied, vec!["index-self-borrow-temp".to_string()]);
    }

    #[test]
    fn redundant_cast_is_stripped_only_on_the_spanned_line() {
        let code = "fn f(x: u32, y: u32) -> u32 {\n    let a: u32 = x.cast::<i32>();\n    let b: i64 = (y as i64).cast::<i64>();\n    a + b as u32\n}\n";
        let d = diag(Some("E0308"), "mismatched types", Some(2));
        let (out, applied) = apply_rule_repairs(code, &d);
        assert!(out.contains("let a: u32 = x;"), "{out}");
        assert!(out.contains("(y as i64).cast::<i64>()"), "other lines untouched: {out}");
        assert_eq!(applied, vec!["redundant-cast-elimination".to_string()]);
    }

    #[test]
    fn derive_list_is_extended_idempotently() {
        let code = "#[derive(Debug)]\npub struct Foo {\n    x: i32,\n}\n";
        let d = diag(
            Some("E0599"),
            "consider annotating `Foo` with `#[derive(Clone)]`",
            None,
        );
        let (out, applied) = apply_rule_repairs(code, &d);
        assert!(out.contains("#[derive(Debug, Clone)]"), "{out}");
        assert_eq!(applied, vec!["derive-list-extension".to_string()]);
        // Second application with the same (stale) diagnostics is a no-op.
        let (out2, applied2) = apply_rule_repairs(&out, &d);
        assert_eq!(out, out2);
        assert!(applied2.is_empty());
    }

    #[test]
    fn derive_is_inserted_when_absent_idempotently() {
        let code = "pub struct Bar {\n    x: i32,\n}\n";
        let d = diag(
            Some("E0599"),
            "consider annotating `Bar` with `#[derive(Clone)]`",
            None,
        );
        let (out, applied) = apply_rule_repairs(code, &d);
        assert!(out.starts_with("#[derive(Clone)]\npub struct Bar"), "{out}");
        assert_eq!(applied, vec!["derive-insertion".to_string()]);
        let (out2, applied2) = apply_rule_repairs(&out, &d);
        assert_eq!(out, out2, "insertion must be idempotent");
        assert!(applied2.is_empty());
    }

    #[test]
    fn unrelated_diagnostics_are_no_ops() {
        let code = "fn f() {}\n";
        let d = diag(Some("E0425"), "cannot find value `q` in this scope", Some(1));
        let (out, applied) = apply_rule_repairs(code, &d);
        assert_eq!(out, code);
        assert!(applied.is_empty());
    }
}
