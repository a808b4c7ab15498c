//! Prompt assembly for the translation backend.
//!
//! The template is fixed: an instruction naming the unit kind, then
//! `Patterns`, `Demonstrations` and `C Source Code` sections in that order.
//! When the rendered prompt would exceed the context budget, retrieved
//! patterns are dropped lowest-similarity-first until it fits.

use crate::analyzer::{TranslationUnit, UnitKind};
use crate::patterns::TransformationPattern;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_TOKENS: usize = 4096;
pub const DEFAULT_CONTEXT_TOKENS: usize = 12288;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Prompt {
    pub system: String,
    /// Ordered (label, body) pairs: Patterns, Demonstrations, C Source Code.
    pub sections: Vec<(String, String)>,
    pub token_budget: usize,
}

impl Prompt {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.system);
        out.push('\n');
        for (label, body) in &self.sections {
            out.push_str(label);
            out.push_str(":\n");
            out.push_str(body);
            if !body.ends_with('\n') {
                out.push('\n');
            }
        }
        out
    }

    pub fn section(&self, label: &str) -> Option<&str> {
        self.sections
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, b)| b.as_str())
    }

    /// The unit kind named in the instruction line.
    pub fn kind_word(&self) -> Option<&str> {
        ["macro", "definition", "function"]
            .into_iter()
            .find(|w| self.system.contains(&format!("C {w} to Rust")))
    }
}

/// Rough token estimate for budget enforcement.
fn estimate_tokens(text: &str) -> usize {
    text.len() / 4 + 1
}

pub fn assemble_prompt(
    unit: &TranslationUnit,
    patterns: &[(TransformationPattern, f32)],
    demos: &[(String, String)],
) -> Prompt {
    assemble_prompt_with_budget(unit, patterns, demos, DEFAULT_CONTEXT_TOKENS, DEFAULT_MAX_TOKENS)
}

pub fn assemble_prompt_with_budget(
    unit: &TranslationUnit,
    patterns: &[(TransformationPattern, f32)],
    demos: &[(String, String)],
    context_tokens: usize,
    max_tokens: usize,
) -> Prompt {
    let kind_word = match unit.kind {
        UnitKind::Macro => "macro",
        UnitKind::Definition => "definition",
        UnitKind::Function => "function",
    };
    let system = format!("Translate the C {kind_word} to Rust.");

    let demo_text = demos
        .iter()
        .map(|(c, rust)| format!("C Code:\n{c}\nRust Code:\n{rust}\n"))
        .collect::<Vec<_>>()
        .join("\n");

    let mut kept = patterns.len();
    loop {
        let pattern_text = patterns[..kept]
            .iter()
            .map(|(p, _)| p.render())
            .collect::<Vec<_>>()
            .join("\n");
        let prompt = Prompt {
            system: system.clone(),
            sections: vec![
                ("Patterns".to_string(), pattern_text),
                ("Demonstrations".to_string(), demo_text.clone()),
                ("C Source Code".to_string(), unit.c_source.clone()),
            ],
            token_budget: max_tokens,
        };
        if kept == 0 || estimate_tokens(&prompt.render()) <= context_tokens {
            return prompt;
        }
        // Retrieval order is similarity-descending, so the tail card is the
        // lowest-similarity one.
        kept -= 1;
    }
}
