//! The deterministic rule backend: purely rule-driven translation of a C
//! subset (scalar arithmetic, pointers, arrays, `for`/`do`/`switch`/`while`,
//! calls, casts, string literals) onto the compatibility runtime. Serves as
//! the test double for the completion interface and as the reference
//! emitter for the feature mappings.

mod cparse;
mod emit;

use super::backend::CompletionBackend;
use super::prompt::Prompt;
use super::TranslateError;
use crate::analyzer::{
    CGrammar, DeclLevelGrammar, ProjectMetadata, TranslationUnit, TypeDeclKind, UnitKind,
};
use crate::cmap::TypeMapper;
use cparse::CParser;
use std::collections::BTreeSet;
use std::path::Path;

/// Translate one unit. Definitions and macros go through the rule mapping;
/// function bodies go through the mini compiler. Returns the slot text
/// (body block for functions, whole item for definitions/macros).
pub fn mini_translate(
    unit: &TranslationUnit,
    metadata: &ProjectMetadata,
) -> Result<String, TranslateError> {
    translate_source(unit.kind, &unit.c_source, metadata)
}

fn parse_single(source: &str) -> Result<crate::analyzer::FileFacts, TranslateError> {
    DeclLevelGrammar
        .parse_file(
            Path::new("unit.c"),
            source,
            &crate::analyzer::AnalyzerOptions::default(),
        )
        .map_err(|e| TranslateError::OutOfSubset {
            construct: format!("unparseable unit: {e}"),
        })
}

fn typenames(metadata: &ProjectMetadata) -> BTreeSet<String> {
    let mut names: BTreeSet<String> = metadata
        .type_decls
        .iter()
        .map(|d| d.name.clone())
        .collect();
    for t in [
        "size_t", "ssize_t", "ptrdiff_t", "intptr_t", "uintptr_t", "uint8_t", "int8_t",
        "uint16_t", "int16_t", "uint32_t", "int32_t", "uint64_t", "int64_t", "FILE", "va_list",
    ] {
        names.insert(t.to_string());
    }
    names
}

pub fn translate_source(
    kind: UnitKind,
    source: &str,
    metadata: &ProjectMetadata,
) -> Result<String, TranslateError> {
    let mapper = TypeMapper::new(Some(metadata));
    match kind {
        UnitKind::Macro => {
            let facts = parse_single(source)?;
            let m = facts.macros.first().ok_or(TranslateError::OutOfSubset {
                construct: "macro unit without a #define".to_string(),
            })?;
            Ok(mapper.map_macro(m))
        }
        UnitKind::Definition => {
            let facts = parse_single(source)?;
            let d = facts
                .type_decls
                .first()
                .ok_or(TranslateError::OutOfSubset {
                    construct: "definition unit without a declaration".to_string(),
                })?;
            // Enum constants must stay translatable even when the variant
            // initializers use expressions the parser folded already.
            let _ = matches!(d.kind, TypeDeclKind::Enum { .. });
            mapper
                .map_type_decl(d)
                .map_err(|e| TranslateError::OutOfSubset {
                    construct: e.to_string(),
                })
        }
        UnitKind::Function => {
            let facts = parse_single(source)?;
            let sig = facts
                .signatures
                .first()
                .ok_or(TranslateError::OutOfSubset {
                    construct: "function unit without a definition".to_string(),
                })?;
            let body = sig.body_text.as_ref().ok_or(TranslateError::OutOfSubset {
                construct: "function unit without a body".to_string(),
            })?;
            let names = typenames(metadata);
            let stmts = CParser::parse_body(body, &names)?;
            let mut emitter = emit::Emitter::new(metadata, sig);
            emitter.emit_function_body(sig, &stmts)
        }
    }
}

/// The mini translator behind the completion interface: extracts the C
/// source from the prompt, translates it, and answers with a fenced code
/// block (or a refusal in prose when the unit is outside the subset, which
/// the caller surfaces as `NoCodeBlock`).
pub struct MiniBackend {
    metadata: ProjectMetadata,
}

impl MiniBackend {
    pub fn new(metadata: ProjectMetadata) -> Self {
        MiniBackend { metadata }
    }
}

impl CompletionBackend for MiniBackend {
    fn complete(&self, prompt: &Prompt) -> Result<String, TranslateError> {
        let kind = match prompt.kind_word() {
            Some("macro") => UnitKind::Macro,
            Some("definition") => UnitKind::Definition,
            Some("function") => UnitKind::Function,
            _ => {
                return Ok("Unable to determine the unit kind from the instruction.".to_string())
            }
        };
        let source = prompt
            .section("C Source Code")
            .unwrap_or_default()
            .to_string();
        match translate_source(kind, &source, &self.metadata) {
            Ok(code) => Ok(format!("```rust\n{code}\n```")),
            Err(TranslateError::OutOfSubset { construct }) => Ok(format!(
                "This unit uses a construct outside the supported subset ({construct}), so no translation is produced."
            )),
            Err(e) => Err(e),
        }
    }

    fn identity(&self) -> String {
        "mini".to_string()
    }

    fn deterministic(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests;
