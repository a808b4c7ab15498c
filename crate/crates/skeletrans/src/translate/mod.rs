//! Translation: prompt assembly per the fixed template, completion
//! backends, and incremental integrate-compile-revert over the skeleton.

mod backend;
mod demos;
mod integrate;
mod mini;
mod prompt;

pub use backend::{
    extract_code_block, ChatMessage, ChatRequest, ChatResponse, CompletionBackend, EchoBackend,
    LiveBackend, ReplayBackend, ScriptedBackend, TranscriptEntry,
};
pub use demos::demos_for;
pub use integrate::{integrate_incremental, IntegrateOptions, UnitOutcome, UnitResult};
pub use mini::{mini_translate, translate_source, MiniBackend};
pub use prompt::{
    assemble_prompt, assemble_prompt_with_budget, Prompt, DEFAULT_CONTEXT_TOKENS,
    DEFAULT_MAX_TOKENS,
};

use crate::analyzer::TranslationUnit;
use crate::patterns::{retrieve, PatternStore};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("completion backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("completion contained no extractable code block")]
    NoCodeBlock,
    #[error("construct outside the supported subset: {construct}")]
    OutOfSubset { construct: String },
}

/// Default retrieval depth.
pub const DEFAULT_K: usize = 10;

/// Translate one unit: retrieve top-k patterns, assemble the prompt, query
/// the backend, and extract the first fenced code block.
pub fn translate_unit(
    unit: &TranslationUnit,
    store: &PatternStore,
    backend: &dyn CompletionBackend,
    k: usize,
) -> Result<String, TranslateError> {
    let patterns = retrieve(store, &unit.c_source, k);
    let demos = demos_for(unit.kind);
    let prompt = assemble_prompt(unit, &patterns, &demos);
    let completion = backend.complete(&prompt)?;
    extract_code_block(&completion)
}

#[cfg(test)]
mod tests;
