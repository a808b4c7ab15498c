//! Transformation-pattern cards and similarity retrieval.
//!
//! Cards are migration rules (name, motivation, consequence, solution,
//! paired example). Retrieval encodes the query snippet and every card's C
//! example into dense vectors and ranks by cosine similarity, ties broken
//! by rule name. The built-in embedder is a deterministic character-trigram
//! TF-IDF over the store's corpus so everything runs without network
//! models; other backends plug in behind [`EmbeddingBackend`].

mod embed;
mod store;

pub use embed::{cosine, EmbeddingBackend, TrigramTfIdf};
pub use store::{load_store, load_store_from_str, parse_cards, render_cards};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("malformed card #{index}: missing {field}")]
    MalformedCard { index: usize, field: &'static str },
    #[error("duplicate rule name `{0}`")]
    DuplicateRule(String),
    #[error("embedding backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// One migration rule card.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformationPattern {
    pub rule_name: String,
    pub motivation: String,
    pub consequence: String,
    pub solution: String,
    pub example_c: String,
    pub example_target: String,
    /// Unit-normalized embedding of `example_c`, when computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<f32>>,
}

impl TransformationPattern {
    /// Rendered form injected into prompts.
    pub fn render(&self) -> String {
        format!(
            "Rule Name: {}\nMotivation: {}\nConsequence: {}\nSolution: {}\nExample:\nC Code:\n{}\nRust Code:\n{}\n",
            self.rule_name,
            self.motivation,
            self.consequence,
            self.solution,
            self.example_c,
            self.example_target
        )
    }
}

/// An in-memory pattern store plus the backend that embedded it.
pub struct PatternStore {
    pub patterns: Vec<TransformationPattern>,
    pub embedder_id: String,
    backend: Box<dyn EmbeddingBackend + Send + Sync>,
}

impl std::fmt::Debug for PatternStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PatternStore")
            .field("patterns", &self.patterns.len())
            .field("embedder_id", &self.embedder_id)
            .finish()
    }
}

impl PatternStore {
    pub(crate) fn new(
        patterns: Vec<TransformationPattern>,
        backend: Box<dyn EmbeddingBackend + Send + Sync>,
    ) -> Self {
        PatternStore {
            embedder_id: backend.id().to_string(),
            patterns,
            backend,
        }
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn embed(&self, text: &str) -> Result<Vec<f32>, PatternError> {
        self.backend.embed(text)
    }
}

/// The shipped default store: one card per feature-mapping category.
pub const DEFAULT_CARDS: &str = include_str!("../../data/patterns.cards");

pub fn default_store() -> PatternStore {
    load_store_from_str(DEFAULT_CARDS, Box::new(TrigramTfIdf::new()))
        .expect("shipped card file parses")
}

/// Top-k patterns by descending cosine similarity to `snippet`; ties break
/// by lexicographic rule name. Returns (pattern, similarity) pairs, at most
/// `k` (default 10 when callers pass the configured default).
pub fn retrieve(
    store: &PatternStore,
    snippet: &str,
    k: usize,
) -> Vec<(TransformationPattern, f32)> {
    if store.is_empty() || k == 0 {
        return Vec::new();
    }
    let query = match store.embed(snippet) {
        Ok(v) => v,
        Err(_) => return Vec::new(),
    };
    let mut scored: Vec<(TransformationPattern, f32)> = store
        .patterns
        .iter()
        .map(|p| {
            let sim = p
                .embedding
                .as_ref()
                .map(|e| cosine(e, &query))
                .unwrap_or(0.0);
            (p.clone(), sim)
        })
        .collect();
    scored.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.rule_name.cmp(&b.0.rule_name))
    });
    scored.truncate(k);
    scored
}

#[cfg(test)]
mod tests;
