//! Card-file parsing and the embedding cache sidecar.
//!
//! Card file format: UTF-8 text; each card begins `=== RULE: <name>`,
//! followed by `--- MOTIVATION`, `--- CONSEQUENCE`, `--- SOLUTION`,
//! `--- EXAMPLE C`, `--- EXAMPLE TARGET` sections.
//!
//! The sidecar (`<file>.embcache.json`) caches embeddings keyed by
//! (embedder id, content hash) so reloading a store recomputes nothing.

use super::embed::EmbeddingBackend;
use super::{PatternError, PatternStore, TransformationPattern};
use std::collections::BTreeMap;
use std::path::Path;

const RULE_MARK: &str = "=== RULE:";

pub fn parse_cards(text: &str) -> Result<Vec<TransformationPattern>, PatternError> {
    let mut cards = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut current: Option<(String, BTreeMap<&'static str, String>, Option<&'static str>)> = None;

    let close =
        |name: String, secs: BTreeMap<&'static str, String>, index: usize| -> Result<TransformationPattern, PatternError> {
            let field = |key: &'static str| -> Result<String, PatternError> {
                secs.get(key)
                    .map(|s| s.trim().to_string())
                    .ok_or(PatternError::MalformedCard { index, field: key })
            };
            Ok(TransformationPattern {
                rule_name: name,
                motivation: field("MOTIVATION")?,
                consequence: field("CONSEQUENCE")?,
                solution: field("SOLUTION")?,
                example_c: field("EXAMPLE C")?,
                example_target: field("EXAMPLE TARGET")?,
                embedding: None,
            })
        };

    for line in text.lines() {
        if let Some(name) = line.strip_prefix(RULE_MARK) {
            if let Some((n, secs, _)) = current.take() {
                cards.push(close(n, secs, cards.len())?);
            }
            let name = name.trim().to_string();
            if !seen.insert(name.clone()) {
                return Err(PatternError::DuplicateRule(name));
            }
            current = Some((name, BTreeMap::new(), None));
            continue;
        }
        if let Some(section) = line.strip_prefix("--- ") {
            if let Some((_, secs, active)) = current.as_mut() {
                let key = match section.trim() {
                    "MOTIVATION" => "MOTIVATION",
                    "CONSEQUENCE" => "CONSEQUENCE",
                    "SOLUTION" => "SOLUTION",
                    "EXAMPLE C" => "EXAMPLE C",
                    "EXAMPLE TARGET" => "EXAMPLE TARGET",
                    _ => continue,
                };
                secs.insert(key, String::new());
                *active = Some(key);
                continue;
            }
        }
        if let Some((_, secs, Some(active))) = current.as_mut() {
            let buf = secs.get_mut(*active).expect("active section exists");
            buf.push_str(line);
            buf.push('\n');
        }
    }
    if let Some((n, secs, _)) = current.take() {
        cards.push(close(n, secs, cards.len())?);
    }
    Ok(cards)
}

pub fn render_cards(cards: &[TransformationPattern]) -> String {
    let mut out = String::new();
    for c in cards {
        out.push_str(&format!("{RULE_MARK} {}\n", c.rule_name));
        for (label, body) in [
            ("MOTIVATION", &c.motivation),
            ("CONSEQUENCE", &c.consequence),
            ("SOLUTION", &c.solution),
            ("EXAMPLE C", &c.example_c),
            ("EXAMPLE TARGET", &c.example_target),
        ] {
            out.push_str(&format!("--- {label}\n{body}\n"));
        }
        out.push('\n');
    }
    out
}

#[derive(serde::Serialize, serde::Deserialize, Default)]
struct EmbCache {
    embedder_id: String,
    /// content-hash(example_c) → embedding
    entries: BTreeMap<String, Vec<f32>>,
}

/// Load a card file, computing (and caching back) any missing embeddings.
pub fn load_store(
    path: &Path,
    backend: Box<dyn EmbeddingBackend + Send + Sync>,
) -> Result<PatternStore, PatternError> {
    let text = std::fs::read_to_string(path)?;
    let cache_path = path.with_extension("cards.embcache.json");
    let cache: EmbCache = std::fs::read_to_string(&cache_path)
        .ok()
        .and_then(|t| serde_json::from_str(&t).ok())
        .unwrap_or_default();
    let store = build_store(&text, backend, Some(cache))?;

    let fresh = EmbCache {
        embedder_id: store.embedder_id.clone(),
        entries: store
            .patterns
            .iter()
            .filter_map(|p| {
                p.embedding
                    .as_ref()
                    .map(|e| (crate::repair::sha256_hex(&p.example_c), e.clone()))
            })
            .collect(),
    };
    if let Ok(json) = serde_json::to_string(&fresh) {
        let _ = std::fs::write(&cache_path, json);
    }
    Ok(store)
}

/// Load from in-memory card text (no sidecar involved).
pub fn load_store_from_str(
    text: &str,
    backend: Box<dyn EmbeddingBackend + Send + Sync>,
) -> Result<PatternStore, PatternError> {
    build_store(text, backend, None)
}

fn build_store(
    text: &str,
    mut backend: Box<dyn EmbeddingBackend + Send + Sync>,
    cache: Option<EmbCache>,
) -> Result<PatternStore, PatternError> {
    let mut cards = parse_cards(text)?;
    let corpus: Vec<String> = cards.iter().map(|c| c.example_c.clone()).collect();
    backend.fit(&corpus);
    let usable_cache = cache.filter(|c| c.embedder_id == backend.id());
    for card in &mut cards {
        let key = crate::repair::sha256_hex(&card.example_c);
        card.embedding = match usable_cache.as_ref().and_then(|c| c.entries.get(&key)) {
            Some(hit) => Some(hit.clone()),
            None => Some(backend.embed(&card.example_c)?),
        };
    }
    Ok(PatternStore::new(cards, backend))
}
