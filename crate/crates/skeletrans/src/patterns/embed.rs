//! Embedding backends. The built-in fallback is character-trigram TF-IDF
//! over the store corpus, L2-normalized: fully deterministic and robust to
//! whitespace-only edits (runs of whitespace collapse before windowing).

use super::PatternError;
use std::collections::BTreeMap;

pub trait EmbeddingBackend {
    fn id(&self) -> &str;
    /// Fit on the store corpus before embedding (no-op for backends with a
    /// fixed vocabulary).
    fn fit(&mut self, corpus: &[String]);
    /// Embed one text; unit norm whenever the text shares vocabulary with
    /// the corpus, the zero vector otherwise.
    fn embed(&self, text: &str) -> Result<Vec<f32>, PatternError>;
}

#[derive(Debug, Clone, Default)]
pub struct TrigramTfIdf {
    /// trigram → (dense index, idf weight)
    vocab: BTreeMap<String, (usize, f32)>,
}

impl TrigramTfIdf {
    pub fn new() -> Self {
        TrigramTfIdf {
            vocab: BTreeMap::new(),
        }
    }

    fn trigrams(text: &str) -> Vec<String> {
        let normalized: String = text.split_whitespace().collect::<Vec<_>>().join(" ");
        let chars: Vec<char> = normalized.chars().collect();
        if chars.len() < 3 {
            return if chars.is_empty() {
                Vec::new()
            } else {
                vec![chars.iter().collect()]
            };
        }
        chars.windows(3).map(|w| w.iter().collect()).collect()
    }
}

impl EmbeddingBackend for TrigramTfIdf {
    fn id(&self) -> &str {
        "trigram-tfidf-v1"
    }

    fn fit(&mut self, corpus: &[String]) {
        let n_docs = corpus.len().max(1) as f32;
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for doc in corpus {
            let mut seen = std::collections::BTreeSet::new();
            for t in Self::trigrams(doc) {
                if seen.insert(t.clone()) {
                    *df.entry(t).or_insert(0) += 1;
                }
            }
        }
        self.vocab = df
            .into_iter()
            .enumerate()
            .map(|(i, (t, d))| {
                let idf = ((1.0 + n_docs) / (1.0 + d as f32)).ln() + 1.0;
                (t, (i, idf))
            })
            .collect();
    }

    fn embed(&self, text: &str) -> Result<Vec<f32>, PatternError> {
        let mut dense = vec![0.0f32; self.vocab.len()];
        for t in Self::trigrams(text) {
            if let Some(&(i, idf)) = self.vocab.get(&t) {
                dense[i] += idf;
            }
        }
        let norm = dense.iter().map(|v| v * v).sum::<f32>().sqrt();
        if norm > 0.0 {
            for v in &mut dense {
                *v /= norm;
            }
        }
        Ok(dense)
    }
}

pub fn cosine(a: &[f32], b: &[f32]) -> f32 {
    if a.len() != b.len() {
        return 0.0;
    }
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
