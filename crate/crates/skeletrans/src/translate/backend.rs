//! Completion backends: the live chat-completion HTTP client, transcript
//! replay, and the deterministic test doubles.

use super::prompt::Prompt;
use super::TranslateError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Mutex;

pub trait CompletionBackend: Send + Sync {
    fn complete(&self, prompt: &Prompt) -> Result<String, TranslateError>;
    fn identity(&self) -> String;
    fn deterministic(&self) -> bool;
}

/// Extract translated code from a completion: the first fenced code block
/// (language tag stripped). When several blocks parse together as items
/// they are concatenated, otherwise the first alone is used. A completion
/// with no fenced block but code-shaped content is taken verbatim;
/// prose-only completions are `NoCodeBlock`.
pub fn extract_code_block(completion: &str) -> Result<String, TranslateError> {
    let mut blocks: Vec<String> = Vec::new();
    let mut in_block = false;
    let mut cur = String::new();
    for line in completion.lines() {
        let fence = line.trim_start().starts_with("```");
        if fence {
            if in_block {
                blocks.push(cur.trim_end().to_string());
                cur.clear();
            }
            in_block = !in_block;
            continue;
        }
        if in_block {
            cur.push_str(line);
            cur.push('\n');
        }
    }
    if in_block && !cur.trim().is_empty() {
        blocks.push(cur.trim_end().to_string());
    }
    match blocks.len() {
        0 => {
            let trimmed = completion.trim();
            let code_shaped = trimmed.starts_with('{')
                || trimmed.starts_with("pub ")
                || trimmed.starts_with("fn ")
                || trimmed.starts_with("#[")
                || trimmed.starts_with("macro_rules!");
            if code_shaped {
                Ok(trimmed.to_string())
            } else {
                Err(TranslateError::NoCodeBlock)
            }
        }
        1 => Ok(blocks.remove(0)),
        _ => {
            let joined = blocks.join("\n\n");
            if syn::parse_file(&joined).is_ok() {
                Ok(joined)
            } else {
                Ok(blocks.remove(0))
            }
        }
    }
}

// ---- transcript format (one JSON object per line) ----

#[derive(Debug, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub request: ChatRequest,
    pub response: ChatResponse,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub max_tokens: usize,
    pub temperature: f32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChatResponse {
    pub choices: Vec<ChatChoice>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChatChoice {
    pub message: ChatMessage,
}

fn request_for(prompt: &Prompt, model: &str) -> ChatRequest {
    ChatRequest {
        model: model.to_string(),
        messages: vec![ChatMessage {
            role: "user".to_string(),
            content: prompt.render(),
        }],
        max_tokens: prompt.token_budget,
        temperature: 0.0,
    }
}

/// Live chat-completion backend. Endpoint and model come from the config;
/// the key from `SKELETRANS_API_KEY`. Every exchange is appended to the
/// transcript for later replay.
pub struct LiveBackend {
    pub url: String,
    pub model: String,
    pub api_key: Option<String>,
    pub transcript: Option<PathBuf>,
    client: reqwest::blocking::Client,
}

impl LiveBackend {
    pub fn new(url: String, model: String, transcript: Option<PathBuf>) -> Self {
        LiveBackend {
            url,
            model,
            api_key: std::env::var("SKELETRANS_API_KEY").ok(),
            transcript,
            client: reqwest::blocking::Client::new(),
        }
    }
}

impl CompletionBackend for LiveBackend {
    fn complete(&self, prompt: &Prompt) -> Result<String, TranslateError> {
        let request = request_for(prompt, &self.model);
        let mut call = self.client.post(&self.url).json(&request);
        if let Some(key) = &self.api_key {
            call = call.bearer_auth(key);
        }
        let response: ChatResponse = call
            .send()
            .map_err(|e| TranslateError::BackendUnavailable(e.to_string()))?
            .error_for_status()
            .map_err(|e| TranslateError::BackendUnavailable(e.to_string()))?
            .json()
            .map_err(|e| TranslateError::BackendUnavailable(e.to_string()))?;
        let content = response
            .choices
            .first()
            .map(|c| c.message.content.clone())
            .ok_or_else(|| TranslateError::BackendUnavailable("empty choices".to_string()))?;
        if let Some(path) = &self.transcript {
            let entry = TranscriptEntry {
                request,
                response: response.clone(),
            };
            if let Ok(line) = serde_json::to_string(&entry) {
                use std::io::Write;
                if let Ok(mut f) = std::fs::OpenOptions::new().create(true).append(true).open(path)
                {
                    let _ = writeln!(f, "{line}");
                }
            }
        }
        Ok(content)
    }

    fn identity(&self) -> String {
        format!("live:{}@{}", self.model, self.url)
    }

    fn deterministic(&self) -> bool {
        false
    }
}

/// Replays a recorded transcript, keyed by the exact prompt text.
pub struct ReplayBackend {
    responses: BTreeMap<String, String>,
    path: PathBuf,
}

impl ReplayBackend {
    pub fn load(path: &std::path::Path) -> Result<Self, TranslateError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TranslateError::BackendUnavailable(format!("{}: {e}", path.display())))?;
        let mut responses = BTreeMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let entry: TranscriptEntry = serde_json::from_str(line)
                .map_err(|e| TranslateError::BackendUnavailable(format!("bad transcript: {e}")))?;
            let key = entry
                .request
                .messages
                .first()
                .map(|m| m.content.clone())
                .unwrap_or_default();
            let value = entry
                .response
                .choices
                .first()
                .map(|c| c.message.content.clone())
                .unwrap_or_default();
            responses.insert(key, value);
        }
        Ok(ReplayBackend {
            responses,
            path: path.to_path_buf(),
        })
    }
}

impl CompletionBackend for ReplayBackend {
    fn complete(&self, prompt: &Prompt) -> Result<String, TranslateError> {
        self.responses
            .get(&prompt.render())
            .cloned()
            .ok_or_else(|| {
                TranslateError::BackendUnavailable(format!(
                    "no transcript entry for prompt in {}",
                    self.path.display()
                ))
            })
    }

    fn identity(&self) -> String {
        format!("replay:{}", self.path.display())
    }

    fn deterministic(&self) -> bool {
        true
    }
}

/// Returns scripted responses in order for matching prompt substrings;
/// deterministic test double for repair loops.
pub struct ScriptedBackend {
    pub name: String,
    responses: Mutex<Vec<String>>,
}

impl ScriptedBackend {
    pub fn new(name: &str, responses: Vec<String>) -> Self {
        ScriptedBackend {
            name: name.to_string(),
            responses: Mutex::new(responses),
        }
    }
}

impl CompletionBackend for ScriptedBackend {
    fn complete(&self, _prompt: &Prompt) -> Result<String, TranslateError> {
        let mut rs = self.responses.lock().unwrap_or_else(|e| e.into_inner());
        if rs.is_empty() {
            return Err(TranslateError::BackendUnavailable(
                "script exhausted".to_string(),
            ));
        }
        Ok(rs.remove(0))
    }

    fn identity(&self) -> String {
        format!("scripted:{}", self.name)
    }

    fn deterministic(&self) -> bool {
        true
    }
}

/// Echoes the input code back unchanged (worst useful repair backend).
pub struct EchoBackend;

impl CompletionBackend for EchoBackend {
    fn complete(&self, prompt: &Prompt) -> Result<String, TranslateError> {
        let code = prompt
            .section("Rust Source Code")
            .or_else(|| prompt.section("C Source Code"))
            .unwrap_or_default();
        Ok(format!("```rust\n{code}\n```"))
    }

    fn identity(&self) -> String {
        "echo".to_string()
    }

    fn deterministic(&self) -> bool {
        true
    }
}
