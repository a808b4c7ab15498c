//! C project analysis: parse a project tree into [`ProjectMetadata`], build
//! the call graph, and slice the project into ordered translation units.
//!
//! The parser is declaration-level: it recovers includes, macro definitions,
//! type declarations, globals, function signatures and function body spans,
//! which is everything skeleton construction and unit scheduling need. It is
//! not a full C front end (see the module docs on [`parse`] for the accepted
//! dialect). The parsing backend sits behind [`parse::CGrammar`] so a
//! different front end producing the same metadata can be swapped in.

pub(crate) mod lexer;
mod metadata;
mod parse;
mod units;

pub use metadata::{
    AggregateKind, BaseType, CType, CallEdge, FileFacts, FunctionSignature, GlobalVar, Include,
    IntWidth, MacroDef, ProjectMetadata, TypeDecl, TypeDeclKind, METADATA_SCHEMA_VERSION,
};
pub use parse::{parse_c_int as parse_c_int_literal, CGrammar, DeclLevelGrammar};
pub use units::{module_map, module_of_file, TranslationUnit, UnitKind};

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalyzerError {
    #[error("unreadable file {path}: {source}")]
    UnreadableFile {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse failure in {path} at byte {offset}: {message}")]
    ParseFailure {
        path: PathBuf,
        offset: usize,
        message: String,
    },
    #[error("duplicate definition of `{name}` in {first} and {second}")]
    DuplicateDefinition {
        name: String,
        first: PathBuf,
        second: PathBuf,
    },
    #[error("project root {0} contains no .c or .h files")]
    EmptyProject(PathBuf),
    #[error("project root {0} does not exist or is not a directory")]
    MissingRoot(PathBuf),
}

/// Options accepted by the analyzer. Mirrors the config file keys
/// `defines`, `include_dirs` and `encoding_fallback`.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct AnalyzerOptions {
    /// Preprocessor defines assumed set when evaluating `#ifdef`/`#if`.
    #[serde(default)]
    pub defines: BTreeMap<String, String>,
    /// Additional include directories (recorded, not searched; local
    /// includes are resolved against the project tree).
    #[serde(default)]
    pub include_dirs: Vec<PathBuf>,
    /// Encoding fallback for non-UTF-8 sources: "latin1" (default) or
    /// "strict" to reject them.
    #[serde(default = "default_encoding_fallback")]
    pub encoding_fallback: String,
}

fn default_encoding_fallback() -> String {
    "latin1".to_string()
}

impl Default for AnalyzerOptions {
    fn default() -> Self {
        AnalyzerOptions {
            defines: BTreeMap::new(),
            include_dirs: Vec::new(),
            encoding_fallback: default_encoding_fallback(),
        }
    }
}

/// Parse a C project tree into metadata.
///
/// Files are visited in lexicographic relative-path order so the result is
/// deterministic for identical input trees. The returned metadata satisfies
/// all invariants documented on [`ProjectMetadata`], with the call graph
/// already populated.
pub fn parse_project(
    root: &Path,
    options: &AnalyzerOptions,
) -> Result<ProjectMetadata, AnalyzerError> {
    let grammar = DeclLevelGrammar;
    parse_project_with(root, options, &grammar)
}

/// Like [`parse_project`] but with an explicit grammar backend.
pub fn parse_project_with(
    root: &Path,
    options: &AnalyzerOptions,
    grammar: &dyn CGrammar,
) -> Result<ProjectMetadata, AnalyzerError> {
    if !root.is_dir() {
        return Err(AnalyzerError::MissingRoot(root.to_path_buf()));
    }
    let mut files: Vec<PathBuf> = walkdir::WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file())
        .filter_map(|e| {
            let ext = e.path().extension().and_then(|s| s.to_str())?;
            if ext == "c" || ext == "h" {
                Some(
                    e.path()
                        .strip_prefix(root)
                        .unwrap_or(e.path())
                        .to_path_buf(),
                )
            } else {
                None
            }
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(AnalyzerError::EmptyProject(root.to_path_buf()));
    }

    let mut metadata = ProjectMetadata::new(files.clone());
    for rel in &files {
        let abs = root.join(rel);
        let text = read_source(&abs, options)?;
        let facts = grammar.parse_file(rel, &text, options)?;
        metadata.merge_file(rel, facts)?;
    }
    metadata.finish()?;
    build_call_graph(&mut metadata);
    Ok(metadata)
}

fn read_source(path: &Path, options: &AnalyzerOptions) -> Result<String, AnalyzerError> {
    let bytes = std::fs::read(path).map_err(|source| AnalyzerError::UnreadableFile {
        path: path.to_path_buf(),
        source,
    })?;
    match String::from_utf8(bytes) {
        Ok(s) => Ok(s),
        Err(err) if options.encoding_fallback == "latin1" => {
            Ok(err.into_bytes().iter().map(|&b| b as char).collect())
        }
        Err(_) => Err(AnalyzerError::UnreadableFile {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::InvalidData, "not valid UTF-8"),
        }),
    }
}

/// Populate `metadata.call_graph` and `metadata.external_refs`.
///
/// An edge (caller → callee) is recorded iff the caller's body contains an
/// invocation token of `callee` that resolves to a project function through
/// the declaration table. Invocations of names the project does not define
/// become external references, never edges.
pub fn build_call_graph(metadata: &mut ProjectMetadata) {
    let defined: std::collections::BTreeSet<String> = metadata
        .signatures
        .iter()
        .map(|s| s.name.clone())
        .collect();
    let mut edges = Vec::new();
    let mut external: BTreeMap<String, std::collections::BTreeSet<String>> = BTreeMap::new();
    for sig in &metadata.signatures {
        let body = match &sig.body_text {
            Some(b) => b,
            None => continue,
        };
        for callee in lexer::invocation_tokens(body) {
            if callee == sig.name && defined.contains(&callee) {
                edges.push(CallEdge {
                    caller: sig.name.clone(),
                    callee,
                });
            } else if defined.contains(&callee) {
                edges.push(CallEdge {
                    caller: sig.name.clone(),
                    callee,
                });
            } else if !metadata.decl_table.contains_key(&callee) {
                external.entry(sig.name.clone()).or_default().insert(callee);
            }
            // Invocations of project macros resolve through decl_table but
            // are unit dependencies, not call edges.
        }
    }
    edges.sort();
    edges.dedup();
    metadata.call_graph = edges;
    metadata.external_refs = external;
}

/// Decompose the project into ordered translation units: one per type
/// declaration, one per macro, one per function body. See [`units`].
pub fn slice_units(metadata: &ProjectMetadata) -> Vec<TranslationUnit> {
    units::slice_units(metadata)
}

#[cfg(test)]
pub(crate) mod tests;
