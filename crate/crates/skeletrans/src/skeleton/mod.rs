//! Skeleton construction: turn project metadata into a Rust project in
//! which every C function is a type-checked stub, all definitions, macros,
//! globals, imports and re-exports are in place, and the vendored runtime
//! is included — so the project compiles before any function body has been
//! translated.

use crate::analyzer::{module_map, slice_units, ProjectMetadata};
use crate::cmap::{sanitize_ident, CmapError, TypeMapper, STUB_BODY};
use crate::pipeline::Toolchain;
use crate::repair::Diagnostics;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SkeletonError {
    #[error(transparent)]
    Unsupported(#[from] CmapError),
    #[error("local include `{include}` in {file} has no corresponding module")]
    UnknownInclude { include: String, file: PathBuf },
    #[error("unknown stub slot `{0}`")]
    UnknownSlot(String),
    #[error("skeleton failed to compile ({} errors) — mapping-rule bug:\n{}", .0.error_count(), .0.rendered())]
    SkeletonCompileFailure(Diagnostics),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Pipeline(#[from] crate::pipeline::PipelineError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BodyState {
    Placeholder,
    Filled,
    Reverted,
}

/// One replaceable region: a function stub body, or a whole
/// definition/macro item.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StubSlot {
    pub slot_id: String,
    pub module: String,
    pub signature_text: String,
    pub state: BodyState,
    /// Byte span of the replaceable region within the module source.
    pub span: (usize, usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
enum Segment {
    Fixed(String),
    /// A function stub: fixed signature, replaceable body block.
    Fn {
        slot_id: String,
        signature: String,
        body: String,
        state: BodyState,
    },
    /// A definition or macro: the whole item is replaceable; `placeholder`
    /// is the rule-mapped fallback text.
    Item {
        slot_id: String,
        text: String,
        placeholder: String,
        state: BodyState,
    },
}

/// The emitted Rust project. Value semantics: `replace_stub`/`revert_stub`
/// return a new project and leave the original untouched.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SkeletonProject {
    pub manifest: String,
    pub lib_rs: String,
    pub reexport_hub: String,
    /// name → source text of the vendored runtime files.
    pub runtime_files: Vec<(String, String)>,
    segments: BTreeMap<String, Vec<Segment>>,
    module_order: Vec<String>,
}

impl SkeletonProject {
    /// Rendered module sources (module name → text).
    pub fn modules(&self) -> BTreeMap<String, String> {
        self.module_order
            .iter()
            .map(|m| (m.clone(), self.render_module(m)))
            .collect()
    }

    fn render_module(&self, module: &str) -> String {
        let mut out = String::new();
        for seg in &self.segments[module] {
            match seg {
                Segment::Fixed(t) => out.push_str(t),
                Segment::Fn {
                    signature, body, ..
                } => {
                    out.push_str(signature);
                    out.push(' ');
                    out.push_str(body);
                    out.push_str("\n\n");
                }
                Segment::Item { text, .. } => {
                    out.push_str(text);
                    out.push_str("\n\n");
                }
            }
        }
        out
    }

    /// Function stubs only: slot id → slot with its current body span.
    pub fn stub_index(&self) -> BTreeMap<String, StubSlot> {
        self.slots(true)
    }

    /// All replaceable slots (functions plus definition/macro items).
    pub fn all_slots(&self) -> BTreeMap<String, StubSlot> {
        self.slots(false)
    }

    fn slots(&self, functions_only: bool) -> BTreeMap<String, StubSlot> {
        let mut out = BTreeMap::new();
        for module in &self.module_order {
            let mut off = 0usize;
            for seg in &self.segments[module] {
                match seg {
                    Segment::Fixed(t) => off += t.len(),
                    Segment::Fn {
                        slot_id,
                        signature,
                        body,
                        state,
                    } => {
                        let body_start = off + signature.len() + 1;
                        out.insert(
                            slot_id.clone(),
                            StubSlot {
                                slot_id: slot_id.clone(),
                                module: module.clone(),
                                signature_text: signature.clone(),
                                state: *state,
                                span: (body_start, body_start + body.len()),
                            },
                        );
                        off = body_start + body.len() + 2;
                    }
                    Segment::Item {
                        slot_id,
                        text,
                        state,
                        ..
                    } => {
                        if !functions_only {
                            out.insert(
                                slot_id.clone(),
                                StubSlot {
                                    slot_id: slot_id.clone(),
                                    module: module.clone(),
                                    signature_text: String::new(),
                                    state: *state,
                                    span: (off, off + text.len()),
                                },
                            );
                        }
                        off += text.len() + 2;
                    }
                }
            }
        }
        out
    }

    /// Replace a slot's body (functions) or item text (definitions/macros)
    /// with candidate code. Compilation is checked separately.
    pub fn replace_stub(&self, slot_id: &str, body: &str) -> Result<SkeletonProject, SkeletonError> {
        self.edit_slot(slot_id, Some(body))
    }

    /// Restore a slot to its byte-identical placeholder.
    pub fn revert_stub(&self, slot_id: &str) -> Result<SkeletonProject, SkeletonError> {
        self.edit_slot(slot_id, None)
    }

    fn edit_slot(
        &self,
        slot_id: &str,
        body: Option<&str>,
    ) -> Result<SkeletonProject, SkeletonError> {
        let mut next = self.clone();
        for segs in next.segments.values_mut() {
            for seg in segs.iter_mut() {
                match seg {
                    Segment::Fn {
                        slot_id: id,
                        body: b,
                        state,
                        ..
                    } if id == slot_id => {
                        match body {
                            Some(new_body) => {
                                *b = new_body.to_string();
                                *state = BodyState::Filled;
                            }
                            None => {
                                *b = STUB_BODY.to_string();
                                *state = BodyState::Reverted;
                            }
                        }
                        return Ok(next);
                    }
                    Segment::Item {
                        slot_id: id,
                        text,
                        placeholder,
                        state,
                    } if id == slot_id => {
                        match body {
                            Some(new_text) => {
                                *text = new_text.to_string();
                                *state = BodyState::Filled;
                            }
                            None => {
                                *text = placeholder.clone();
                                *state = BodyState::Reverted;
                            }
                        }
                        return Ok(next);
                    }
                    _ => {}
                }
            }
        }
        Err(SkeletonError::UnknownSlot(slot_id.to_string()))
    }

    /// Write the project to `dir` as a standard Rust layout: manifest,
    /// `src/lib.rs`, `src/hub.rs`, `src/runtime/`, one file per module.
    pub fn write_to(&self, dir: &Path) -> Result<(), SkeletonError> {
        let src = dir.join("src");
        std::fs::create_dir_all(src.join("runtime"))?;
        std::fs::write(dir.join("Cargo.toml"), &self.manifest)?;
        std::fs::write(src.join("lib.rs"), &self.lib_rs)?;
        std::fs::write(src.join("hub.rs"), &self.reexport_hub)?;
        for (name, text) in &self.runtime_files {
            std::fs::write(src.join("runtime").join(name), text)?;
        }
        for (module, text) in self.modules() {
            std::fs::write(src.join(format!("{module}.rs")), text)?;
        }
        Ok(())
    }

    /// Write to a scratch directory and type-check; zero errors or
    /// `SkeletonCompileFailure`.
    pub fn verify(&self, toolchain: &Toolchain, scratch: &Path) -> Result<(), SkeletonError> {
        self.write_to(scratch)?;
        let diags = toolchain.check_project(scratch)?;
        if diags.error_count() > 0 {
            return Err(SkeletonError::SkeletonCompileFailure(diags));
        }
        Ok(())
    }
}

/// Per-module import lines and the re-export hub text.
pub fn map_includes_and_reexports(
    metadata: &ProjectMetadata,
) -> Result<(BTreeMap<String, Vec<String>>, String), SkeletonError> {
    let modules = module_map(&metadata.files);
    let module_names: BTreeSet<&String> = modules.values().collect();
    let mut imports: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for name in &module_names {
        imports.entry((*name).clone()).or_default();
    }

    // Local includes resolve to modules; system includes are covered by the
    // runtime prelude import every module carries. Includes are transitive
    // (header chains must leave everything a C file could see in scope).
    let resolve = |target: &str, from: &Path| -> Result<String, SkeletonError> {
        let tname = Path::new(target)
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| target.to_string());
        metadata
            .files
            .iter()
            .find(|f| f.file_name().map(|s| s.to_string_lossy() == tname.as_str()) == Some(true))
            .map(|f| modules[*&f].clone())
            .ok_or_else(|| SkeletonError::UnknownInclude {
                include: target.to_string(),
                file: from.to_path_buf(),
            })
    };

    // Direct file-level edges first.
    let mut file_deps: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (file, incs) in &metadata.includes {
        let m = modules[file].clone();
        for inc in incs {
            if inc.system {
                continue;
            }
            let dep = resolve(&inc.target, file)?;
            if dep != m {
                file_deps.entry(m.clone()).or_default().insert(dep);
            } else {
                file_deps.entry(m.clone()).or_default();
            }
        }
    }
    // Transitive closure over module dependencies.
    for m in module_names.iter().map(|s| (*s).clone()).collect::<Vec<_>>() {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<String> = file_deps.get(&m).cloned().unwrap_or_default().into_iter().collect();
        while let Some(d) = stack.pop() {
            if d == m || !seen.insert(d.clone()) {
                continue;
            }
            if let Some(next) = file_deps.get(&d) {
                stack.extend(next.iter().cloned());
            }
        }
        imports.insert(m, seen);
    }

    let import_lines: BTreeMap<String, Vec<String>> = imports
        .into_iter()
        .map(|(m, deps)| {
            let mut lines = vec!["use crate::runtime::prelude::*;".to_string()];
            for d in deps {
                lines.push(format!("use crate::{d}::*;"));
            }
            (m, lines)
        })
        .collect();

    let mut hub = String::from("// Project-wide re-export hub: one line per declared identifier.\n\n");
    for (id, file) in &metadata.decl_table {
        hub.push_str(&format!(
            "pub use crate::{}::{};\n",
            modules[file],
            sanitize_ident(id)
        ));
    }

    Ok((import_lines, hub))
}

/// Build the skeleton. `translated_defs` maps definition/macro slot ids to
/// backend-translated text; missing entries fall back to rule-mapped text
/// (pure-stub mode passes an empty map).
pub fn build_skeleton(
    metadata: &ProjectMetadata,
    translated_defs: &BTreeMap<String, String>,
) -> Result<SkeletonProject, SkeletonError> {
    let mapper = TypeMapper::new(Some(metadata));
    let modules = module_map(&metadata.files);
    let (import_lines, hub) = map_includes_and_reexports(metadata)?;

    // Group files per module, headers before sources so macro definitions
    // precede their textual uses.
    let mut files_of: BTreeMap<String, Vec<PathBuf>> = BTreeMap::new();
    for (file, m) in &modules {
        files_of.entry(m.clone()).or_default().push(file.clone());
    }
    for files in files_of.values_mut() {
        files.sort_by_key(|f| {
            let header_rank = match f.extension().and_then(|e| e.to_str()) {
                Some("h") => 0,
                _ => 1,
            };
            (header_rank, f.clone())
        });
    }

    let units = slice_units(metadata);
    let unit_slot: BTreeMap<(&PathBuf, &str), &str> = units
        .iter()
        .map(|u| ((&u.file, u.name.as_str()), u.slot_id.as_str()))
        .collect();

    let mut segments: BTreeMap<String, Vec<Segment>> = BTreeMap::new();
    let module_order: Vec<String> = files_of.keys().cloned().collect();

    for (module, files) in &files_of {
        let mut segs = Vec::new();
        let mut header = String::new();
        for line in &import_lines[module] {
            header.push_str(line);
            header.push('\n');
        }
        header.push('\n');
        segs.push(Segment::Fixed(header));

        for file in files {
            // Items in source order within the file.
            #[derive(Clone)]
            enum Entry<'a> {
                Def(&'a crate::analyzer::TypeDecl),
                Mac(&'a crate::analyzer::MacroDef),
                Glob(&'a crate::analyzer::GlobalVar),
                Func(&'a crate::analyzer::FunctionSignature),
            }
            let mut entries: Vec<(usize, Entry)> = Vec::new();
            for d in metadata.type_decls.iter().filter(|d| &d.file == file) {
                entries.push((d.span.0, Entry::Def(d)));
            }
            for m in metadata.macros.iter().filter(|m| &m.file == file) {
                entries.push((m.offset, Entry::Mac(m)));
            }
            for g in metadata.globals.iter().filter(|g| &g.file == file) {
                entries.push((g.span.0, Entry::Glob(g)));
            }
            for s in metadata.signatures.iter().filter(|s| &s.source_file == file) {
                entries.push((s.source_span.0, Entry::Func(s)));
            }
            entries.sort_by_key(|(off, _)| *off);

            for (_, entry) in entries {
                match entry {
                    Entry::Def(d) => {
                        let slot_id = unit_slot[&(file, d.name.as_str())].to_string();
                        let placeholder = mapper.map_type_decl(d)?;
                        let text = translated_defs
                            .get(&slot_id)
                            .cloned()
                            .unwrap_or_else(|| placeholder.clone());
                        segs.push(Segment::Item {
                            slot_id,
                            text,
                            placeholder,
                            state: BodyState::Placeholder,
                        });
                    }
                    Entry::Mac(m) => {
                        let slot_id = unit_slot[&(file, m.name.as_str())].to_string();
                        let placeholder = mapper.map_macro(m);
                        let text = translated_defs
                            .get(&slot_id)
                            .cloned()
                            .unwrap_or_else(|| placeholder.clone());
                        segs.push(Segment::Item {
                            slot_id,
                            text,
                            placeholder,
                            state: BodyState::Placeholder,
                        });
                    }
                    Entry::Glob(g) => {
                        segs.push(Segment::Fixed(format!("{}\n\n", mapper.map_global(g)?)));
                    }
                    Entry::Func(s) => {
                        let slot_id = unit_slot[&(file, s.name.as_str())].to_string();
                        segs.push(Segment::Fn {
                            slot_id,
                            signature: mapper.map_signature(s)?,
                            body: STUB_BODY.to_string(),
                            state: BodyState::Placeholder,
                        });
                    }
                }
            }
        }
        segments.insert(module.clone(), segs);
    }

    let crate_name = "translated";
    let manifest = format!(
        "[package]\nname = \"{crate_name}\"\nversion = \"0.1.0\"\nedition = \"2021\"\n\n[lib]\npath = \"src/lib.rs\"\n\n[profile.dev]\noverflow-checks = false\n\n[profile.release]\noverflow-checks = false\n"
    );

    let mut lib_rs = String::from(
        "#![allow(non_snake_case, non_camel_case_types, non_upper_case_globals)]\n#![allow(dead_code, unused_imports, unused_variables, unused_mut, unused_parens)]\n#![allow(unused_macros, unused_assignments, unused_unsafe)]\n#![deny(unsafe_code)]\n\n#[allow(unsafe_code)]\npub mod runtime;\npub mod hub;\n",
    );
    for m in &module_order {
        lib_rs.push_str(&format!("pub mod {m};\n"));
    }

    let runtime_files: Vec<(String, String)> = crate::runtime::RUNTIME_FILES
        .iter()
        .chain(std::iter::once(&crate::runtime::LIBC_FILE))
        .map(|(n, t)| (n.to_string(), t.to_string()))
        .collect();

    Ok(SkeletonProject {
        manifest,
        lib_rs,
        reexport_hub: hub,
        runtime_files,
        segments,
        module_order,
    })
}

#[cfg(test)]
mod tests;
