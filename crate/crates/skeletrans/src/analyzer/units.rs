//! Slicing a project into translation units and scheduling them.
//!
//! One unit per type declaration, per macro, and per function body.
//! Definitions and macros come before functions; functions are ordered
//! dependency-topologically over the call graph (callees first), with
//! cycles broken lexicographically by (file, name).

use super::lexer;
use super::metadata::ProjectMetadata;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitKind {
    Definition,
    Macro,
    Function,
}

impl UnitKind {
    /// The word substituted into the translation prompt.
    pub fn prompt_word(&self) -> &'static str {
        match self {
            UnitKind::Definition => "definition",
            UnitKind::Macro => "macro",
            UnitKind::Function => "function",
        }
    }
}

/// One translatable item with its C source, dependencies, and target slot.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranslationUnit {
    /// Stable slot id: `module::name`.
    pub slot_id: String,
    pub kind: UnitKind,
    pub name: String,
    pub file: PathBuf,
    /// Raw C text of the item.
    pub c_source: String,
    /// Names of project entities this unit references.
    pub dependencies: Vec<String>,
}

/// Logical module name for one source file, ignoring collisions. Prefer
/// [`module_map`] when mapping a whole project.
pub fn module_of_file(path: &std::path::Path) -> String {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("module");
    crate::cmap::sanitize_module_name(stem)
}

/// Map every project file to its logical module. Headers and sources
/// sharing a stem (same directory) merge into one module; stem collisions
/// across directories get numeric suffixes in sorted order.
pub fn module_map(files: &[PathBuf]) -> BTreeMap<PathBuf, String> {
    let mut groups: BTreeMap<PathBuf, Vec<&PathBuf>> = BTreeMap::new();
    for f in files {
        groups.entry(f.with_extension("")).or_default().push(f);
    }
    let mut taken: BTreeMap<String, usize> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for (key, members) in groups {
        let base = module_of_file(&key);
        let n = taken.entry(base.clone()).or_insert(0);
        *n += 1;
        let name = if *n == 1 {
            base
        } else {
            format!("{base}_{n}")
        };
        for m in members {
            out.insert(m.clone(), name.clone());
        }
    }
    out
}

pub fn slice_units(metadata: &ProjectMetadata) -> Vec<TranslationUnit> {
    let modules = module_map(&metadata.files);
    let module_of = |f: &PathBuf| -> String {
        modules
            .get(f)
            .cloned()
            .unwrap_or_else(|| module_of_file(f))
    };
    let mut units = Vec::new();

    let mut defs: Vec<_> = metadata.type_decls.iter().collect();
    defs.sort_by_key(|d| (d.file.clone(), d.span.0));
    for d in defs {
        units.push(TranslationUnit {
            slot_id: format!("{}::{}", module_of(&d.file), d.name),
            kind: UnitKind::Definition,
            name: d.name.clone(),
            file: d.file.clone(),
            c_source: d.raw.clone(),
            dependencies: deps_of(&d.raw, &d.name, metadata),
        });
    }

    let mut macros: Vec<_> = metadata.macros.iter().collect();
    macros.sort_by_key(|m| (m.file.clone(), m.offset));
    for m in macros {
        units.push(TranslationUnit {
            slot_id: format!("{}::{}", module_of(&m.file), m.name),
            kind: UnitKind::Macro,
            name: m.name.clone(),
            file: m.file.clone(),
            c_source: m.raw.clone(),
            dependencies: deps_of(&m.body, &m.name, metadata),
        });
    }

    for name in function_order(metadata) {
        let sig = metadata.function(&name).expect("ordered name has signature");
        let c_source = sig
            .body_text
            .as_ref()
            .map(|b| format!("{} {}", render_signature(sig), b))
            .unwrap_or_else(|| render_signature(sig));
        units.push(TranslationUnit {
            slot_id: format!("{}::{}", module_of(&sig.source_file), sig.name),
            kind: UnitKind::Function,
            name: sig.name.clone(),
            file: sig.source_file.clone(),
            dependencies: deps_of(
                sig.body_text.as_deref().unwrap_or(""),
                &sig.name,
                metadata,
            ),
            c_source,
        });
    }

    units
}

fn render_signature(sig: &super::metadata::FunctionSignature) -> String {
    let params = if sig.params.is_empty() && !sig.is_variadic {
        "void".to_string()
    } else {
        let mut parts: Vec<String> = sig
            .params
            .iter()
            .map(|(n, t)| t.to_c_string(n))
            .collect();
        if sig.is_variadic {
            parts.push("...".to_string());
        }
        parts.join(", ")
    };
    let head = if sig.is_static { "static " } else { "" };
    format!(
        "{head}{} {}({params})",
        sig.return_type.to_c_string(""),
        sig.name
    )
}

/// Project entities referenced by a snippet: every identifier present in
/// the declaration table, excluding the entity itself.
fn deps_of(code: &str, self_name: &str, metadata: &ProjectMetadata) -> Vec<String> {
    lexer::ident_tokens(code)
        .into_iter()
        .filter(|id| id != self_name && metadata.decl_table.contains_key(id))
        .collect()
}

/// Kahn's algorithm over the call-graph condensation: callees before
/// callers, deterministic tie-break by (file, name).
fn function_order(metadata: &ProjectMetadata) -> Vec<String> {
    let names: Vec<String> = metadata.signatures.iter().map(|s| s.name.clone()).collect();
    let file_of: BTreeMap<&str, &PathBuf> = metadata
        .signatures
        .iter()
        .map(|s| (s.name.as_str(), &s.source_file))
        .collect();
    let sort_key = |n: &str| (file_of[n].clone(), n.to_string());

    let sccs = condensation(&names, &metadata.call_graph);
    // Map name → component index.
    let mut comp_of: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, comp) in sccs.iter().enumerate() {
        for n in comp {
            comp_of.insert(n.as_str(), i);
        }
    }
    // Component DAG: edge callee-comp → caller-comp.
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); sccs.len()];
    let mut indeg = vec![0usize; sccs.len()];
    for e in &metadata.call_graph {
        let (Some(&cc), Some(&rc)) = (comp_of.get(e.callee.as_str()), comp_of.get(e.caller.as_str()))
        else {
            continue;
        };
        if cc != rc && succ[cc].insert(rc) {
            indeg[rc] += 1;
        }
    }
    // Ready components ordered by their minimal (file, name) key.
    let comp_key = |i: usize| {
        sccs[i]
            .iter()
            .map(|n| sort_key(n))
            .min()
            .expect("non-empty component")
    };
    let mut ready: BTreeSet<((PathBuf, String), usize)> = (0..sccs.len())
        .filter(|&i| indeg[i] == 0)
        .map(|i| (comp_key(i), i))
        .collect();
    let mut order = Vec::new();
    while let Some(entry) = ready.iter().next().cloned() {
        ready.remove(&entry);
        let (_, i) = entry;
        let mut members: Vec<&String> = sccs[i].iter().collect();
        members.sort_by_key(|n| sort_key(n));
        order.extend(members.into_iter().cloned());
        for &next in &succ[i] {
            indeg[next] -= 1;
            if indeg[next] == 0 {
                ready.insert((comp_key(next), next));
            }
        }
    }
    order
}

/// Tarjan strongly-connected components, deterministic over sorted input.
fn condensation(
    names: &[String],
    edges: &[super::metadata::CallEdge],
) -> Vec<Vec<String>> {
    let index_of: BTreeMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
    for e in edges {
        if let (Some(&a), Some(&b)) = (index_of.get(e.callee.as_str()), index_of.get(e.caller.as_str()))
        {
            adj[a].push(b);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }

    struct Tarjan<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        counter: usize,
        comps: Vec<Vec<usize>>,
    }
    impl Tarjan<'_> {
        fn visit(&mut self, v: usize) {
            self.index[v] = Some(self.counter);
            self.low[v] = self.counter;
            self.counter += 1;
            self.stack.push(v);
            self.on_stack[v] = true;
            for &w in &self.adj[v] {
                if self.index[w].is_none() {
                    self.visit(w);
                    self.low[v] = self.low[v].min(self.low[w]);
                } else if self.on_stack[w] {
                    self.low[v] = self.low[v].min(self.index[w].unwrap());
                }
            }
            if Some(self.low[v]) == self.index[v] {
                let mut comp = Vec::new();
                while let Some(w) = self.stack.pop() {
                    self.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                self.comps.push(comp);
            }
        }
    }
    let mut t = Tarjan {
        adj: &adj,
        index: vec![None; names.len()],
        low: vec![0; names.len()],
        on_stack: vec![false; names.len()],
        stack: Vec::new(),
        counter: 0,
        comps: Vec::new(),
    };
    for v in 0..names.len() {
        if t.index[v].is_none() {
            t.visit(v);
        }
    }
    t.comps
        .into_iter()
        .map(|c| c.into_iter().map(|i| names[i].clone()).collect())
        .collect()
}
