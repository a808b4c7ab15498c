//! Domain types for project metadata and their invariants.

use super::AnalyzerError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

pub const METADATA_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IntWidth {
    Short,
    Int,
    Long,
    LongLong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AggregateKind {
    Struct,
    Union,
    Enum,
}

/// Base kind of a C type, before pointers/arrays are applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseType {
    Void,
    /// Plain `char`; `signed`/`unsigned` chars are Int(Short-of-one-byte)
    /// equivalents handled via `Char { signed: Some(..) }`.
    Char {
        signed: Option<bool>,
    },
    Int {
        width: IntWidth,
        unsigned: bool,
    },
    Float,
    Double,
    Bool,
    /// A tagged aggregate reference: `struct foo`, `union u`, `enum e`.
    Aggregate {
        kind: AggregateKind,
        name: String,
    },
    /// A typedef name (including `size_t`, `uint32_t`, project aliases).
    Alias(String),
}

/// Shape of a function-pointer type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncPtrShape {
    pub params: Vec<CType>,
    pub ret: CType,
}

/// A C type as recovered by the analyzer.
///
/// Invariants: `array_dims`/`func_ptr` are mutually exclusive with
/// `is_va_list`; the type round-trips to a canonical declarator string via
/// [`CType::to_c_string`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CType {
    pub base: BaseType,
    pub pointer_depth: usize,
    /// Ordered array extents, outermost first. An extent is a constant
    /// expression rendered as text; empty string for unsized `[]`.
    pub array_dims: Vec<String>,
    pub func_ptr: Option<Box<FuncPtrShape>>,
    pub is_const: bool,
    /// True for `va_list` parameters.
    pub is_va_list: bool,
}

impl CType {
    pub fn scalar(base: BaseType) -> Self {
        CType {
            base,
            pointer_depth: 0,
            array_dims: Vec::new(),
            func_ptr: None,
            is_const: false,
            is_va_list: false,
        }
    }

    pub fn void() -> Self {
        Self::scalar(BaseType::Void)
    }

    pub fn int() -> Self {
        Self::scalar(BaseType::Int {
            width: IntWidth::Int,
            unsigned: false,
        })
    }

    pub fn va_list() -> Self {
        let mut t = Self::scalar(BaseType::Alias("va_list".into()));
        t.is_va_list = true;
        t
    }

    pub fn is_void(&self) -> bool {
        self.base == BaseType::Void && self.pointer_depth == 0 && self.array_dims.is_empty()
    }

    fn base_c_string(&self) -> String {
        let mut s = String::new();
        if self.is_const {
            s.push_str("const ");
        }
        let b = match &self.base {
            BaseType::Void => "void".to_string(),
            BaseType::Char { signed: None } => "char".to_string(),
            BaseType::Char {
                signed: Some(true),
            } => "signed char".to_string(),
            BaseType::Char {
                signed: Some(false),
            } => "unsigned char".to_string(),
            BaseType::Int { width, unsigned } => {
                let w = match width {
                    IntWidth::Short => "short",
                    IntWidth::Int => "int",
                    IntWidth::Long => "long",
                    IntWidth::LongLong => "long long",
                };
                if *unsigned {
                    format!("unsigned {w}")
                } else {
                    w.to_string()
                }
            }
            BaseType::Float => "float".to_string(),
            BaseType::Double => "double".to_string(),
            BaseType::Bool => "_Bool".to_string(),
            BaseType::Aggregate { kind, name } => {
                let k = match kind {
                    AggregateKind::Struct => "struct",
                    AggregateKind::Union => "union",
                    AggregateKind::Enum => "enum",
                };
                format!("{k} {name}")
            }
            BaseType::Alias(name) => name.clone(),
        };
        s.push_str(&b);
        s
    }

    /// Render this type as a canonical C declarator for the given name
    /// (empty name for abstract declarators).
    pub fn to_c_string(&self, name: &str) -> String {
        if let Some(fp) = &self.func_ptr {
            let params = fp
                .params
                .iter()
                .map(|p| p.to_c_string(""))
                .collect::<Vec<_>>()
                .join(", ");
            let stars = "*".repeat(self.pointer_depth.max(1));
            return format!(
                "{} ({stars}{name})({params})",
                fp.ret.to_c_string("")
            )
            .trim()
            .to_string();
        }
        let mut s = self.base_c_string();
        if self.pointer_depth > 0 {
            s.push(' ');
            s.push_str(&"*".repeat(self.pointer_depth));
        }
        if !name.is_empty() {
            if self.pointer_depth == 0 {
                s.push(' ');
            }
            s.push_str(name);
        }
        for dim in &self.array_dims {
            s.push('[');
            s.push_str(dim);
            s.push(']');
        }
        s.trim().to_string()
    }
}

/// One `#include` directive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Include {
    pub target: String,
    pub system: bool,
}

/// One `#define`. `params` is `None` for object-like macros.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacroDef {
    pub name: String,
    pub params: Option<Vec<String>>,
    pub body: String,
    pub file: PathBuf,
    pub offset: usize,
    /// Raw `#define ...` text, continuations folded.
    pub raw: String,
}

/// A struct/union/enum declaration or a typedef.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeDecl {
    /// The name references resolve to: the typedef alias when one exists,
    /// otherwise the aggregate tag.
    pub name: String,
    /// The aggregate tag when it differs from `name`
    /// (`typedef struct tag { .. } Alias;`).
    pub tag: Option<String>,
    pub kind: TypeDeclKind,
    pub file: PathBuf,
    pub span: (usize, usize),
    /// Raw C text of the whole declaration.
    pub raw: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TypeDeclKind {
    /// `struct name { fields }` / `union` — `fields` lists (name, type).
    Aggregate {
        kind: AggregateKind,
        fields: Vec<(String, CType)>,
    },
    /// `enum name { variants }` — values resolved where constant.
    Enum { variants: Vec<(String, i64)> },
    /// `typedef <ty> name;`
    Typedef { target: CType },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalVar {
    pub name: String,
    pub ty: CType,
    pub initializer: Option<String>,
    pub is_static: bool,
    pub file: PathBuf,
    pub span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionSignature {
    pub name: String,
    pub params: Vec<(String, CType)>,
    pub return_type: CType,
    pub is_variadic: bool,
    pub is_static: bool,
    pub source_file: PathBuf,
    /// Byte range of the whole definition in `source_file`.
    pub source_span: (usize, usize),
    /// Raw text of the body block `{ ... }`, when this is a definition.
    pub body_text: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CallEdge {
    pub caller: String,
    pub callee: String,
}

/// Which namespace an identifier was defined in; duplicate detection is
/// per-namespace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Namespace {
    Ordinary,
    Tag,
    Macro,
}

/// `name` of a typedef (or the alias of a `typedef struct`) lives in the
/// ordinary identifier namespace; a bare aggregate's tag lives in the tag
/// namespace.
fn type_decl_namespace(t: &TypeDecl) -> Namespace {
    match t.kind {
        TypeDeclKind::Typedef { .. } => Namespace::Ordinary,
        _ => {
            if t.tag.as_deref() == Some(t.name.as_str()) {
                Namespace::Tag
            } else {
                Namespace::Ordinary
            }
        }
    }
}

/// Everything the analyzer recovers from one source file.
#[derive(Debug, Default, Clone)]
pub struct FileFacts {
    pub includes: Vec<Include>,
    pub macros: Vec<MacroDef>,
    pub type_decls: Vec<TypeDecl>,
    pub globals: Vec<GlobalVar>,
    pub signatures: Vec<FunctionSignature>,
    /// Prototypes (no body) — merged into signatures when a definition
    /// exists elsewhere, otherwise recorded as project-external.
    pub prototypes: Vec<FunctionSignature>,
    pub warnings: Vec<String>,
}

/// The full structural description of a C project.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectMetadata {
    pub schema_version: u32,
    /// Source/header paths relative to the project root, lexicographic.
    pub files: Vec<PathBuf>,
    /// Per-file include directives.
    pub includes: BTreeMap<PathBuf, Vec<Include>>,
    pub macros: Vec<MacroDef>,
    pub type_decls: Vec<TypeDecl>,
    pub globals: Vec<GlobalVar>,
    pub signatures: Vec<FunctionSignature>,
    /// Directed call edges (caller invokes callee), both project functions.
    pub call_graph: Vec<CallEdge>,
    /// Per-function invocations of names the project does not define.
    pub external_refs: BTreeMap<String, BTreeSet<String>>,
    /// Identifier → defining file (all namespaces folded; uniqueness is
    /// enforced per namespace during construction).
    pub decl_table: BTreeMap<String, PathBuf>,
    /// Function prototypes with no project definition.
    pub undefined_prototypes: Vec<String>,
    pub warnings: Vec<String>,
}

impl ProjectMetadata {
    pub fn new(files: Vec<PathBuf>) -> Self {
        ProjectMetadata {
            schema_version: METADATA_SCHEMA_VERSION,
            files,
            includes: BTreeMap::new(),
            macros: Vec::new(),
            type_decls: Vec::new(),
            globals: Vec::new(),
            signatures: Vec::new(),
            call_graph: Vec::new(),
            external_refs: BTreeMap::new(),
            decl_table: BTreeMap::new(),
            undefined_prototypes: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn declare(
        &mut self,
        name: &str,
        namespace: Namespace,
        file: &Path,
        dups: &mut BTreeMap<(String, Namespace), PathBuf>,
        record_in_table: bool,
    ) -> Result<(), AnalyzerError> {
        let key = (name.to_string(), namespace);
        if let Some(first) = dups.get(&key) {
            return Err(AnalyzerError::DuplicateDefinition {
                name: name.to_string(),
                first: first.clone(),
                second: file.to_path_buf(),
            });
        }
        dups.insert(key, file.to_path_buf());
        if record_in_table {
            self.decl_table
                .entry(name.to_string())
                .or_insert_with(|| file.to_path_buf());
        }
        Ok(())
    }

    /// Fold one file's facts into the project. Called in file order.
    pub fn merge_file(&mut self, file: &Path, facts: FileFacts) -> Result<(), AnalyzerError> {
        // Re-derive the per-namespace table from what we already hold so
        // duplicate detection spans files.
        let mut dups: BTreeMap<(String, Namespace), PathBuf> = BTreeMap::new();
        for m in &self.macros {
            dups.insert((m.name.clone(), Namespace::Macro), m.file.clone());
        }
        for t in &self.type_decls {
            dups.insert((t.name.clone(), type_decl_namespace(t)), t.file.clone());
            if let Some(tag) = &t.tag {
                if tag != &t.name {
                    dups.insert((tag.clone(), Namespace::Tag), t.file.clone());
                }
            }
        }
        for g in &self.globals {
            dups.insert((g.name.clone(), Namespace::Ordinary), g.file.clone());
        }
        for s in &self.signatures {
            dups.insert((s.name.clone(), Namespace::Ordinary), s.source_file.clone());
        }

        for m in &facts.macros {
            self.declare(&m.name, Namespace::Macro, file, &mut dups, true)?;
        }
        for t in &facts.type_decls {
            self.declare(&t.name, type_decl_namespace(t), file, &mut dups, true)?;
            if let Some(tag) = &t.tag {
                if tag != &t.name {
                    // The tag is tracked for duplicate detection only; the
                    // emitted item (and hub line) carries the alias name.
                    self.declare(tag, Namespace::Tag, file, &mut dups, false)?;
                }
            }
        }
        for g in &facts.globals {
            self.declare(&g.name, Namespace::Ordinary, file, &mut dups, true)?;
        }
        for s in &facts.signatures {
            self.declare(&s.name, Namespace::Ordinary, file, &mut dups, true)?;
        }

        self.includes.insert(file.to_path_buf(), facts.includes);
        self.macros.extend(facts.macros);
        self.type_decls.extend(facts.type_decls);
        self.globals.extend(facts.globals);
        self.signatures.extend(facts.signatures);
        for p in facts.prototypes {
            self.undefined_prototypes.push(p.name);
        }
        self.warnings.extend(facts.warnings);
        Ok(())
    }

    /// Final pass: drop prototype records that turned out to have project
    /// definitions, sort for determinism.
    pub fn finish(&mut self) -> Result<(), AnalyzerError> {
        let defined: BTreeSet<String> =
            self.signatures.iter().map(|s| s.name.clone()).collect();
        self.undefined_prototypes.retain(|n| !defined.contains(n));
        self.undefined_prototypes.sort();
        self.undefined_prototypes.dedup();
        Ok(())
    }

    pub fn function(&self, name: &str) -> Option<&FunctionSignature> {
        self.signatures.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("metadata serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}
