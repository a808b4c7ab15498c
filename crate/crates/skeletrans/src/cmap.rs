//! Rule-based feature mapping from C declarations to the Rust surface the
//! compatibility runtime provides.
//!
//! Scalar and pointer shapes follow a fixed table: fixed-size arrays become
//! `Array<T, N>`, pointers become `Ptr<T>`, `char *` becomes `Ptr<u8>`,
//! function pointers become `FuncPtr<fn(..) -> ..>`, `FILE *` becomes
//! `FilePtr`, `va_list` becomes `VaList`, and `void *` becomes `Ptr<Void>`.
//! Integer widths map to fixed-width integers (LP64 model for `long`).
//!
//! Beyond types, this module rule-maps the declarations a compilable
//! skeleton needs even before any backend is consulted: object-like macros
//! become consts, function-like macros become `macro_rules!`, aggregates
//! become plain structs, enums become an alias plus consts, and globals
//! become lazily initialized `Global<T>` statics.

use crate::analyzer::lexer::{Lexer, TokKind};
use crate::analyzer::{
    BaseType, CType, FunctionSignature, GlobalVar, IntWidth, MacroDef, ProjectMetadata, TypeDecl,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CmapError {
    #[error("unsupported C type: {decl}")]
    UnsupportedType { decl: String },
}

/// Rust keywords that must not be emitted as identifiers.
const RUST_KEYWORDS: [&str; 51] = [
    "as", "break", "const", "continue", "crate", "dyn", "else", "enum", "extern", "false", "fn",
    "for", "if", "impl", "in", "let", "loop", "match", "mod", "move", "mut", "pub", "ref",
    "return", "self", "Self", "static", "struct", "super", "trait", "true", "type", "unsafe",
    "use", "where", "while", "async", "await", "abstract", "become", "box", "do", "final",
    "macro", "override", "priv", "typeof", "unsized", "virtual", "yield", "try",
];

/// Sanitize a C identifier for emission: Rust keywords get a trailing `_`.
pub fn sanitize_ident(name: &str) -> String {
    if RUST_KEYWORDS.contains(&name) {
        format!("{name}_")
    } else {
        name.to_string()
    }
}

/// Logical module name from a file stem: lowercase, invalid characters
/// replaced by `_`, keyword-safe, never starting with a digit.
pub fn sanitize_module_name(stem: &str) -> String {
    let mut s: String = stem
        .to_lowercase()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if s.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        s.insert(0, '_');
    }
    if s.is_empty() {
        s.push_str("module");
    }
    sanitize_ident(&s)
}

/// Metadata-aware mapper; metadata is used to resolve aggregate tags to
/// their emitted (typedef-preferred) names.
pub struct TypeMapper<'a> {
    pub metadata: Option<&'a ProjectMetadata>,
}

impl<'a> TypeMapper<'a> {
    pub fn new(metadata: Option<&'a ProjectMetadata>) -> Self {
        TypeMapper { metadata }
    }

    fn resolve_tag(&self, tag: &str) -> String {
        if let Some(md) = self.metadata {
            for d in &md.type_decls {
                if d.tag.as_deref() == Some(tag) || d.name == tag {
                    return sanitize_ident(&d.name);
                }
            }
        }
        sanitize_ident(tag)
    }

    fn map_base(&self, c: &CType) -> Result<String, CmapError> {
        Ok(match &c.base {
            BaseType::Void => "Void".to_string(),
            BaseType::Char { signed: Some(true) } => "i8".to_string(),
            BaseType::Char { .. } => "u8".to_string(),
            BaseType::Int { width, unsigned } => match (width, unsigned) {
                (IntWidth::Short, false) => "i16",
                (IntWidth::Short, true) => "u16",
                (IntWidth::Int, false) => "i32",
                (IntWidth::Int, true) => "u32",
                (IntWidth::Long, false) | (IntWidth::LongLong, false) => "i64",
                (IntWidth::Long, true) | (IntWidth::LongLong, true) => "u64",
            }
            .to_string(),
            BaseType::Float => "f32".to_string(),
            BaseType::Double => "f64".to_string(),
            BaseType::Bool => "bool".to_string(),
            BaseType::Aggregate { name, .. } => {
                if name.is_empty() {
                    return Err(CmapError::UnsupportedType {
                        decl: c.to_c_string(""),
                    });
                }
                self.resolve_tag(name)
            }
            BaseType::Alias(name) => match name.as_str() {
                "uint8_t" | "u_char" | "BYTE" => "u8".to_string(),
                "int8_t" => "i8".to_string(),
                "uint16_t" | "u_short" => "u16".to_string(),
                "int16_t" => "i16".to_string(),
                "uint32_t" | "u_int" => "u32".to_string(),
                "int32_t" => "i32".to_string(),
                "uint64_t" => "u64".to_string(),
                "int64_t" => "i64".to_string(),
                "size_t" => "usize".to_string(),
                "ssize_t" | "ptrdiff_t" | "intptr_t" => "isize".to_string(),
                "uintptr_t" => "usize".to_string(),
                "FILE" => "FILE".to_string(), // only behind a pointer; see map_type
                "va_list" => "VaList".to_string(),
                other => sanitize_ident(other),
            },
        })
    }

    /// Map a C type to its target type text.
    pub fn map_type(&self, c: &CType) -> Result<String, CmapError> {
        if c.is_va_list {
            if c.pointer_depth > 0 || !c.array_dims.is_empty() {
                return Err(CmapError::UnsupportedType {
                    decl: c.to_c_string(""),
                });
            }
            return Ok("VaList".to_string());
        }
        if let Some(fp) = &c.func_ptr {
            let params = fp
                .params
                .iter()
                .map(|p| self.map_type(p))
                .collect::<Result<Vec<_>, _>>()?
                .join(", ");
            let sig = if fp.ret.is_void() {
                format!("fn({params})")
            } else {
                format!("fn({params}) -> {}", self.map_type(&fp.ret)?)
            };
            let mut text = format!("FuncPtr<{sig}>");
            // Extra pointer levels beyond the function-pointer itself.
            for _ in 1..c.pointer_depth {
                text = format!("Ptr<{text}>");
            }
            return Ok(text);
        }

        let mut depth = c.pointer_depth;
        let mut inner = if c.base == BaseType::Alias("FILE".to_string()) {
            if depth == 0 {
                return Err(CmapError::UnsupportedType {
                    decl: c.to_c_string(""),
                });
            }
            depth -= 1;
            "FilePtr".to_string()
        } else {
            if c.base == BaseType::Void && depth == 0 && c.array_dims.is_empty() {
                return Err(CmapError::UnsupportedType {
                    decl: c.to_c_string(""),
                });
            }
            self.map_base(c)?
        };
        for _ in 0..depth {
            inner = format!("Ptr<{inner}>");
        }
        // Dims apply outermost-first; build from the innermost out.
        for dim in c.array_dims.iter().rev() {
            if dim.trim().is_empty() {
                inner = format!("Ptr<{inner}>");
            } else {
                inner = format!("Array<{inner}, {}>", map_array_extent(dim));
            }
        }
        Ok(inner)
    }

    /// Map a function signature to its target signature text (no body).
    pub fn map_signature(&self, sig: &FunctionSignature) -> Result<String, CmapError> {
        let mut params: Vec<String> = Vec::new();
        for (name, ty) in &sig.params {
            params.push(format!(
                "{}: {}",
                sanitize_ident(name),
                self.map_type(ty)?
            ));
        }
        if sig.is_variadic {
            params.push("va: VaList".to_string());
        }
        let name = sanitize_ident(&sig.name);
        let head = format!("pub fn {name}({})", params.join(", "));
        if sig.return_type.is_void() {
            Ok(head)
        } else {
            Ok(format!("{head} -> {}", self.map_type(&sig.return_type)?))
        }
    }

    /// Map a signature to a type-checked stub whose body is exactly the
    /// placeholder invocation.
    pub fn map_stub(&self, sig: &FunctionSignature) -> Result<String, CmapError> {
        Ok(format!("{} {}", self.map_signature(sig)?, STUB_BODY))
    }

    /// Rule-map one type declaration to an item.
    pub fn map_type_decl(&self, decl: &TypeDecl) -> Result<String, CmapError> {
        use crate::analyzer::TypeDeclKind::*;
        let name = sanitize_ident(&decl.name);
        match &decl.kind {
            Typedef { target } => Ok(format!("pub type {name} = {};", self.map_type(target)?)),
            Enum { variants } => {
                let mut out = format!("pub type {name} = i32;\n");
                for (v, val) in variants {
                    out.push_str(&format!("pub const {}: i32 = {val};\n", sanitize_ident(v)));
                }
                Ok(out.trim_end().to_string())
            }
            Aggregate { kind, fields } => {
                // Unions are mapped structurally (all members live side by
                // side); aliasing between members is not reproduced.
                let _ = kind;
                let mut out = String::from("#[derive(Debug, Clone, Default)]\n");
                out.push_str(&format!("pub struct {name} {{\n"));
                for (fname, fty) in fields {
                    out.push_str(&format!(
                        "    pub {}: {},\n",
                        sanitize_ident(fname),
                        self.map_type(fty)?
                    ));
                }
                out.push('}');
                Ok(out)
            }
        }
    }

    /// Rule-map a global variable to a lazily initialized `Global`.
    pub fn map_global(&self, g: &GlobalVar) -> Result<String, CmapError> {
        let ty = self.map_type(&g.ty)?;
        let init = g
            .initializer
            .as_deref()
            .and_then(translate_initializer)
            .unwrap_or_else(|| "Default::default()".to_string());
        Ok(format!(
            "global!(pub static {}: {ty} = {init});",
            sanitize_ident(&g.name)
        ))
    }

    /// Rule-map a macro definition: a const when the body is a constant
    /// integer/float expression, otherwise a `macro_rules!` rewrite of the
    /// body; bodies outside the expression subset become placeholder
    /// macros that type-check at any expression call site.
    pub fn map_macro(&self, m: &MacroDef) -> String {
        let name = sanitize_ident(&m.name);
        match &m.params {
            None => {
                if m.body.trim().is_empty() {
                    return format!("pub const {name}: bool = true;");
                }
                if let Some((text, ty)) = const_int_text(&m.body) {
                    return format!("pub const {name}: {ty} = {text};");
                }
                if let Some(expr) = rewrite_macro_body(&m.body, &[]) {
                    return format!(
                        "#[macro_export]\nmacro_rules! {name} {{ () => {{ {expr} }}; }}\npub use {name};"
                    );
                }
                format!(
                    "#[macro_export]\nmacro_rules! {name} {{ () => {{ unimplemented!() }}; }}\npub use {name};"
                )
            }
            Some(params) => {
                let args = params
                    .iter()
                    .map(|p| format!("${}:expr", sanitize_ident(p)))
                    .collect::<Vec<_>>()
                    .join(", ");
                let body = rewrite_macro_body(&m.body, params)
                    .unwrap_or_else(|| "unimplemented!()".to_string());
                format!(
                    "#[macro_export]\nmacro_rules! {name} {{ ({args}) => {{ {body} }}; }}\npub use {name};"
                )
            }
        }
    }
}

/// The exact placeholder body every stub carries.
pub const STUB_BODY: &str = "{ unimplemented!() }";

/// Map a type with no project context (tags map to their sanitized names).
pub fn map_type(c: &CType) -> Result<String, CmapError> {
    TypeMapper::new(None).map_type(c)
}

/// Map a signature with no project context.
pub fn map_signature(sig: &FunctionSignature) -> Result<String, CmapError> {
    TypeMapper::new(None).map_signature(sig)
}

fn map_array_extent(dim: &str) -> String {
    let trimmed = dim.trim();
    if let Some(v) = crate::analyzer::parse_c_int_literal(trimmed) {
        return v.to_string();
    }
    // Named or compound constant: force the extent to usize in a const
    // block so i32 consts work as extents.
    let expr: String = trimmed.to_string();
    format!("{{ ({expr}) as usize }}")
}

/// Translate a simple C initializer to a Rust expression: integer/float
/// literals, string literals, char literals, brace lists, and expressions
/// over those. `None` when outside that subset.
pub fn translate_initializer(init: &str) -> Option<String> {
    let trimmed = init.trim();
    if let Some(body) = trimmed.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        let parts: Vec<String> = if body.trim().is_empty() {
            Vec::new()
        } else {
            split_top_level(body)
                .into_iter()
                .map(|p| translate_initializer(&p))
                .collect::<Option<Vec<_>>>()?
        };
        return Some(format!("arr![{}]", parts.join(", ")));
    }
    rewrite_macro_body(trimmed, &[])
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' | '{' => {
                depth += 1;
                cur.push(c);
            }
            ')' | ']' | '}' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        parts.push(cur.trim().to_string());
    }
    parts
}

/// Constant-int detection for macro bodies: returns the literal text
/// (suffix-stripped) and an inferred Rust type.
fn const_int_text(body: &str) -> Option<(String, &'static str)> {
    let toks = Lexer::new(body).tokens().ok()?;
    // Allow a parenthesized single literal, optionally negated.
    let mut vals: Vec<&str> = Vec::new();
    let mut neg = false;
    for t in &toks {
        match (&t.kind, t.text.as_str()) {
            (TokKind::Punct, "(") | (TokKind::Punct, ")") => {}
            (TokKind::Punct, "-") if vals.is_empty() => neg = true,
            (TokKind::Number, _) => vals.push(&t.text),
            _ => return None,
        }
    }
    if vals.len() != 1 {
        return None;
    }
    let raw = vals[0];
    if raw.contains('.') || (raw.contains(['e', 'E']) && !raw.starts_with("0x")) {
        let lit = raw.trim_end_matches(['f', 'F', 'l', 'L']);
        let text = if neg { format!("-{lit}") } else { lit.to_string() };
        return Some((text, "f64"));
    }
    let unsigned_suffix = raw.to_ascii_lowercase().contains('u');
    let v = crate::analyzer::parse_c_int_literal(raw)?;
    let v = if neg { -v } else { v };
    let hexish = raw.starts_with("0x") || raw.starts_with("0X");
    let ty = if unsigned_suffix {
        if v as u64 > u32::MAX as u64 {
            "u64"
        } else {
            "u32"
        }
    } else if v >= i32::MIN as i64 && v <= i32::MAX as i64 {
        "i32"
    } else if hexish && v >= 0 && v <= u32::MAX as i64 {
        "u32"
    } else {
        "i64"
    };
    // Preserve the radix of the original literal.
    let text = if hexish {
        let body = if v < 0 {
            format!("-0x{:x}", -(v as i128))
        } else {
            format!("0x{:x}", v)
        };
        body
    } else {
        v.to_string()
    };
    Some((text, ty))
}

/// Token-level rewrite of a C expression into Rust: macro parameters become
/// `$param`, `~` becomes `!`, literal suffixes are stripped, string
/// literals become `cstr!(..)`, char literals become their integer value.
/// Returns `None` on constructs outside the expression subset.
fn rewrite_macro_body(body: &str, params: &[String]) -> Option<String> {
    let toks = Lexer::new(body).tokens().ok()?;
    if toks.is_empty() {
        return None;
    }
    let mut out = String::new();
    let mut prev_ident = false;
    for t in &toks {
        let piece = match t.kind {
            TokKind::Ident => {
                if prev_ident {
                    return None; // two adjacent idents: a cast or decl, not an expression
                }
                prev_ident = true;
                if params.iter().any(|p| p == &t.text) {
                    format!("${}", sanitize_ident(&t.text))
                } else if crate::analyzer::lexer::is_c_keyword(&t.text) {
                    return None;
                } else {
                    sanitize_ident(&t.text)
                }
            }
            TokKind::Number => {
                prev_ident = false;
                let (text, _) = const_int_text(&t.text)?;
                text
            }
            TokKind::Str => {
                prev_ident = false;
                format!("cstr!({})", t.text)
            }
            TokKind::CharLit => {
                prev_ident = false;
                let inner = t.text.trim_matches('\'');
                let b = unescape_char(inner)?;
                format!("{}", b as i64)
            }
            TokKind::Punct => {
                prev_ident = false;
                match t.text.as_str() {
                    "~" => "!".to_string(),
                    "(" | ")" | "+" | "-" | "*" | "/" | "%" | "&" | "|" | "^" | "<<" | ">>"
                    | "<" | ">" | "<=" | ">=" | "==" | "!=" | "!" | "&&" | "||" => t.text.clone(),
                    _ => return None,
                }
            }
            TokKind::Directive => return None,
        };
        if !out.is_empty()
            && !matches!(piece.as_str(), ")")
            && !out.ends_with('(')
        {
            out.push(' ');
        }
        out.push_str(&piece);
    }
    Some(out)
}

fn unescape_char(s: &str) -> Option<u8> {
    let mut chars = s.chars();
    match chars.next()? {
        '\\' => match chars.next()? {
            'n' => Some(b'\n'),
            't' => Some(b'\t'),
            'r' => Some(b'\r'),
            '0' => Some(0),
            '\\' => Some(b'\\'),
            '\'' => Some(b'\''),
            '"' => Some(b'"'),
            _ => None,
        },
        c if c.is_ascii() => Some(c as u8),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::{AnalyzerOptions, CGrammar, DeclLevelGrammar};
    use std::path::Path;

    fn parse_decl(src: &str) -> crate::analyzer::FileFacts {
        DeclLevelGrammar
            .parse_file(Path::new("t.c"), src, &AnalyzerOptions::default())
            .unwrap()
    }

    fn norm(s: &str) -> String {
        s.split_whitespace().collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn table_row_array() {
        let facts = parse_decl("int a[3] = {1, 2, 3};");
        let g = &facts.globals[0];
        assert_eq!(map_type(&g.ty).unwrap(), "Array<i32, 3>");
        assert_eq!(
            translate_initializer(g.initializer.as_deref().unwrap()).unwrap(),
            "arr![1, 2, 3]"
        );
    }

    #[test]
    fn table_row_pointer() {
        let facts = parse_decl("int *a;");
        assert_eq!(map_type(&facts.globals[0].ty).unwrap(), "Ptr<i32>");
    }

    #[test]
    fn table_row_string() {
        let facts = parse_decl("char *c = \"Hello World!\";");
        let g = &facts.globals[0];
        assert_eq!(map_type(&g.ty).unwrap(), "Ptr<u8>");
        assert_eq!(
            translate_initializer(g.initializer.as_deref().unwrap()).unwrap(),
            "cstr!(\"Hello World!\")"
        );
    }

    #[test]
    fn table_row_function_pointer() {
        let facts = parse_decl("typedef int (*MyFunc)(const void *, const void *);");
        let decl = &facts.type_decls[0];
        let mapped = TypeMapper::new(None).map_type_decl(decl).unwrap();
        assert_eq!(
            norm(&mapped),
            norm("pub type MyFunc = FuncPtr<fn(Ptr<Void>, Ptr<Void>) -> i32>;")
        );
    }

    #[test]
    fn table_row_file() {
        let facts = parse_decl("FILE *f;");
        assert_eq!(map_type(&facts.globals[0].ty).unwrap(), "FilePtr");
    }

    #[test]
    fn table_row_va_list() {
        let facts = parse_decl("void logmsg(const char *fmt, va_list args) { }");
        let sig = &facts.signatures[0];
        assert_eq!(map_type(&sig.params[1].1).unwrap(), "VaList");
    }

    #[test]
    fn snprintf_signature_matches_pattern_card() {
        let facts =
            parse_decl("int snprintf(char *str, size_t size, const char *format, ...);");
        let sig = &facts.prototypes[0];
        assert_eq!(
            map_signature(sig).unwrap(),
            "pub fn snprintf(str: Ptr<u8>, size: usize, format: Ptr<u8>, va: VaList) -> i32"
        );
    }

    #[test]
    fn double_pointer_composes() {
        let facts = parse_decl("unsigned char **p;");
        assert_eq!(map_type(&facts.globals[0].ty).unwrap(), "Ptr<Ptr<u8>>");
    }

    #[test]
    fn void_fn_and_stub() {
        let facts = parse_decl("void f(void) { }\nint add(int a, int b) { return a + b; }");
        let mapper = TypeMapper::new(None);
        assert_eq!(mapper.map_signature(&facts.signatures[0]).unwrap(), "pub fn f()");
        assert_eq!(
            mapper.map_stub(&facts.signatures[1]).unwrap(),
            "pub fn add(a: i32, b: i32) -> i32 { unimplemented!() }"
        );
    }

    #[test]
    fn keyword_identifiers_get_suffixed() {
        assert_eq!(sanitize_ident("match"), "match_");
        assert_eq!(sanitize_ident("state"), "state");
        assert_eq!(sanitize_module_name("9Lib-X"), "_9lib_x");
    }

    #[test]
    fn macro_mapping_const_and_function_like() {
        let facts = parse_decl("#define S11 7\n#define BIG 0xd76aa478\n#define F(x, y, z) (((x) & (y)) | ((~x) & (z)))\n");
        let mapper = TypeMapper::new(None);
        assert_eq!(mapper.map_macro(&facts.macros[0]), "pub const S11: i32 = 7;");
        assert_eq!(
            mapper.map_macro(&facts.macros[1]),
            "pub const BIG: u32 = 0xd76aa478;"
        );
        let f = mapper.map_macro(&facts.macros[2]);
        assert!(f.contains("macro_rules! F"), "{f}");
        assert!(f.contains("$x:expr, $y:expr, $z:expr"), "{f}");
        assert!(f.contains("! $x"), "{f}");
    }

    #[test]
    fn map_type_injective_on_base_types_at_equal_shape() {
        use crate::analyzer::{BaseType, IntWidth};
        let bases = [
            BaseType::Char { signed: Some(true) },
            BaseType::Char { signed: None },
            BaseType::Int { width: IntWidth::Short, unsigned: false },
            BaseType::Int { width: IntWidth::Short, unsigned: true },
            BaseType::Int { width: IntWidth::Int, unsigned: false },
            BaseType::Int { width: IntWidth::Int, unsigned: true },
            BaseType::Int { width: IntWidth::Long, unsigned: false },
            BaseType::Int { width: IntWidth::Long, unsigned: true },
            BaseType::Float,
            BaseType::Double,
            BaseType::Bool,
        ];
        let mut seen = std::collections::BTreeSet::new();
        for b in bases {
            let t = map_type(&CType::scalar(b)).unwrap();
            assert!(seen.insert(t.clone()), "collision on {t}");
        }
    }
}
