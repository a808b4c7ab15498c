//! Declaration-level parsing of C sources.
//!
//! Accepted dialect: C99 without compiler extensions. GNU attribute
//! syntax (`__attribute__((..))`) is stripped with a warning. Preprocessor
//! conditionals are evaluated against the configured define set plus the
//! defines seen so far; a condition we cannot evaluate takes the primary
//! branch (as if the `#else` were absent) and records a warning.
//!
//! The grammar is intentionally shallow: it recovers declarations,
//! signatures and body spans, and leaves statement-level parsing to the
//! translation stage.

use super::lexer::{Lexer, TokKind, Token};
use super::metadata::{
    AggregateKind, BaseType, CType, FileFacts, FuncPtrShape, FunctionSignature, GlobalVar,
    Include, IntWidth, MacroDef, TypeDecl, TypeDeclKind,
};
use super::{AnalyzerError, AnalyzerOptions};
use std::collections::BTreeMap;
use std::path::Path;

/// Pluggable parsing backend: anything that can turn one source file into
/// [`FileFacts`] is a conformant front end.
pub trait CGrammar {
    fn parse_file(
        &self,
        path: &Path,
        text: &str,
        options: &AnalyzerOptions,
    ) -> Result<FileFacts, AnalyzerError>;
}

/// The built-in declaration-level front end.
pub struct DeclLevelGrammar;

impl CGrammar for DeclLevelGrammar {
    fn parse_file(
        &self,
        path: &Path,
        text: &str,
        options: &AnalyzerOptions,
    ) -> Result<FileFacts, AnalyzerError> {
        let tokens = Lexer::new(text)
            .tokens()
            .map_err(|(offset, message)| AnalyzerError::ParseFailure {
                path: path.to_path_buf(),
                offset,
                message,
            })?;
        let mut parser = FileParser {
            path,
            src: text,
            facts: FileFacts::default(),
            defines: options
                .defines
                .keys()
                .map(|k| (k.clone(), ()))
                .collect(),
        };
        let code = parser.preprocess(tokens)?;
        parser.parse_toplevel(&code)?;
        Ok(parser.facts)
    }
}

struct FileParser<'a> {
    path: &'a Path,
    src: &'a str,
    facts: FileFacts,
    defines: BTreeMap<String, ()>,
}

#[derive(Debug)]
struct CondFrame {
    active: bool,
    taken: bool,
    parent_active: bool,
}

impl<'a> FileParser<'a> {
    fn fail<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, AnalyzerError> {
        Err(AnalyzerError::ParseFailure {
            path: self.path.to_path_buf(),
            offset,
            message: message.into(),
        })
    }

    fn warn(&mut self, message: impl Into<String>) {
        self.facts
            .warnings
            .push(format!("{}: {}", self.path.display(), message.into()));
    }

    // ---- preprocessor ----

    fn preprocess(&mut self, tokens: Vec<Token>) -> Result<Vec<Token>, AnalyzerError> {
        let mut out = Vec::new();
        let mut stack: Vec<CondFrame> = Vec::new();
        for tok in tokens {
            let active = stack.last().map_or(true, |f| f.active);
            if tok.kind != TokKind::Directive {
                if active {
                    out.push(tok);
                }
                continue;
            }
            let raw = tok.text.clone();
            let body = raw.trim_start_matches('#').trim_start();
            let (word, rest) = split_word(body);
            match word {
                "include" if active => {
                    let rest = rest.trim();
                    if let Some(target) = rest.strip_prefix('<').and_then(|r| r.split('>').next())
                    {
                        self.facts.includes.push(Include {
                            target: target.trim().to_string(),
                            system: true,
                        });
                    } else if let Some(stripped) = rest.strip_prefix('"') {
                        if let Some(target) = stripped.split('"').next() {
                            self.facts.includes.push(Include {
                                target: target.to_string(),
                                system: false,
                            });
                        }
                    } else {
                        self.warn(format!("unparseable include: {raw}"));
                    }
                }
                "define" if active => {
                    self.parse_define(rest, &raw, tok.offset)?;
                }
                "undef" if active => {
                    let (name, _) = split_word(rest.trim_start());
                    self.defines.remove(name);
                }
                "ifdef" | "ifndef" => {
                    let (name, _) = split_word(rest.trim_start());
                    let defined = self.defines.contains_key(name);
                    let cond = if word == "ifdef" { defined } else { !defined };
                    stack.push(CondFrame {
                        active: active && cond,
                        taken: cond,
                        parent_active: active,
                    });
                }
                "if" => {
                    let cond = match self.eval_pp_expr(rest) {
                        Some(v) => v != 0,
                        None => {
                            self.warn(format!(
                                "cannot evaluate `{}`; taking the primary branch",
                                raw.trim()
                            ));
                            true
                        }
                    };
                    stack.push(CondFrame {
                        active: active && cond,
                        taken: cond,
                        parent_active: active,
                    });
                }
                "elif" => {
                    let frame = match stack.last_mut() {
                        Some(f) => f,
                        None => return self.fail(tok.offset, "#elif without #if"),
                    };
                    if frame.taken {
                        frame.active = false;
                    } else {
                        let cond = self.eval_pp_expr(rest).map(|v| v != 0).unwrap_or_else(|| {
                            // warning recorded below; primary-branch rule
                            true
                        });
                        let frame = stack.last_mut().unwrap();
                        frame.active = frame.parent_active && cond;
                        frame.taken = cond;
                    }
                }
                "else" => {
                    let frame = match stack.last_mut() {
                        Some(f) => f,
                        None => return self.fail(tok.offset, "#else without #if"),
                    };
                    frame.active = frame.parent_active && !frame.taken;
                    frame.taken = true;
                }
                "endif" => {
                    if stack.pop().is_none() {
                        return self.fail(tok.offset, "#endif without #if");
                    }
                }
                "pragma" | "error" | "warning" | "line" | "" => {}
                _ if !active => {}
                other => self.warn(format!("ignored directive #{other}")),
            }
        }
        Ok(out)
    }

    fn parse_define(
        &mut self,
        rest: &str,
        raw: &str,
        offset: usize,
    ) -> Result<(), AnalyzerError> {
        let rest = rest.trim_start();
        let (name, after) = split_word(rest);
        if name.is_empty() {
            return self.fail(offset, "malformed #define");
        }
        self.defines.insert(name.to_string(), ());
        let (params, body) = if after.starts_with('(') {
            // Function-like only when '(' immediately follows the name.
            let close = match after.find(')') {
                Some(i) => i,
                None => return self.fail(offset, "unterminated macro parameter list"),
            };
            let params: Vec<String> = after[1..close]
                .split(',')
                .map(|p| p.trim().to_string())
                .filter(|p| !p.is_empty())
                .collect();
            (Some(params), after[close + 1..].trim().to_string())
        } else {
            (None, after.trim().to_string())
        };
        self.facts.macros.push(MacroDef {
            name: name.to_string(),
            params,
            body,
            file: self.path.to_path_buf(),
            offset,
            raw: raw.to_string(),
        });
        Ok(())
    }

    /// Evaluate a preprocessor condition against the known define set.
    /// `None` means "cannot evaluate" (e.g. an identifier we know nothing
    /// about), which the caller maps to the primary branch.
    fn eval_pp_expr(&self, expr: &str) -> Option<i64> {
        let toks = Lexer::new(expr).tokens().ok()?;
        let mut ev = PpEval {
            toks: &toks,
            pos: 0,
            defines: &self.defines,
        };
        let v = ev.or_expr()?;
        if ev.pos == toks.len() {
            Some(v)
        } else {
            None
        }
    }

    // ---- declarations ----

    fn parse_toplevel(&mut self, toks: &[Token]) -> Result<(), AnalyzerError> {
        let mut pos = 0;
        while pos < toks.len() {
            pos = self.parse_external_decl(toks, pos)?;
        }
        Ok(())
    }

    fn parse_external_decl(&mut self, toks: &[Token], start: usize) -> Result<usize, AnalyzerError> {
        let mut pos = start;
        // Stray semicolons.
        if toks[pos].text == ";" {
            return Ok(pos + 1);
        }

        let mut is_typedef = false;
        let mut is_static = false;
        let mut is_extern = false;
        let mut is_const = false;

        // Storage class and qualifiers may precede or interleave with the
        // base type; collect them first.
        loop {
            match toks.get(pos).map(|t| t.text.as_str()) {
                Some("typedef") => {
                    is_typedef = true;
                    pos += 1;
                }
                Some("static") => {
                    is_static = true;
                    pos += 1;
                }
                Some("extern") => {
                    is_extern = true;
                    pos += 1;
                }
                Some("const") => {
                    is_const = true;
                    pos += 1;
                }
                Some("inline") | Some("register") | Some("volatile") | Some("__inline") => {
                    pos += 1;
                }
                Some("__attribute__") => {
                    pos = self.skip_attribute(toks, pos)?;
                }
                _ => break,
            }
        }

        let tok = match toks.get(pos) {
            Some(t) => t,
            None => return Ok(pos),
        };

        // struct/union/enum, possibly with a body, possibly typedef'd.
        if matches!(tok.text.as_str(), "struct" | "union" | "enum") {
            return self.parse_tagged_decl(toks, start, pos, is_typedef, is_static, is_const);
        }

        let (base, mut pos) = self.parse_base_type(toks, pos)?;
        // const may also follow the base type
        while toks.get(pos).map(|t| t.text.as_str()) == Some("const") {
            is_const = true;
            pos += 1;
        }

        // Declarator list.
        let mut first = true;
        loop {
            let (decl, next) = self.parse_declarator(toks, pos, &base, is_const)?;
            pos = next;
            if first {
                first = false;
                // Function definition?
                if decl.is_function && toks.get(pos).map(|t| t.text.as_str()) == Some("{") {
                    let (body_end, body_span) = self.match_braces(toks, pos)?;
                    let sig = FunctionSignature {
                        name: decl.name.clone(),
                        params: decl.params.clone().unwrap_or_default(),
                        return_type: decl.ty.clone(),
                        is_variadic: decl.variadic,
                        is_static,
                        source_file: self.path.to_path_buf(),
                        source_span: (toks[start].offset, body_span.1),
                        body_text: Some(self.src[body_span.0..body_span.1].to_string()),
                    };
                    self.facts.signatures.push(sig);
                    return Ok(body_end);
                }
            }

            if decl.is_function {
                // Prototype.
                self.facts.prototypes.push(FunctionSignature {
                    name: decl.name.clone(),
                    params: decl.params.clone().unwrap_or_default(),
                    return_type: decl.ty.clone(),
                    is_variadic: decl.variadic,
                    is_static,
                    source_file: self.path.to_path_buf(),
                    source_span: (toks[start].offset, toks[pos.min(toks.len() - 1)].offset),
                    body_text: None,
                });
            } else if is_typedef {
                let end = self.find_stmt_end(toks, pos)?;
                self.facts.type_decls.push(TypeDecl {
                    name: decl.name.clone(),
                    tag: None,
                    kind: TypeDeclKind::Typedef {
                        target: decl.ty.clone(),
                    },
                    file: self.path.to_path_buf(),
                    span: (toks[start].offset, toks[end - 1].offset + 1),
                    raw: self.slice_tokens(toks, start, end),
                });
            } else {
                // Global variable (extern without initializer is only a
                // declaration).
                let mut init = None;
                if toks.get(pos).map(|t| t.text.as_str()) == Some("=") {
                    let init_end = self.find_init_end(toks, pos + 1)?;
                    init = Some(self.slice_tokens(toks, pos + 1, init_end));
                    pos = init_end;
                }
                if !is_extern || init.is_some() {
                    let end_off = toks
                        .get(pos)
                        .map(|t| t.offset)
                        .unwrap_or_else(|| self.src.len());
                    self.facts.globals.push(GlobalVar {
                        name: decl.name.clone(),
                        ty: decl.ty.clone(),
                        initializer: init,
                        is_static,
                        file: self.path.to_path_buf(),
                        span: (toks[start].offset, end_off),
                    });
                }
            }

            match toks.get(pos).map(|t| t.text.as_str()) {
                Some(",") => pos += 1,
                Some(";") => return Ok(pos + 1),
                _ => {
                    let off = toks.get(pos).map(|t| t.offset).unwrap_or(0);
                    return self.fail(off, "expected `,` or `;` after declarator");
                }
            }
        }
    }

    fn parse_tagged_decl(
        &mut self,
        toks: &[Token],
        start: usize,
        mut pos: usize,
        is_typedef: bool,
        is_static: bool,
        is_const: bool,
    ) -> Result<usize, AnalyzerError> {
        let kind = match toks[pos].text.as_str() {
            "struct" => AggregateKind::Struct,
            "union" => AggregateKind::Union,
            _ => AggregateKind::Enum,
        };
        pos += 1;
        let mut tag: Option<String> = None;
        if toks.get(pos).map(|t| t.kind.clone()) == Some(TokKind::Ident) {
            tag = Some(toks[pos].text.clone());
            pos += 1;
        }

        if toks.get(pos).map(|t| t.text.as_str()) == Some("{") {
            let body_start = pos;
            let (after_body, body_span) = self.match_braces(toks, pos)?;
            pos = after_body;
            // Optional declarator (typedef alias or a variable of this type).
            let mut alias: Option<String> = None;
            let mut ptr_alias = 0usize;
            while toks.get(pos).map(|t| t.text.as_str()) == Some("*") {
                ptr_alias += 1;
                pos += 1;
            }
            if toks.get(pos).map(|t| t.kind.clone()) == Some(TokKind::Ident) {
                alias = Some(toks[pos].text.clone());
                pos += 1;
            }
            let end = self.find_stmt_end(toks, pos)?;
            let raw = self.slice_tokens(toks, start, end);
            let span = (toks[start].offset, toks[end - 1].offset + 1);

            let decl_kind = if kind == AggregateKind::Enum {
                let variants = self.parse_enum_variants(toks, body_start)?;
                TypeDeclKind::Enum { variants }
            } else {
                let fields = self.parse_fields(toks, body_start, body_span)?;
                TypeDeclKind::Aggregate { kind, fields }
            };

            let name = if is_typedef {
                match alias.clone() {
                    Some(a) => a,
                    None => match &tag {
                        Some(t) => t.clone(),
                        None => return self.fail(span.0, "typedef aggregate without a name"),
                    },
                }
            } else {
                match &tag {
                    Some(t) => t.clone(),
                    None => {
                        // Anonymous non-typedef aggregate at file scope —
                        // nothing references it; warn and move on.
                        self.warn("ignored anonymous aggregate declaration".to_string());
                        return Ok(end);
                    }
                }
            };
            if !is_typedef {
                if let Some(var_name) = alias {
                    // `struct tag { .. } var;` declares a global too.
                    let mut ty = CType::scalar(BaseType::Aggregate {
                        kind,
                        name: name.clone(),
                    });
                    ty.pointer_depth = ptr_alias;
                    ty.is_const = is_const;
                    self.facts.globals.push(GlobalVar {
                        name: var_name,
                        ty,
                        initializer: None,
                        is_static,
                        file: self.path.to_path_buf(),
                        span,
                    });
                }
            }
            self.facts.type_decls.push(TypeDecl {
                name,
                tag,
                kind: decl_kind,
                file: self.path.to_path_buf(),
                span,
                raw,
            });
            return Ok(end);
        }

        // No body: either a forward declaration (`struct x;`) or a
        // declaration using the tagged type (`struct x f(void);`,
        // `struct x g;`, `typedef struct x alias;`).
        if toks.get(pos).map(|t| t.text.as_str()) == Some(";") {
            return Ok(pos + 1); // forward declaration — nothing to record
        }
        let base = BaseType::Aggregate {
            kind,
            name: tag.clone().unwrap_or_default(),
        };
        let (decl, mut pos) = self.parse_declarator(toks, pos, &base, is_const)?;
        if decl.is_function && toks.get(pos).map(|t| t.text.as_str()) == Some("{") {
            let (body_end, body_span) = self.match_braces(toks, pos)?;
            self.facts.signatures.push(FunctionSignature {
                name: decl.name,
                params: decl.params.unwrap_or_default(),
                return_type: decl.ty,
                is_variadic: decl.variadic,
                is_static,
                source_file: self.path.to_path_buf(),
                source_span: (toks[start].offset, body_span.1),
                body_text: Some(self.src[body_span.0..body_span.1].to_string()),
            });
            return Ok(body_end);
        }
        if decl.is_function {
            self.facts.prototypes.push(FunctionSignature {
                name: decl.name,
                params: decl.params.unwrap_or_default(),
                return_type: decl.ty,
                is_variadic: decl.variadic,
                is_static,
                source_file: self.path.to_path_buf(),
                source_span: (toks[start].offset, toks[pos.min(toks.len() - 1)].offset),
                body_text: None,
            });
            let end = self.find_stmt_end(toks, pos)?;
            return Ok(end);
        }
        if is_typedef {
            let end = self.find_stmt_end(toks, pos)?;
            self.facts.type_decls.push(TypeDecl {
                name: decl.name,
                tag: None,
                kind: TypeDeclKind::Typedef { target: decl.ty },
                file: self.path.to_path_buf(),
                span: (toks[start].offset, toks[end - 1].offset + 1),
                raw: self.slice_tokens(toks, start, end),
            });
            return Ok(end);
        }
        // Global of aggregate type.
        let mut init = None;
        if toks.get(pos).map(|t| t.text.as_str()) == Some("=") {
            let init_end = self.find_init_end(toks, pos + 1)?;
            init = Some(self.slice_tokens(toks, pos + 1, init_end));
            pos = init_end;
        }
        let end = self.find_stmt_end(toks, pos)?;
        self.facts.globals.push(GlobalVar {
            name: decl.name,
            ty: decl.ty,
            initializer: init,
            is_static,
            file: self.path.to_path_buf(),
            span: (toks[start].offset, toks[end - 1].offset + 1),
        });
        Ok(end)
    }

    fn parse_enum_variants(
        &mut self,
        toks: &[Token],
        body_start: usize,
    ) -> Result<Vec<(String, i64)>, AnalyzerError> {
        let (after, _) = self.match_braces(toks, body_start)?;
        let inner = &toks[body_start + 1..after - 1];
        let mut variants = Vec::new();
        let mut next_val: i64 = 0;
        let mut i = 0;
        while i < inner.len() {
            if inner[i].kind != TokKind::Ident {
                return self.fail(inner[i].offset, "expected enum variant name");
            }
            let name = inner[i].text.clone();
            i += 1;
            if inner.get(i).map(|t| t.text.as_str()) == Some("=") {
                i += 1;
                let mut expr_toks = Vec::new();
                while i < inner.len() && inner[i].text != "," {
                    expr_toks.push(inner[i].clone());
                    i += 1;
                }
                match eval_const_int(&expr_toks) {
                    Some(v) => next_val = v,
                    None => {
                        self.warn(format!(
                            "cannot evaluate enum initializer for `{name}`; numbering sequentially"
                        ));
                    }
                }
            }
            variants.push((name, next_val));
            next_val += 1;
            if inner.get(i).map(|t| t.text.as_str()) == Some(",") {
                i += 1;
            }
        }
        Ok(variants)
    }

    fn parse_fields(
        &mut self,
        toks: &[Token],
        body_start: usize,
        _body_span: (usize, usize),
    ) -> Result<Vec<(String, CType)>, AnalyzerError> {
        let (after, _) = self.match_braces(toks, body_start)?;
        let inner = &toks[body_start + 1..after - 1];
        let mut fields = Vec::new();
        let mut i = 0;
        while i < inner.len() {
            if inner[i].text == ";" {
                i += 1;
                continue;
            }
            let field_start = i;
            let mut is_const = false;
            while matches!(
                inner.get(i).map(|t| t.text.as_str()),
                Some("const") | Some("volatile")
            ) {
                if inner[i].text == "const" {
                    is_const = true;
                }
                i += 1;
            }
            let parsed = (|| -> Result<(BaseType, usize), AnalyzerError> {
                if matches!(
                    inner.get(i).map(|t| t.text.as_str()),
                    Some("struct") | Some("union") | Some("enum")
                ) {
                    let kind = match inner[i].text.as_str() {
                        "struct" => AggregateKind::Struct,
                        "union" => AggregateKind::Union,
                        _ => AggregateKind::Enum,
                    };
                    let name = inner
                        .get(i + 1)
                        .filter(|t| t.kind == TokKind::Ident)
                        .map(|t| t.text.clone());
                    match name {
                        Some(n) => Ok((BaseType::Aggregate { kind, name: n }, i + 2)),
                        None => self.fail(inner[i].offset, "unsupported nested aggregate field"),
                    }
                } else {
                    self.parse_base_type(inner, i)
                }
            })();
            let (base, mut j) = match parsed {
                Ok(v) => v,
                Err(_) => {
                    // Bit-fields and exotic members: skip to `;` with a warning.
                    self.warn(format!(
                        "skipped unparseable field near byte {}",
                        inner[field_start].offset
                    ));
                    while i < inner.len() && inner[i].text != ";" {
                        i += 1;
                    }
                    continue;
                }
            };
            loop {
                let (decl, next) = self.parse_declarator(inner, j, &base, is_const)?;
                j = next;
                if inner.get(j).map(|t| t.text.as_str()) == Some(":") {
                    // Bit-field: record the named width-less field.
                    self.warn(format!("bit-field `{}` width ignored", decl.name));
                    j += 1;
                    while j < inner.len() && inner[j].text != "," && inner[j].text != ";" {
                        j += 1;
                    }
                }
                fields.push((decl.name, decl.ty));
                match inner.get(j).map(|t| t.text.as_str()) {
                    Some(",") => j += 1,
                    Some(";") => {
                        j += 1;
                        break;
                    }
                    _ => {
                        let off = inner.get(j).map(|t| t.offset).unwrap_or(0);
                        return self.fail(off, "expected `,` or `;` in field declaration");
                    }
                }
            }
            i = j;
        }
        Ok(fields)
    }

    fn parse_base_type(
        &self,
        toks: &[Token],
        mut pos: usize,
    ) -> Result<(BaseType, usize), AnalyzerError> {
        let mut signedness: Option<bool> = None;
        let mut longs = 0;
        let mut short = false;
        let mut base: Option<BaseType> = None;
        let start = pos;
        loop {
            let t = match toks.get(pos) {
                Some(t) => t,
                None => break,
            };
            match t.text.as_str() {
                "unsigned" => {
                    signedness = Some(false);
                    pos += 1;
                }
                "signed" => {
                    signedness = Some(true);
                    pos += 1;
                }
                "short" => {
                    short = true;
                    pos += 1;
                }
                "long" => {
                    longs += 1;
                    pos += 1;
                }
                "int" => {
                    base = Some(BaseType::Int {
                        width: IntWidth::Int,
                        unsigned: false,
                    });
                    pos += 1;
                }
                "char" => {
                    base = Some(BaseType::Char { signed: None });
                    pos += 1;
                }
                "float" => {
                    base = Some(BaseType::Float);
                    pos += 1;
                }
                "double" => {
                    base = Some(BaseType::Double);
                    pos += 1;
                }
                "void" => {
                    base = Some(BaseType::Void);
                    pos += 1;
                }
                "_Bool" => {
                    base = Some(BaseType::Bool);
                    pos += 1;
                }
                "const" | "volatile" => {
                    pos += 1;
                }
                _ => break,
            }
        }

        let result = match base {
            Some(BaseType::Char { .. }) => BaseType::Char {
                signed: signedness,
            },
            Some(BaseType::Int { .. }) | None
                if signedness.is_some() || longs > 0 || short || base.is_some() =>
            {
                let width = if short {
                    IntWidth::Short
                } else if longs >= 2 {
                    IntWidth::LongLong
                } else if longs == 1 {
                    IntWidth::Long
                } else {
                    IntWidth::Int
                };
                BaseType::Int {
                    width,
                    unsigned: signedness == Some(false),
                }
            }
            Some(BaseType::Double) if longs > 0 => BaseType::Double,
            Some(b) => b,
            None => {
                // Typedef name.
                let t = match toks.get(pos) {
                    Some(t) if t.kind == TokKind::Ident => t,
                    _ => {
                        let off = toks
                            .get(pos)
                            .map(|t| t.offset)
                            .or_else(|| toks.get(start).map(|t| t.offset))
                            .unwrap_or(0);
                        return self.fail(off, "expected type name");
                    }
                };
                pos += 1;
                if t.text == "va_list" {
                    return Ok((BaseType::Alias("va_list".into()), pos));
                }
                BaseType::Alias(t.text.clone())
            }
        };
        Ok((result, pos))
    }

    fn parse_declarator(
        &self,
        toks: &[Token],
        pos: usize,
        base: &BaseType,
        is_const: bool,
    ) -> Result<(Declarator, usize), AnalyzerError> {
        self.parse_declarator_inner(toks, pos, base, is_const, false)
    }

    fn parse_declarator_inner(
        &self,
        toks: &[Token],
        mut pos: usize,
        base: &BaseType,
        is_const: bool,
        allow_abstract: bool,
    ) -> Result<(Declarator, usize), AnalyzerError> {
        let mut ty = CType::scalar(base.clone());
        ty.is_const = is_const;
        if *base == BaseType::Alias("va_list".into()) {
            ty.is_va_list = true;
        }
        while let Some(t) = toks.get(pos) {
            match t.text.as_str() {
                "*" => {
                    ty.pointer_depth += 1;
                    pos += 1;
                }
                "const" | "volatile" | "restrict" | "__restrict" => {
                    pos += 1;
                }
                _ => break,
            }
        }

        // Function pointer: ( * name ) ( params )
        if toks.get(pos).map(|t| t.text.as_str()) == Some("(")
            && toks.get(pos + 1).map(|t| t.text.as_str()) == Some("*")
        {
            pos += 2;
            let name = match toks.get(pos) {
                Some(t) if t.kind == TokKind::Ident => t.text.clone(),
                _ => String::new(),
            };
            if !name.is_empty() {
                pos += 1;
            }
            if toks.get(pos).map(|t| t.text.as_str()) != Some(")") {
                let off = toks.get(pos).map(|t| t.offset).unwrap_or(0);
                return self.fail(off, "expected `)` in function-pointer declarator");
            }
            pos += 1;
            if toks.get(pos).map(|t| t.text.as_str()) != Some("(") {
                let off = toks.get(pos).map(|t| t.offset).unwrap_or(0);
                return self.fail(off, "expected parameter list in function-pointer declarator");
            }
            let (params, variadic, next) = self.parse_params(toks, pos)?;
            pos = next;
            // Stars consumed before `(` belong to the return type; the star
            // inside the parens is the function-pointer itself.
            let ret = ty.clone();
            let mut fp_ty = CType::scalar(BaseType::Void);
            fp_ty.func_ptr = Some(Box::new(FuncPtrShape {
                params: params.into_iter().map(|(_, t)| t).collect(),
                ret,
            }));
            fp_ty.pointer_depth = 1;
            let _ = variadic;
            return Ok((
                Declarator {
                    name,
                    ty: fp_ty,
                    is_function: false,
                    params: None,
                    variadic: false,
                },
                pos,
            ));
        }

        let name = match toks.get(pos) {
            Some(t) if t.kind == TokKind::Ident && !super::lexer::is_c_keyword(&t.text) => {
                let n = t.text.clone();
                pos += 1;
                n
            }
            _ => String::new(),
        };

        // Array dims.
        while toks.get(pos).map(|t| t.text.as_str()) == Some("[") {
            let mut depth = 1;
            let mut j = pos + 1;
            let dim_start = j;
            while j < toks.len() && depth > 0 {
                match toks[j].text.as_str() {
                    "[" => depth += 1,
                    "]" => depth -= 1,
                    _ => {}
                }
                j += 1;
            }
            if depth != 0 {
                return self.fail(toks[pos].offset, "unterminated array extent");
            }
            ty.array_dims
                .push(self.slice_tokens(toks, dim_start, j - 1));
            pos = j;
        }

        // Function params.
        if toks.get(pos).map(|t| t.text.as_str()) == Some("(") && !name.is_empty() {
            let (params, variadic, next) = self.parse_params(toks, pos)?;
            return Ok((
                Declarator {
                    name,
                    ty,
                    is_function: true,
                    params: Some(params),
                    variadic,
                },
                next,
            ));
        }

        if name.is_empty() && !allow_abstract {
            let off = toks.get(pos).map(|t| t.offset).unwrap_or(0);
            return self.fail(off, "expected declarator name");
        }
        Ok((
            Declarator {
                name,
                ty,
                is_function: false,
                params: None,
                variadic: false,
            },
            pos,
        ))
    }

    fn parse_params(
        &self,
        toks: &[Token],
        open: usize,
    ) -> Result<(Vec<(String, CType)>, bool, usize), AnalyzerError> {
        debug_assert_eq!(toks[open].text, "(");
        let mut pos = open + 1;
        let mut params = Vec::new();
        let mut variadic = false;
        if toks.get(pos).map(|t| t.text.as_str()) == Some(")") {
            return Ok((params, false, pos + 1));
        }
        if toks.get(pos).map(|t| t.text.as_str()) == Some("void")
            && toks.get(pos + 1).map(|t| t.text.as_str()) == Some(")")
        {
            return Ok((params, false, pos + 2));
        }
        loop {
            if toks.get(pos).map(|t| t.text.as_str()) == Some("...") {
                variadic = true;
                pos += 1;
                break;
            }
            let mut is_const = false;
            while matches!(
                toks.get(pos).map(|t| t.text.as_str()),
                Some("const") | Some("volatile") | Some("register")
            ) {
                if toks[pos].text == "const" {
                    is_const = true;
                }
                pos += 1;
            }
            let (base, next) = if matches!(
                toks.get(pos).map(|t| t.text.as_str()),
                Some("struct") | Some("union") | Some("enum")
            ) {
                let kind = match toks[pos].text.as_str() {
                    "struct" => AggregateKind::Struct,
                    "union" => AggregateKind::Union,
                    _ => AggregateKind::Enum,
                };
                match toks.get(pos + 1) {
                    Some(t) if t.kind == TokKind::Ident => (
                        BaseType::Aggregate {
                            kind,
                            name: t.text.clone(),
                        },
                        pos + 2,
                    ),
                    _ => return self.fail(toks[pos].offset, "expected tag name in parameter"),
                }
            } else {
                self.parse_base_type(toks, pos)?
            };
            pos = next;
            let (decl, after) =
                self.parse_declarator_inner(toks, pos, &base, is_const, true)?;
            pos = after;
            let mut ty = decl.ty;
            // Array parameters adjust to pointers, C-style.
            if !ty.array_dims.is_empty() {
                ty.array_dims.clear();
                ty.pointer_depth += 1;
            }
            let name = if decl.name.is_empty() {
                format!("arg{}", params.len())
            } else {
                decl.name
            };
            params.push((name, ty));
            match toks.get(pos).map(|t| t.text.as_str()) {
                Some(",") => pos += 1,
                Some(")") => {
                    pos += 1;
                    return Ok((params, variadic, pos));
                }
                _ => {
                    let off = toks.get(pos).map(|t| t.offset).unwrap_or(0);
                    return self.fail(off, "expected `,` or `)` in parameter list");
                }
            }
        }
        if toks.get(pos).map(|t| t.text.as_str()) != Some(")") {
            let off = toks.get(pos).map(|t| t.offset).unwrap_or(0);
            return self.fail(off, "expected `)` after `...`");
        }
        Ok((params, variadic, pos + 1))
    }

    /// From an opening `{` token index, return (index after the matching
    /// `}`, byte span of the block including both braces).
    fn match_braces(
        &self,
        toks: &[Token],
        open: usize,
    ) -> Result<(usize, (usize, usize)), AnalyzerError> {
        debug_assert_eq!(toks[open].text, "{");
        let mut depth = 0usize;
        for (i, t) in toks.iter().enumerate().skip(open) {
            match t.text.as_str() {
                "{" => depth += 1,
                "}" => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok((i + 1, (toks[open].offset, t.offset + 1)));
                    }
                }
                _ => {}
            }
        }
        self.fail(toks[open].offset, "unmatched `{`")
    }

    fn find_stmt_end(&self, toks: &[Token], mut pos: usize) -> Result<usize, AnalyzerError> {
        while pos < toks.len() {
            if toks[pos].text == ";" {
                return Ok(pos + 1);
            }
            pos += 1;
        }
        let off = toks.last().map(|t| t.offset).unwrap_or(0);
        self.fail(off, "missing `;`")
    }

    /// End of an initializer: next top-level `,` or `;`.
    fn find_init_end(&self, toks: &[Token], mut pos: usize) -> Result<usize, AnalyzerError> {
        let mut depth = 0usize;
        while pos < toks.len() {
            match toks[pos].text.as_str() {
                "{" | "(" | "[" => depth += 1,
                "}" | ")" | "]" => depth = depth.saturating_sub(1),
                "," | ";" if depth == 0 => return Ok(pos),
                _ => {}
            }
            pos += 1;
        }
        let off = toks.last().map(|t| t.offset).unwrap_or(0);
        self.fail(off, "unterminated initializer")
    }

    fn skip_attribute(&mut self, toks: &[Token], pos: usize) -> Result<usize, AnalyzerError> {
        self.warn("stripped __attribute__".to_string());
        let mut p = pos + 1;
        if toks.get(p).map(|t| t.text.as_str()) != Some("(") {
            return Ok(p);
        }
        let mut depth = 0usize;
        while p < toks.len() {
            match toks[p].text.as_str() {
                "(" => depth += 1,
                ")" => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(p + 1);
                    }
                }
                _ => {}
            }
            p += 1;
        }
        self.fail(toks[pos].offset, "unterminated __attribute__")
    }

    fn slice_tokens(&self, toks: &[Token], start: usize, end: usize) -> String {
        if start >= end || start >= toks.len() {
            return String::new();
        }
        let a = toks[start].offset;
        let last = &toks[(end - 1).min(toks.len() - 1)];
        let b = last.offset + last.text.len();
        self.src[a..b].to_string()
    }
}

struct Declarator {
    name: String,
    ty: CType,
    is_function: bool,
    params: Option<Vec<(String, CType)>>,
    variadic: bool,
}

// ---- small const-expression evaluation ----

struct PpEval<'a> {
    toks: &'a [Token],
    pos: usize,
    defines: &'a BTreeMap<String, ()>,
}

impl<'a> PpEval<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn or_expr(&mut self) -> Option<i64> {
        let mut v = self.and_expr()?;
        while self.peek().map(|t| t.text.as_str()) == Some("||") {
            self.pos += 1;
            let r = self.and_expr()?;
            v = ((v != 0) || (r != 0)) as i64;
        }
        Some(v)
    }

    fn and_expr(&mut self) -> Option<i64> {
        let mut v = self.cmp_expr()?;
        while self.peek().map(|t| t.text.as_str()) == Some("&&") {
            self.pos += 1;
            let r = self.cmp_expr()?;
            v = ((v != 0) && (r != 0)) as i64;
        }
        Some(v)
    }

    fn cmp_expr(&mut self) -> Option<i64> {
        let v = self.unary()?;
        let op = match self.peek().map(|t| t.text.clone()) {
            Some(o)
                if matches!(o.as_str(), "==" | "!=" | "<" | ">" | "<=" | ">=") =>
            {
                o
            }
            _ => return Some(v),
        };
        self.pos += 1;
        let r = self.unary()?;
        let b = match op.as_str() {
            "==" => v == r,
            "!=" => v != r,
            "<" => v < r,
            ">" => v > r,
            "<=" => v <= r,
            _ => v >= r,
        };
        Some(b as i64)
    }

    fn unary(&mut self) -> Option<i64> {
        match self.peek().map(|t| t.text.clone())?.as_str() {
            "!" => {
                self.pos += 1;
                Some((self.unary()? == 0) as i64)
            }
            "(" => {
                self.pos += 1;
                let v = self.or_expr()?;
                if self.peek().map(|t| t.text.as_str()) == Some(")") {
                    self.pos += 1;
                    Some(v)
                } else {
                    None
                }
            }
            "defined" => {
                self.pos += 1;
                let name = if self.peek().map(|t| t.text.as_str()) == Some("(") {
                    self.pos += 1;
                    let n = self.peek()?.text.clone();
                    self.pos += 1;
                    if self.peek().map(|t| t.text.as_str()) != Some(")") {
                        return None;
                    }
                    self.pos += 1;
                    n
                } else {
                    let n = self.peek()?.text.clone();
                    self.pos += 1;
                    n
                };
                Some(self.defines.contains_key(&name) as i64)
            }
            _ => {
                let t = self.peek()?.clone();
                if t.kind == TokKind::Number {
                    self.pos += 1;
                    parse_c_int(&t.text)
                } else {
                    // Identifiers outside the configured define set are
                    // unevaluable by policy (not implicitly zero).
                    None
                }
            }
        }
    }
}

/// Evaluate a constant integer expression of literals, `+`, `-`, `<<`,
/// parentheses. Used for enum variant values.
fn eval_const_int(toks: &[Token]) -> Option<i64> {
    fn term(toks: &[Token], pos: &mut usize) -> Option<i64> {
        match toks.get(*pos)?.text.as_str() {
            "-" => {
                *pos += 1;
                Some(-term(toks, pos)?)
            }
            "(" => {
                *pos += 1;
                let v = expr(toks, pos)?;
                if toks.get(*pos)?.text != ")" {
                    return None;
                }
                *pos += 1;
                Some(v)
            }
            _ => {
                let t = toks.get(*pos)?;
                if t.kind == TokKind::Number {
                    *pos += 1;
                    parse_c_int(&t.text)
                } else {
                    None
                }
            }
        }
    }
    fn expr(toks: &[Token], pos: &mut usize) -> Option<i64> {
        let mut v = term(toks, pos)?;
        while let Some(t) = toks.get(*pos) {
            match t.text.as_str() {
                "+" => {
                    *pos += 1;
                    v += term(toks, pos)?;
                }
                "-" => {
                    *pos += 1;
                    v -= term(toks, pos)?;
                }
                "<<" => {
                    *pos += 1;
                    v <<= term(toks, pos)?;
                }
                _ => break,
            }
        }
        Some(v)
    }
    let mut pos = 0;
    let v = expr(toks, &mut pos)?;
    if pos == toks.len() {
        Some(v)
    } else {
        None
    }
}

/// Parse a C integer literal (decimal/hex/octal, optional U/L suffixes).
pub fn parse_c_int(text: &str) -> Option<i64> {
    let t = text
        .trim_end_matches(|c| matches!(c, 'u' | 'U' | 'l' | 'L'))
        .to_string();
    if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        return i64::from_str_radix(hex, 16)
            .ok()
            .or_else(|| u64::from_str_radix(hex, 16).ok().map(|v| v as i64));
    }
    if t.len() > 1 && t.starts_with('0') && t.chars().all(|c| c.is_ascii_digit()) {
        return i64::from_str_radix(&t[1..], 8).ok();
    }
    t.parse::<i64>().ok()
}

fn split_word(s: &str) -> (&str, &str) {
    let end = s
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(s.len());
    (&s[..end], &s[end..])
}
