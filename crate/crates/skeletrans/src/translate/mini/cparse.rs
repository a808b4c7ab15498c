//! Statement/expression parsing for the mini translator's C subset:
//! scalar arithmetic, pointers, arrays, `if`/`while`/`for`/`do`/`switch`,
//! calls, casts, string literals. Struct member access, `goto`, ternaries
//! and the comma operator are outside the subset.

use crate::analyzer::lexer::{is_c_keyword, Lexer, TokKind, Token};
use crate::analyzer::{BaseType, CType, IntWidth};
use crate::translate::TranslateError;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Neg,
    Not,
    BitNot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Shl,
    Shr,
    BitAnd,
    BitOr,
    BitXor,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    pub fn text(&self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::Shl => "<<",
            BinOp::Shr => ">>",
            BinOp::BitAnd => "&",
            BinOp::BitOr => "|",
            BinOp::BitXor => "^",
            BinOp::Lt => "<",
            BinOp::Gt => ">",
            BinOp::Le => "<=",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    pub fn is_comparison(&self) -> bool {
        matches!(
            self,
            BinOp::Lt | BinOp::Gt | BinOp::Le | BinOp::Ge | BinOp::Eq | BinOp::Ne
        )
    }

    pub fn is_logical(&self) -> bool {
        matches!(self, BinOp::And | BinOp::Or)
    }
}

#[derive(Debug, Clone)]
pub enum CExpr {
    Int { text: String, ty: CType },
    Str(String),
    Char(u8),
    Ident(String),
    Call(String, Vec<CExpr>),
    Index(Box<CExpr>, Box<CExpr>),
    Deref(Box<CExpr>),
    AddrOf(Box<CExpr>),
    Unary(UnOp, Box<CExpr>),
    Binary(BinOp, Box<CExpr>, Box<CExpr>),
    Cast(CType, Box<CExpr>),
    SizeofType(CType),
    SizeofExpr(Box<CExpr>),
    Step { pre: bool, inc: bool, target: Box<CExpr> },
}

#[derive(Debug, Clone)]
pub struct SwitchCase {
    pub values: Vec<CExpr>,
    pub body: Vec<CStmt>,
    pub has_break: bool,
}

#[derive(Debug, Clone)]
pub enum CStmt {
    Decl {
        name: String,
        ty: CType,
        init: Option<CExpr>,
    },
    Expr(CExpr),
    Assign {
        target: CExpr,
        op: Option<BinOp>,
        value: CExpr,
    },
    If {
        cond: CExpr,
        then: Vec<CStmt>,
        els: Option<Vec<CStmt>>,
    },
    While {
        cond: CExpr,
        body: Vec<CStmt>,
    },
    DoWhile {
        body: Vec<CStmt>,
        cond: CExpr,
    },
    For {
        init: Option<Box<CStmt>>,
        cond: Option<CExpr>,
        step: Option<Box<CStmt>>,
        body: Vec<CStmt>,
    },
    Switch {
        sel: CExpr,
        cases: Vec<SwitchCase>,
        default: Option<Vec<CStmt>>,
    },
    Return(Option<CExpr>),
    Break,
    Continue,
    Block(Vec<CStmt>),
}

pub struct CParser<'a> {
    toks: Vec<Token>,
    pos: usize,
    typenames: &'a BTreeSet<String>,
}

fn out_of_subset(construct: impl Into<String>) -> TranslateError {
    TranslateError::OutOfSubset {
        construct: construct.into(),
    }
}

impl<'a> CParser<'a> {
    /// Parse the body block `{ ... }` of a function.
    pub fn parse_body(
        body: &str,
        typenames: &'a BTreeSet<String>,
    ) -> Result<Vec<CStmt>, TranslateError> {
        let toks = Lexer::new(body)
            .tokens()
            .map_err(|(_, m)| out_of_subset(format!("unlexable body: {m}")))?;
        let mut p = CParser {
            toks,
            pos: 0,
            typenames,
        };
        p.expect("{")?;
        let stmts = p.stmt_list_until("}")?;
        p.expect("}")?;
        if p.pos != p.toks.len() {
            return Err(out_of_subset("trailing tokens after body"));
        }
        Ok(stmts)
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn peek_text(&self) -> &str {
        self.toks.get(self.pos).map(|t| t.text.as_str()).unwrap_or("")
    }

    fn peek_text_at(&self, k: usize) -> &str {
        self.toks
            .get(self.pos + k)
            .map(|t| t.text.as_str())
            .unwrap_or("")
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.peek_text() == text {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, text: &str) -> Result<(), TranslateError> {
        if self.eat(text) {
            Ok(())
        } else {
            Err(out_of_subset(format!(
                "expected `{text}`, found `{}`",
                self.peek_text()
            )))
        }
    }

    fn is_type_start(&self, k: usize) -> bool {
        let t = self.peek_text_at(k);
        matches!(
            t,
            "void" | "char" | "short" | "int" | "long" | "float" | "double" | "unsigned"
                | "signed" | "const" | "_Bool"
        ) || self.typenames.contains(t)
    }

    // ---- statements ----

    fn stmt_list_until(&mut self, end: &str) -> Result<Vec<CStmt>, TranslateError> {
        let mut out = Vec::new();
        while self.peek().is_some() && self.peek_text() != end {
            out.push(self.stmt()?);
        }
        Ok(out)
    }

    fn block_or_single(&mut self) -> Result<Vec<CStmt>, TranslateError> {
        if self.eat("{") {
            let stmts = self.stmt_list_until("}")?;
            self.expect("}")?;
            Ok(stmts)
        } else {
            Ok(vec![self.stmt()?])
        }
    }

    fn stmt(&mut self) -> Result<CStmt, TranslateError> {
        match self.peek_text() {
            ";" => {
                self.bump();
                Ok(CStmt::Block(Vec::new()))
            }
            "{" => {
                self.bump();
                let stmts = self.stmt_list_until("}")?;
                self.expect("}")?;
                Ok(CStmt::Block(stmts))
            }
            "if" => {
                self.bump();
                self.expect("(")?;
                let cond = self.expr()?;
                self.expect(")")?;
                let then = self.block_or_single()?;
                let els = if self.eat("else") {
                    Some(self.block_or_single()?)
                } else {
                    None
                };
                Ok(CStmt::If { cond, then, els })
            }
            "while" => {
                self.bump();
                self.expect("(")?;
                let cond = self.expr()?;
                self.expect(")")?;
                let body = self.block_or_single()?;
                Ok(CStmt::While { cond, body })
            }
            "do" => {
                self.bump();
                let body = self.block_or_single()?;
                self.expect("while")?;
                self.expect("(")?;
                let cond = self.expr()?;
                self.expect(")")?;
                self.expect(";")?;
                Ok(CStmt::DoWhile { body, cond })
            }
            "for" => {
                self.bump();
                self.expect("(")?;
                let init = if self.peek_text() == ";" {
                    None
                } else {
                    Some(Box::new(self.simple_stmt_no_semi()?))
                };
                self.expect(";")?;
                let cond = if self.peek_text() == ";" {
                    None
                } else {
                    Some(self.expr()?)
                };
                self.expect(";")?;
                let step = if self.peek_text() == ")" {
                    None
                } else {
                    Some(Box::new(self.simple_stmt_no_semi()?))
                };
                self.expect(")")?;
                let body = self.block_or_single()?;
                Ok(CStmt::For {
                    init,
                    cond,
                    step,
                    body,
                })
            }
            "switch" => self.switch_stmt(),
            "return" => {
                self.bump();
                if self.eat(";") {
                    Ok(CStmt::Return(None))
                } else {
                    let e = self.expr()?;
                    self.expect(";")?;
                    Ok(CStmt::Return(Some(e)))
                }
            }
            "break" => {
                self.bump();
                self.expect(";")?;
                Ok(CStmt::Break)
            }
            "continue" => {
                self.bump();
                self.expect(";")?;
                Ok(CStmt::Continue)
            }
            "goto" => Err(out_of_subset("goto")),
            _ => {
                let s = self.simple_stmt_no_semi()?;
                self.expect(";")?;
                Ok(s)
            }
        }
    }

    /// Declaration / assignment / expression, no trailing `;` (shared with
    /// `for` clauses).
    fn simple_stmt_no_semi(&mut self) -> Result<CStmt, TranslateError> {
        if self.is_type_start(0) {
            // Disambiguate declarations from expressions starting with a
            // typedef name: `T x` (two idents) or `T *x` declares.
            let declish = if self.typenames.contains(self.peek_text()) {
                let mut k = 1;
                while matches!(self.peek_text_at(k), "*" | "const") {
                    k += 1;
                }
                self.toks
                    .get(self.pos + k)
                    .map(|t| t.kind == TokKind::Ident && !is_c_keyword(&t.text))
                    .unwrap_or(false)
                    && k >= 1
                    && (self.peek_text_at(1) == "*"
                        || self
                            .toks
                            .get(self.pos + 1)
                            .map(|t| t.kind == TokKind::Ident)
                            .unwrap_or(false))
            } else {
                true
            };
            if declish {
                return self.decl_stmt();
            }
        }
        let target = self.expr()?;
        let assign_op = match self.peek_text() {
            "=" => Some(None),
            "+=" => Some(Some(BinOp::Add)),
            "-=" => Some(Some(BinOp::Sub)),
            "*=" => Some(Some(BinOp::Mul)),
            "/=" => Some(Some(BinOp::Div)),
            "%=" => Some(Some(BinOp::Rem)),
            "&=" => Some(Some(BinOp::BitAnd)),
            "|=" => Some(Some(BinOp::BitOr)),
            "^=" => Some(Some(BinOp::BitXor)),
            "<<=" => Some(Some(BinOp::Shl)),
            ">>=" => Some(Some(BinOp::Shr)),
            _ => None,
        };
        if let Some(op) = assign_op {
            self.bump();
            let value = self.expr()?;
            return Ok(CStmt::Assign { target, op, value });
        }
        Ok(CStmt::Expr(target))
    }

    fn decl_stmt(&mut self) -> Result<CStmt, TranslateError> {
        let ty = self.parse_type()?;
        let mut decls = Vec::new();
        loop {
            let mut dty = ty.clone();
            while self.eat("*") {
                dty.pointer_depth += 1;
            }
            let name = match self.peek() {
                Some(t) if t.kind == TokKind::Ident && !is_c_keyword(&t.text) => {
                    self.bump().text
                }
                _ => return Err(out_of_subset("declarator name")),
            };
            while self.eat("[") {
                let mut dim = String::new();
                while self.peek_text() != "]" && self.peek().is_some() {
                    dim.push_str(&self.bump().text);
                }
                self.expect("]")?;
                dty.array_dims.push(dim);
            }
            let init = if self.eat("=") {
                Some(self.expr()?)
            } else {
                None
            };
            decls.push(CStmt::Decl {
                name,
                ty: dty,
                init,
            });
            if !self.eat(",") {
                break;
            }
        }
        if decls.len() == 1 {
            Ok(decls.remove(0))
        } else {
            Ok(CStmt::Block(decls))
        }
    }

    fn switch_stmt(&mut self) -> Result<CStmt, TranslateError> {
        self.bump(); // switch
        self.expect("(")?;
        let sel = self.expr()?;
        self.expect(")")?;
        self.expect("{")?;
        let mut cases: Vec<SwitchCase> = Vec::new();
        let mut default: Option<Vec<CStmt>> = None;
        while self.peek_text() != "}" {
            if self.eat("case") {
                let mut values = vec![self.expr()?];
                self.expect(":")?;
                while self.eat("case") {
                    values.push(self.expr()?);
                    self.expect(":")?;
                }
                let (body, has_break) = self.case_body()?;
                if default.is_some() {
                    return Err(out_of_subset("case label after default"));
                }
                cases.push(SwitchCase {
                    values,
                    body,
                    has_break,
                });
            } else if self.eat("default") {
                self.expect(":")?;
                let (body, _) = self.case_body()?;
                default = Some(body);
            } else {
                return Err(out_of_subset(format!(
                    "unexpected token `{}` in switch",
                    self.peek_text()
                )));
            }
        }
        self.expect("}")?;
        Ok(CStmt::Switch {
            sel,
            cases,
            default,
        })
    }

    /// Statements of one case arm, up to the next label or the closing
    /// brace. A trailing `break;` becomes the arm's break marker; a `break`
    /// anywhere else in the arm is outside the subset.
    fn case_body(&mut self) -> Result<(Vec<CStmt>, bool), TranslateError> {
        let mut body = Vec::new();
        let mut has_break = false;
        loop {
            match self.peek_text() {
                "case" | "default" | "}" => break,
                "break" => {
                    self.bump();
                    self.expect(";")?;
                    has_break = true;
                    match self.peek_text() {
                        "case" | "default" | "}" => break,
                        _ => return Err(out_of_subset("statements after break in switch arm")),
                    }
                }
                _ => body.push(self.stmt()?),
            }
        }
        Ok((body, has_break))
    }

    // ---- types ----

    fn parse_type(&mut self) -> Result<CType, TranslateError> {
        let mut is_const = false;
        while self.peek_text() == "const" {
            is_const = true;
            self.bump();
        }
        let mut signed: Option<bool> = None;
        let mut longs = 0;
        let mut short = false;
        let mut base: Option<BaseType> = None;
        loop {
            match self.peek_text() {
                "unsigned" => {
                    signed = Some(false);
                    self.bump();
                }
                "signed" => {
                    signed = Some(true);
                    self.bump();
                }
                "short" => {
                    short = true;
                    self.bump();
                }
                "long" => {
                    longs += 1;
                    self.bump();
                }
                "int" => {
                    base = Some(BaseType::Int {
                        width: IntWidth::Int,
                        unsigned: false,
                    });
                    self.bump();
                }
                "char" => {
                    base = Some(BaseType::Char { signed: None });
                    self.bump();
                }
                "float" => {
                    base = Some(BaseType::Float);
                    self.bump();
                }
                "double" => {
                    base = Some(BaseType::Double);
                    self.bump();
                }
                "void" => {
                    base = Some(BaseType::Void);
                    self.bump();
                }
                "_Bool" => {
                    base = Some(BaseType::Bool);
                    self.bump();
                }
                "const" => {
                    is_const = true;
                    self.bump();
                }
                t if base.is_none()
                    && signed.is_none()
                    && longs == 0
                    && !short
                    && self.typenames.contains(t) =>
                {
                    base = Some(BaseType::Alias(t.to_string()));
                    self.bump();
                    break;
                }
                _ => break,
            }
        }
        let base = match base {
            Some(BaseType::Char { .. }) => BaseType::Char { signed },
            Some(BaseType::Int { .. }) | None
                if signed.is_some() || longs > 0 || short || base.is_some() =>
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
                    unsigned: signed == Some(false),
                }
            }
            Some(b) => b,
            None => return Err(out_of_subset("type specifier")),
        };
        let mut ty = CType::scalar(base);
        ty.is_const = is_const;
        while self.eat("*") {
            ty.pointer_depth += 1;
            while self.eat("const") {}
        }
        Ok(ty)
    }

    // ---- expressions, precedence climbing ----

    pub fn expr(&mut self) -> Result<CExpr, TranslateError> {
        self.binary_expr(0)
    }

    fn binary_expr(&mut self, min_prec: u8) -> Result<CExpr, TranslateError> {
        let mut lhs = self.unary_expr()?;
        loop {
            let (op, prec) = match self.peek_text() {
                "||" => (BinOp::Or, 1),
                "&&" => (BinOp::And, 2),
                "|" => (BinOp::BitOr, 3),
                "^" => (BinOp::BitXor, 4),
                "&" => (BinOp::BitAnd, 5),
                "==" => (BinOp::Eq, 6),
                "!=" => (BinOp::Ne, 6),
                "<" => (BinOp::Lt, 7),
                ">" => (BinOp::Gt, 7),
                "<=" => (BinOp::Le, 7),
                ">=" => (BinOp::Ge, 7),
                "<<" => (BinOp::Shl, 8),
                ">>" => (BinOp::Shr, 8),
                "+" => (BinOp::Add, 9),
                "-" => (BinOp::Sub, 9),
                "*" => (BinOp::Mul, 10),
                "/" => (BinOp::Div, 10),
                "%" => (BinOp::Rem, 10),
                "?" => return Err(out_of_subset("ternary conditional")),
                _ => break,
            };
            if prec < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary_expr(prec + 1)?;
            lhs = CExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary_expr(&mut self) -> Result<CExpr, TranslateError> {
        match self.peek_text() {
            "-" => {
                self.bump();
                Ok(CExpr::Unary(UnOp::Neg, Box::new(self.unary_expr()?)))
            }
            "!" => {
                self.bump();
                Ok(CExpr::Unary(UnOp::Not, Box::new(self.unary_expr()?)))
            }
            "~" => {
                self.bump();
                Ok(CExpr::Unary(UnOp::BitNot, Box::new(self.unary_expr()?)))
            }
            "*" => {
                self.bump();
                Ok(CExpr::Deref(Box::new(self.unary_expr()?)))
            }
            "&" => {
                self.bump();
                Ok(CExpr::AddrOf(Box::new(self.unary_expr()?)))
            }
            "++" => {
                self.bump();
                Ok(CExpr::Step {
                    pre: true,
                    inc: true,
                    target: Box::new(self.unary_expr()?),
                })
            }
            "--" => {
                self.bump();
                Ok(CExpr::Step {
                    pre: true,
                    inc: false,
                    target: Box::new(self.unary_expr()?),
                })
            }
            "sizeof" => {
                self.bump();
                self.expect("(")?;
                if self.is_type_start(0) {
                    let mut ty = self.parse_type()?;
                    while self.eat("*") {
                        ty.pointer_depth += 1;
                    }
                    self.expect(")")?;
                    Ok(CExpr::SizeofType(ty))
                } else {
                    let e = self.expr()?;
                    self.expect(")")?;
                    Ok(CExpr::SizeofExpr(Box::new(e)))
                }
            }
            "(" => {
                // Cast or parenthesized expression.
                if self.is_type_start(1) {
                    self.bump();
                    let ty = self.parse_type()?;
                    self.expect(")")?;
                    let inner = self.unary_expr()?;
                    return Ok(CExpr::Cast(ty, Box::new(inner)));
                }
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                self.postfix(e)
            }
            _ => {
                let t = self.peek().cloned().ok_or_else(|| out_of_subset("eof"))?;
                match t.kind {
                    TokKind::Number => {
                        self.bump();
                        let ty = literal_type(&t.text);
                        let text = literal_text(&t.text);
                        self.postfix(CExpr::Int { text, ty })
                    }
                    TokKind::Str => {
                        self.bump();
                        self.postfix(CExpr::Str(t.text))
                    }
                    TokKind::CharLit => {
                        self.bump();
                        let inner = t.text.trim_matches('\'');
                        let b = unescape_char(inner)
                            .ok_or_else(|| out_of_subset("char literal escape"))?;
                        self.postfix(CExpr::Char(b))
                    }
                    TokKind::Ident if !is_c_keyword(&t.text) => {
                        self.bump();
                        if self.peek_text() == "(" {
                            self.bump();
                            let mut args = Vec::new();
                            if self.peek_text() != ")" {
                                loop {
                                    args.push(self.expr()?);
                                    if !self.eat(",") {
                                        break;
                                    }
                                }
                            }
                            self.expect(")")?;
                            self.postfix(CExpr::Call(t.text, args))
                        } else {
                            self.postfix(CExpr::Ident(t.text))
                        }
                    }
                    _ => Err(out_of_subset(format!("token `{}`", t.text))),
                }
            }
        }
    }

    fn postfix(&mut self, mut e: CExpr) -> Result<CExpr, TranslateError> {
        loop {
            match self.peek_text() {
                "[" => {
                    self.bump();
                    let i = self.expr()?;
                    self.expect("]")?;
                    e = CExpr::Index(Box::new(e), Box::new(i));
                }
                "++" => {
                    self.bump();
                    e = CExpr::Step {
                        pre: false,
                        inc: true,
                        target: Box::new(e),
                    };
                }
                "--" => {
                    self.bump();
                    e = CExpr::Step {
                        pre: false,
                        inc: false,
                        target: Box::new(e),
                    };
                }
                "." | "->" => return Err(out_of_subset("struct member access")),
                _ => return Ok(e),
            }
        }
    }
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
            _ => None,
        },
        c if c.is_ascii() => Some(c as u8),
        _ => None,
    }
}

/// Type of an integer literal per C rules (restricted to the subset's
/// int/uint/long widths).
pub fn literal_type(raw: &str) -> CType {
    if raw.contains('.') || (!raw.starts_with("0x") && raw.contains(['e', 'E'])) {
        return CType::scalar(BaseType::Double);
    }
    let lower = raw.to_ascii_lowercase();
    let unsigned = lower.trim_end_matches('l').ends_with('u');
    let value = crate::analyzer::parse_c_int_literal(raw).unwrap_or(0);
    let hex = raw.starts_with("0x") || raw.starts_with("0X");
    let (width, uns) = if unsigned {
        if value as u64 > u32::MAX as u64 {
            (IntWidth::Long, true)
        } else {
            (IntWidth::Int, true)
        }
    } else if value >= i32::MIN as i64 && value <= i32::MAX as i64 {
        (IntWidth::Int, false)
    } else if hex && value >= 0 && value <= u32::MAX as i64 {
        (IntWidth::Int, true)
    } else {
        (IntWidth::Long, false)
    };
    CType::scalar(BaseType::Int {
        width,
        unsigned: uns,
    })
}

/// Literal text with C suffixes stripped (Rust literals are unsuffixed and
/// adapt by inference).
pub fn literal_text(raw: &str) -> String {
    if raw.contains('.') {
        let t = raw.trim_end_matches(['f', 'F', 'l', 'L']);
        if t.ends_with('.') {
            return format!("{t}0");
        }
        return t.to_string();
    }
    raw.trim_end_matches(['u', 'U', 'l', 'L']).to_string()
}
