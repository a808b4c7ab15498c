//! Token-level scanning of C source.
//!
//! Comments are skipped, string/char literals are lexed as single tokens,
//! line continuations inside preprocessor directives are folded, and every
//! token carries its byte offset so parse errors and spans can point back
//! into the file.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokKind {
    Ident,
    Number,
    Str,
    CharLit,
    Punct,
    /// A whole preprocessor directive, continuations folded, `#` included.
    Directive,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokKind,
    pub text: String,
    pub offset: usize,
}

pub struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    at_line_start: bool,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            at_line_start: true,
        }
    }

    pub fn tokens(mut self) -> Result<Vec<Token>, (usize, String)> {
        let mut out = Vec::new();
        while let Some(tok) = self.next_token()? {
            out.push(tok);
        }
        Ok(out)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.at_line_start = true;
        } else if !(b as char).is_ascii_whitespace() {
            self.at_line_start = false;
        }
        Some(b)
    }

    fn skip_trivia(&mut self) -> Result<(), (usize, String)> {
        loop {
            match self.peek() {
                Some(b) if (b as char).is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'/') if self.peek2() == Some(b'/') => {
                    while let Some(b) = self.peek() {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                Some(b'/') if self.peek2() == Some(b'*') => {
                    let start = self.pos;
                    self.bump();
                    self.bump();
                    loop {
                        match self.peek() {
                            Some(b'*') if self.peek2() == Some(b'/') => {
                                self.bump();
                                self.bump();
                                break;
                            }
                            Some(_) => {
                                self.bump();
                            }
                            None => return Err((start, "unterminated block comment".into())),
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>, (usize, String)> {
        self.skip_trivia()?;
        let start = self.pos;
        let b = match self.peek() {
            Some(b) => b,
            None => return Ok(None),
        };

        if b == b'#' && self.at_line_start {
            return Ok(Some(self.directive(start)?));
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while let Some(c) = self.peek() {
                if c.is_ascii_alphanumeric() || c == b'_' {
                    self.bump();
                } else {
                    break;
                }
            }
            return Ok(Some(self.tok(TokKind::Ident, start)));
        }
        if b.is_ascii_digit() || (b == b'.' && self.peek2().is_some_and(|c| c.is_ascii_digit())) {
            while let Some(c) = self.peek() {
                let ch = c as char;
                if ch.is_ascii_alphanumeric() || ch == '.' || ch == '_' {
                    self.bump();
                    // exponent sign
                    if (c == b'e' || c == b'E' || c == b'p' || c == b'P')
                        && matches!(self.peek(), Some(b'+') | Some(b'-'))
                        && self
                            .src
                            .get(start..self.pos)
                            .is_some_and(|s| !s.starts_with(b"0x") || c == b'p' || c == b'P')
                    {
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            return Ok(Some(self.tok(TokKind::Number, start)));
        }
        if b == b'"' {
            self.quoted(b'"', start)?;
            return Ok(Some(self.tok(TokKind::Str, start)));
        }
        if b == b'\'' {
            self.quoted(b'\'', start)?;
            return Ok(Some(self.tok(TokKind::CharLit, start)));
        }

        // Multi-byte operators, longest first.
        const OPS3: [&str; 5] = ["<<=", ">>=", "...", "->*", "<=>"];
        const OPS2: [&str; 19] = [
            "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=",
            "/=", "%=", "&=", "|=", "^=",
        ];
        let rest = &self.src[self.pos..];
        for op in OPS3 {
            if rest.starts_with(op.as_bytes()) {
                self.pos += 3;
                return Ok(Some(self.tok(TokKind::Punct, start)));
            }
        }
        for op in OPS2 {
            if rest.starts_with(op.as_bytes()) {
                self.pos += 2;
                return Ok(Some(self.tok(TokKind::Punct, start)));
            }
        }
        self.bump();
        Ok(Some(self.tok(TokKind::Punct, start)))
    }

    fn quoted(&mut self, quote: u8, start: usize) -> Result<(), (usize, String)> {
        self.bump();
        loop {
            match self.peek() {
                Some(b'\\') => {
                    self.bump();
                    self.bump();
                }
                Some(c) if c == quote => {
                    self.bump();
                    return Ok(());
                }
                Some(b'\n') | None => return Err((start, "unterminated literal".into())),
                Some(_) => {
                    self.bump();
                }
            }
        }
    }

    fn directive(&mut self, start: usize) -> Result<Token, (usize, String)> {
        let mut text = String::new();
        loop {
            match self.peek() {
                Some(b'\\') if self.peek2() == Some(b'\n') => {
                    self.bump();
                    self.bump();
                    text.push('\n');
                }
                Some(b'\\')
                    if self.peek2() == Some(b'\r') && self.src.get(self.pos + 2) == Some(&b'\n') =>
                {
                    self.bump();
                    self.bump();
                    self.bump();
                    text.push('\n');
                }
                Some(b'\n') | None => break,
                Some(b'/') if self.peek2() == Some(b'*') => {
                    self.skip_trivia()?;
                    text.push(' ');
                }
                Some(b) => {
                    self.bump();
                    text.push(b as char);
                }
            }
        }
        Ok(Token {
            kind: TokKind::Directive,
            text,
            offset: start,
        })
    }

    fn tok(&self, kind: TokKind, start: usize) -> Token {
        Token {
            kind,
            text: String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
            offset: start,
        }
    }
}

const KEYWORDS: [&str; 22] = [
    "if", "else", "while", "for", "do", "switch", "case", "default", "return", "break",
    "continue", "goto", "sizeof", "struct", "union", "enum", "typedef", "static", "const",
    "extern", "register", "volatile",
];

pub fn is_c_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Names that appear as `name(` invocation tokens in a snippet of C code.
/// Keywords (`if (`, `sizeof (`, ...) are excluded. Order of first
/// appearance, deduplicated.
pub fn invocation_tokens(code: &str) -> Vec<String> {
    let toks = match Lexer::new(code).tokens() {
        Ok(t) => t,
        Err(_) => return Vec::new(),
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for pair in toks.windows(2) {
        if pair[0].kind == TokKind::Ident
            && pair[1].kind == TokKind::Punct
            && pair[1].text == "("
            && !is_c_keyword(&pair[0].text)
            && seen.insert(pair[0].text.clone())
        {
            out.push(pair[0].text.clone());
        }
    }
    out
}

/// All identifier tokens in a snippet, keywords excluded, deduplicated in
/// order of first appearance.
pub fn ident_tokens(code: &str) -> Vec<String> {
    let toks = match Lexer::new(code).tokens() {
        Ok(t) => t,
        Err(_) => return Vec::new(),
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for t in toks {
        if t.kind == TokKind::Ident && !is_c_keyword(&t.text) && seen.insert(t.text.clone()) {
            out.push(t.text);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_idents_numbers_and_ops() {
        let toks = Lexer::new("int a = b->c + 0x1f;").tokens().unwrap();
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["int", "a", "=", "b", "->", "c", "+", "0x1f", ";"]);
    }

    #[test]
    fn skips_comments_and_lexes_strings() {
        let toks = Lexer::new("/* x */ \"a\\\"b\" // tail\n'c'")
            .tokens()
            .unwrap();
        assert_eq!(toks[0].kind, TokKind::Str);
        assert_eq!(toks[0].text, "\"a\\\"b\"");
        assert_eq!(toks[1].kind, TokKind::CharLit);
    }

    #[test]
    fn folds_directive_continuations() {
        let toks = Lexer::new("#define F(x) \\\n ((x) + 1)\nint y;")
            .tokens()
            .unwrap();
        assert_eq!(toks[0].kind, TokKind::Directive);
        assert!(toks[0].text.contains("((x) + 1)"));
        assert_eq!(toks[1].text, "int");
    }

    #[test]
    fn invocation_tokens_skip_keywords() {
        let calls = invocation_tokens("void f(void){ if (x) g(); h(1); g(); }");
        assert_eq!(calls, vec!["f".to_string(), "g".to_string(), "h".to_string()]);
    }

    #[test]
    fn hash_inside_line_is_not_directive() {
        // '#' only starts a directive at line start
        let toks = Lexer::new("a # b").tokens().unwrap();
        assert_eq!(toks.len(), 3);
        assert_eq!(toks[1].kind, TokKind::Punct);
    }
}
