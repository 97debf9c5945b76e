//! Tokenizer and parser helpers shared by every textual language of the
//! toolchain (`.arc`, `.gen`, `.app` and the embedded behavior bodies).
//!
//! Whitespace is free and `//` starts a line comment.

use std::fmt;

use thiserror::Error;

use crate::diag::Pos;
use crate::value::{QName, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}:{}: expected {expected}, found {found}", pos.line, pos.col)]
pub struct ParseError {
    pub pos: Pos,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    pub fn new(pos: Pos, expected: impl Into<String>, found: impl Into<String>) -> Self {
        Self { pos, expected: expected.into(), found: found.into() }
    }

    pub fn line(&self) -> u32 {
        self.pos.line
    }

    pub fn column(&self) -> u32 {
        self.pos.col
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sym {
    Semi,
    Comma,
    Dot,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Arrow,
    EqEq,
    Eq,
    Slash,
}

impl Sym {
    pub fn text(self) -> &'static str {
        match self {
            Sym::Semi => ";",
            Sym::Comma => ",",
            Sym::Dot => ".",
            Sym::LBrace => "{",
            Sym::RBrace => "}",
            Sym::LBracket => "[",
            Sym::RBracket => "]",
            Sym::Arrow => "->",
            Sym::EqEq => "==",
            Sym::Eq => "=",
            Sym::Slash => "/",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Sym(Sym),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Str(s) => write!(f, "string {}", quote(s)),
            Tok::Sym(s) => write!(f, "`{}`", s.text()),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Quotes a string with the escapes the lexer understands.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Incremental tokenizer with one token of lookahead.
pub struct Lexer<'a> {
    src: &'a str,
    offset: usize,
    line: u32,
    col: u32,
    peeked: Option<Token>,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Self { src, offset: 0, line: 1, col: 1, peeked: None }
    }

    fn here(&self) -> Pos {
        Pos::new(self.line, self.col)
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.offset..].chars().next()
    }

    fn peek_char2(&self) -> Option<char> {
        let mut it = self.src[self.offset..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek_char() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.peek_char2() == Some('/') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => return,
            }
        }
    }

    fn lex(&mut self) -> Result<Token, ParseError> {
        self.skip_trivia();
        let pos = self.here();
        let Some(c) = self.peek_char() else {
            return Ok(Token { tok: Tok::Eof, pos });
        };
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = self.offset;
            while matches!(self.peek_char(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                self.bump();
            }
            Tok::Ident(self.src[start..self.offset].to_string())
        } else if c.is_ascii_digit() || (c == '-' && matches!(self.peek_char2(), Some(d) if d.is_ascii_digit())) {
            let start = self.offset;
            self.bump();
            while matches!(self.peek_char(), Some(c) if c.is_ascii_digit()) {
                self.bump();
            }
            let text = &self.src[start..self.offset];
            let n = text
                .parse::<i64>()
                .map_err(|_| ParseError::new(pos, "integer literal", format!("out-of-range `{text}`")))?;
            Tok::Int(n)
        } else if c == '"' {
            self.bump();
            let mut s = String::new();
            loop {
                match self.bump() {
                    None | Some('\n') => {
                        return Err(ParseError::new(pos, "closing `\"`", "end of line"));
                    }
                    Some('"') => break,
                    Some('\\') => match self.bump() {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        Some('r') => s.push('\r'),
                        other => {
                            let found = other.map_or("end of input".to_string(), |c| format!("`\\{c}`"));
                            return Err(ParseError::new(self.here(), "string escape", found));
                        }
                    },
                    Some(c) => s.push(c),
                }
            }
            Tok::Str(s)
        } else {
            self.bump();
            let sym = match c {
                ';' => Sym::Semi,
                ',' => Sym::Comma,
                '.' => Sym::Dot,
                '{' => Sym::LBrace,
                '}' => Sym::RBrace,
                '[' => Sym::LBracket,
                ']' => Sym::RBracket,
                '/' => Sym::Slash,
                '-' if self.peek_char() == Some('>') => {
                    self.bump();
                    Sym::Arrow
                }
                '=' if self.peek_char() == Some('=') => {
                    self.bump();
                    Sym::EqEq
                }
                '=' => Sym::Eq,
                other => return Err(ParseError::new(pos, "token", format!("character `{other}`"))),
            };
            Tok::Sym(sym)
        };
        Ok(Token { tok, pos })
    }

    pub fn peek(&mut self) -> Result<&Token, ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex()?);
        }
        Ok(self.peeked.as_ref().expect("just filled"))
    }

    pub fn next_token(&mut self) -> Result<Token, ParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lex(),
        }
    }

    /// Reads raw text up to the `}` matching an already consumed `{`.
    /// String literals and line comments are skipped while counting braces.
    /// Returns the text and the position of its first character.
    pub fn raw_balanced(&mut self) -> Result<(String, Pos), ParseError> {
        assert!(self.peeked.is_none(), "raw_balanced called with a buffered token");
        let origin = self.here();
        let start = self.offset;
        let mut depth = 1usize;
        loop {
            let Some(c) = self.peek_char() else {
                return Err(ParseError::new(self.here(), "`}`", "end of input"));
            };
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        let body = self.src[start..self.offset].to_string();
                        self.bump();
                        return Ok((body, origin));
                    }
                }
                '"' => {
                    self.bump();
                    while let Some(c) = self.bump() {
                        match c {
                            '\\' => {
                                self.bump();
                            }
                            '"' | '\n' => break,
                            _ => {}
                        }
                    }
                    continue;
                }
                '/' if self.peek_char2() == Some('/') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                    continue;
                }
                _ => {}
            }
            self.bump();
        }
    }

    // Parser conveniences.

    pub fn expect_sym(&mut self, sym: Sym) -> Result<Pos, ParseError> {
        let t = self.next_token()?;
        if t.tok == Tok::Sym(sym) {
            Ok(t.pos)
        } else {
            Err(ParseError::new(t.pos, format!("`{}`", sym.text()), t.tok.to_string()))
        }
    }

    pub fn eat_sym(&mut self, sym: Sym) -> Result<bool, ParseError> {
        if self.peek()?.tok == Tok::Sym(sym) {
            self.next_token()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub fn at_sym(&mut self, sym: Sym) -> Result<bool, ParseError> {
        Ok(self.peek()?.tok == Tok::Sym(sym))
    }

    pub fn at_keyword(&mut self, kw: &str) -> Result<bool, ParseError> {
        Ok(matches!(&self.peek()?.tok, Tok::Ident(s) if s == kw))
    }

    pub fn eat_keyword(&mut self, kw: &str) -> Result<bool, ParseError> {
        if self.at_keyword(kw)? {
            self.next_token()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<Pos, ParseError> {
        let t = self.next_token()?;
        match &t.tok {
            Tok::Ident(s) if s == kw => Ok(t.pos),
            other => Err(ParseError::new(t.pos, format!("`{kw}`"), other.to_string())),
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        let t = self.next_token()?;
        match t.tok {
            Tok::Ident(s) => Ok((s, t.pos)),
            other => Err(ParseError::new(t.pos, what, other.to_string())),
        }
    }

    pub fn expect_qname(&mut self, what: &str) -> Result<(QName, Pos), ParseError> {
        let (first, pos) = self.expect_ident(what)?;
        let mut parts = vec![first];
        while self.eat_sym(Sym::Dot)? {
            parts.push(self.expect_ident("name after `.`")?.0);
        }
        Ok((QName::from_segments(parts), pos))
    }

    pub fn expect_int(&mut self, what: &str) -> Result<(i64, Pos), ParseError> {
        let t = self.next_token()?;
        match t.tok {
            Tok::Int(i) => Ok((i, t.pos)),
            other => Err(ParseError::new(t.pos, what, other.to_string())),
        }
    }

    pub fn expect_string(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        let t = self.next_token()?;
        match t.tok {
            Tok::Str(s) => Ok((s, t.pos)),
            other => Err(ParseError::new(t.pos, what, other.to_string())),
        }
    }

    /// `STRING | INT | true | false`
    pub fn expect_literal(&mut self) -> Result<(Value, Pos), ParseError> {
        let t = self.next_token()?;
        let v = match t.tok {
            Tok::Str(s) => Value::Str(s),
            Tok::Int(i) => Value::Int(i),
            Tok::Ident(ref s) if s == "true" => Value::Bool(true),
            Tok::Ident(ref s) if s == "false" => Value::Bool(false),
            other => return Err(ParseError::new(t.pos, "literal", other.to_string())),
        };
        Ok((v, t.pos))
    }

    pub fn expect_eof(&mut self) -> Result<(), ParseError> {
        let t = self.next_token()?;
        match t.tok {
            Tok::Eof => Ok(()),
            other => Err(ParseError::new(t.pos, "end of input", other.to_string())),
        }
    }

    pub fn at_eof(&mut self) -> Result<bool, ParseError> {
        Ok(self.peek()?.tok == Tok::Eof)
    }
}
