//! Lexer, token cursor and literal syntax shared by the predicate language
//! and the graph/schema DSL.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::model::{Decimal, Ident, Number, Property, PropertyBag, Value};

/// 1-based line and column (in characters) plus the byte offset.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub start: Position,
    pub end: Position,
}

impl SourceSpan {
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            start: self.start,
            end: other.end.max(self.end),
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.start.line, self.start.column)
    }
}

/// A syntax error with the set of tokens that would have been accepted.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct SyntaxError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum TokenKind {
    Ident(String),
    Str(String),
    Num(Number),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Arrow,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Str(_) => "string".into(),
            TokenKind::Num(_) => "number".into(),
            TokenKind::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::Comma => ",",
            TokenKind::Semi => ";",
            TokenKind::Colon => ":",
            TokenKind::Arrow => "->",
            TokenKind::Eq => "=",
            TokenKind::Neq => "!=",
            TokenKind::Lt => "<",
            TokenKind::Le => "<=",
            TokenKind::Gt => ">",
            TokenKind::Ge => ">=",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

struct Lexer<'a> {
    src: &'a str,
    file: Arc<str>,
    offset: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn position(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
            offset: self.offset,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.offset..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.offset..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span_from(&self, start: Position) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            start,
            end: self.position(),
        }
    }

    fn error(&self, start: Position, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            span: self.span_from(start),
            message: message.into(),
            expected: Vec::new(),
        }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn run(mut self) -> Result<Vec<Token>, SyntaxError> {
        let mut tokens = Vec::new();
        loop {
            self.skip_trivia();
            let start = self.position();
            let Some(c) = self.peek() else {
                tokens.push(Token {
                    kind: TokenKind::Eof,
                    span: self.span_from(start),
                });
                return Ok(tokens);
            };
            let kind = match c {
                '{' | '}' | '(' | ')' | ',' | ';' | ':' => {
                    self.bump();
                    match c {
                        '{' => TokenKind::LBrace,
                        '}' => TokenKind::RBrace,
                        '(' => TokenKind::LParen,
                        ')' => TokenKind::RParen,
                        ',' => TokenKind::Comma,
                        ';' => TokenKind::Semi,
                        _ => TokenKind::Colon,
                    }
                }
                '=' => {
                    self.bump();
                    TokenKind::Eq
                }
                '!' => {
                    self.bump();
                    if self.peek() == Some('=') {
                        self.bump();
                        TokenKind::Neq
                    } else {
                        return Err(self.error(start, "unexpected character `!`"));
                    }
                }
                '<' | '>' => {
                    self.bump();
                    let eq = self.peek() == Some('=');
                    if eq {
                        self.bump();
                    }
                    match (c, eq) {
                        ('<', false) => TokenKind::Lt,
                        ('<', true) => TokenKind::Le,
                        ('>', false) => TokenKind::Gt,
                        _ => TokenKind::Ge,
                    }
                }
                '-' if self.peek2() == Some('>') => {
                    self.bump();
                    self.bump();
                    TokenKind::Arrow
                }
                '-' | '0'..='9' => self.number(start)?,
                '"' => self.string(start)?,
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let from = self.offset;
                    while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                        self.bump();
                    }
                    TokenKind::Ident(self.src[from..self.offset].to_owned())
                }
                other => {
                    self.bump();
                    return Err(self.error(start, format!("unexpected character `{other}`")));
                }
            };
            tokens.push(Token {
                kind,
                span: self.span_from(start),
            });
        }
    }

    fn digits(&mut self) -> usize {
        let mut n = 0;
        while matches!(self.peek(), Some('0'..='9')) {
            self.bump();
            n += 1;
        }
        n
    }

    fn number(&mut self, start: Position) -> Result<TokenKind, SyntaxError> {
        let from = self.offset;
        if self.peek() == Some('-') {
            self.bump();
        }
        if self.digits() == 0 {
            return Err(self.error(start, "expected digits after `-`"));
        }
        let mut decimal = false;
        if self.peek() == Some('.') {
            self.bump();
            decimal = true;
            if self.digits() == 0 {
                return Err(self.error(start, "expected digits after decimal point"));
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            self.bump();
            decimal = true;
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            if self.digits() == 0 {
                return Err(self.error(start, "expected exponent digits"));
            }
        }
        let text = &self.src[from..self.offset];
        if decimal {
            let x: f64 = text
                .parse()
                .map_err(|_| self.error(start, "malformed decimal"))?;
            let d = Decimal::new(x).map_err(|_| self.error(start, "decimal out of range"))?;
            Ok(TokenKind::Num(Number::Dec(d)))
        } else {
            let i: BigInt = text
                .parse()
                .map_err(|_| self.error(start, "malformed integer"))?;
            Ok(TokenKind::Num(Number::Int(i)))
        }
    }

    fn string(&mut self, start: Position) -> Result<TokenKind, SyntaxError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error(start, "unterminated string")),
                Some('"') => return Ok(TokenKind::Str(out)),
                Some('\\') => {
                    let esc = self.position();
                    match self.bump() {
                        Some('"') => out.push('"'),
                        Some('\\') => out.push('\\'),
                        Some('n') => out.push('\n'),
                        Some('t') => out.push('\t'),
                        Some('r') => out.push('\r'),
                        Some('u') => out.push(self.unicode_escape(esc)?),
                        _ => return Err(self.error(esc, "unknown escape sequence")),
                    }
                }
                Some(c) => out.push(c),
            }
        }
    }

    fn unicode_escape(&mut self, start: Position) -> Result<char, SyntaxError> {
        if self.bump() != Some('{') {
            return Err(self.error(start, "expected `{` after `\\u`"));
        }
        let from = self.offset;
        while matches!(self.peek(), Some(c) if c.is_ascii_hexdigit()) {
            self.bump();
        }
        let hex = &self.src[from..self.offset];
        if self.bump() != Some('}') || hex.is_empty() || hex.len() > 6 {
            return Err(self.error(start, "malformed unicode escape"));
        }
        u32::from_str_radix(hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.error(start, "invalid unicode scalar value"))
    }
}

pub(crate) fn lex(src: &str, file: &str) -> Result<Vec<Token>, SyntaxError> {
    Lexer {
        src,
        file: Arc::from(file),
        offset: 0,
        line: 1,
        column: 1,
    }
    .run()
}

/// Cursor over a token vector that always ends with `Eof`.
pub(crate) struct Tokens {
    tokens: Vec<Token>,
    pos: usize,
}

impl Tokens {
    pub(crate) fn new(src: &str, file: &str) -> Result<Self, SyntaxError> {
        Ok(Tokens {
            tokens: lex(src, file)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub(crate) fn next(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    pub(crate) fn at(&self, kind: &TokenKind) -> bool {
        &self.peek().kind == kind
    }

    pub(crate) fn at_word(&self, word: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(w) if w == word)
    }

    pub(crate) fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.next();
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&self, expected: &[&str]) -> SyntaxError {
        let tok = self.peek();
        SyntaxError {
            span: tok.span.clone(),
            message: format!("unexpected {}", tok.kind.describe()),
            expected: expected.iter().map(|s| (*s).to_owned()).collect(),
        }
    }

    pub(crate) fn expect(&mut self, kind: &TokenKind, display: &str) -> Result<Token, SyntaxError> {
        if self.at(kind) {
            Ok(self.next())
        } else {
            Err(self.error(&[display]))
        }
    }

    pub(crate) fn expect_word(&mut self, word: &str) -> Result<Token, SyntaxError> {
        if self.at_word(word) {
            Ok(self.next())
        } else {
            Err(self.error(&[&format!("`{word}`")]))
        }
    }

    pub(crate) fn expect_ident(&mut self) -> Result<(Ident, SourceSpan), SyntaxError> {
        match &self.peek().kind {
            TokenKind::Ident(w) => {
                let id = Ident::new(w.clone()).expect("lexer only produces valid identifiers");
                let tok = self.next();
                Ok((id, tok.span))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    pub(crate) fn expect_eof(&mut self) -> Result<(), SyntaxError> {
        if self.at(&TokenKind::Eof) {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }
}

pub(crate) const LITERAL_START: &[&str] = &["string", "number", "`true`", "`false`", "`{`"];

/// `literal := string | number | "true" | "false" | objliteral`
pub(crate) fn parse_literal(tokens: &mut Tokens) -> Result<Value, SyntaxError> {
    let value = match &tokens.peek().kind {
        TokenKind::Str(s) => Value::Text(s.clone()),
        TokenKind::Num(n) => Value::from(n.clone()),
        TokenKind::Ident(w) if w == "true" => Value::Bool(true),
        TokenKind::Ident(w) if w == "false" => Value::Bool(false),
        TokenKind::LBrace => return parse_object(tokens).map(Value::Obj),
        _ => return Err(tokens.error(LITERAL_START)),
    };
    tokens.next();
    Ok(value)
}

/// `objliteral := "{" { ident "=" literal [";"] } "}"`
pub(crate) fn parse_object(tokens: &mut Tokens) -> Result<PropertyBag, SyntaxError> {
    tokens.expect(&TokenKind::LBrace, "`{`")?;
    let mut props = Vec::new();
    while !tokens.eat(&TokenKind::RBrace) {
        let (name, _) = tokens.expect_ident().map_err(|_| tokens.error(&["identifier", "`}`"]))?;
        tokens.expect(&TokenKind::Eq, "`=`")?;
        let value = parse_literal(tokens)?;
        props.push(Property { name, value });
        if !tokens.eat(&TokenKind::Semi) && !tokens.at(&TokenKind::RBrace) {
            return Err(tokens.error(&["`;`", "`}`"]));
        }
    }
    Ok(PropertyBag::new(props))
}

pub(crate) fn number_literal(tokens: &mut Tokens) -> Result<Number, SyntaxError> {
    match &tokens.peek().kind {
        TokenKind::Num(n) => {
            let n = n.clone();
            tokens.next();
            Ok(n)
        }
        _ => Err(tokens.error(&["number"])),
    }
}

pub(crate) fn write_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => out.push_str(&format!("\\u{{{:x}}}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

pub(crate) fn write_value(out: &mut String, value: &Value) {
    match value {
        Value::Text(s) => write_string(out, s),
        Value::Int(i) => out.push_str(&i.to_string()),
        Value::Dec(d) => out.push_str(&d.to_string()),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Obj(bag) => {
            if bag.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{ ");
            for p in bag {
                out.push_str(p.name.as_str());
                out.push_str(" = ");
                write_value(out, &p.value);
                out.push_str("; ");
            }
            out.push('}');
        }
    }
}

pub fn value_to_string(value: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, value);
    s
}
