//! Character cursor shared by the N-Triples, Turtle-subset and query parsers.

use super::term::{Iri, Literal, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LexError {
    pub pos: usize,
    pub reason: String,
}

pub(crate) struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    pub fn new(src: &str) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    pub fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).copied()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    /// Case-insensitive keyword test that also requires a word boundary after it.
    pub fn starts_with_keyword(&self, kw: &str) -> bool {
        let n = kw.chars().count();
        kw.chars().enumerate().all(|(i, c)| self.peek_at(i).is_some_and(|p| p.eq_ignore_ascii_case(&c)))
            && !self.peek_at(n).is_some_and(|c| c.is_alphanumeric() || c == '_')
    }

    pub fn advance(&mut self, n: usize) {
        self.pos = (self.pos + n).min(self.chars.len());
    }

    /// Skips spaces, tabs and (when `newlines`) line breaks plus `#` comments.
    pub fn skip_ws(&mut self, newlines: bool) {
        while let Some(c) = self.peek() {
            match c {
                ' ' | '\t' => self.pos += 1,
                '\n' | '\r' if newlines => self.pos += 1,
                '#' => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    pub fn err<T>(&self, reason: impl Into<String>) -> Result<T, LexError> {
        Err(LexError { pos: self.pos, reason: reason.into() })
    }

    pub fn err_at<T>(&self, pos: usize, reason: impl Into<String>) -> Result<T, LexError> {
        Err(LexError { pos, reason: reason.into() })
    }

    /// 1-based (line, column) of a character offset.
    pub fn line_col(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in self.chars.iter().take(pos) {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn read_uchar(&mut self) -> Result<char, LexError> {
        let start = self.pos;
        let len = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return self.err_at(start, "invalid escape sequence"),
        };
        let mut code = 0u32;
        for _ in 0..len {
            match self.bump().and_then(|c| c.to_digit(16)) {
                Some(d) => code = code * 16 + d,
                None => return self.err_at(start, "invalid unicode escape"),
            }
        }
        char::from_u32(code).map_or_else(|| self.err_at(start, "escape is not a valid code point"), Ok)
    }

    /// `<...>` with `\u` escapes. Returns the raw IRI text.
    pub fn read_iriref(&mut self) -> Result<String, LexError> {
        let start = self.pos;
        if !self.eat('<') {
            return self.err("expected '<'");
        }
        let mut out = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return self.err_at(start, "unterminated IRI"),
                Some('>') => break,
                Some('\\') => out.push(self.read_uchar()?),
                Some(c) if c <= ' ' || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return self.err_at(self.pos - 1, format!("character {c:?} not allowed in IRI"));
                }
                Some(c) => out.push(c),
            }
        }
        if out.is_empty() {
            return self.err_at(start, "empty IRI");
        }
        Ok(out)
    }

    pub fn read_iri(&mut self) -> Result<Iri, LexError> {
        let start = self.pos;
        let raw = self.read_iriref()?;
        Iri::new(raw).or_else(|e| self.err_at(start, e.to_string()))
    }

    /// `"..."` with string escapes; single line only.
    pub fn read_string(&mut self) -> Result<String, LexError> {
        let start = self.pos;
        if !self.eat('"') {
            return self.err("expected '\"'");
        }
        let mut out = String::new();
        loop {
            match self.bump() {
                None | Some('\n') | Some('\r') => return self.err_at(start, "unterminated string literal"),
                Some('"') => return Ok(out),
                Some('\\') => {
                    let c = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') | Some('U') => {
                            out.push(self.read_uchar()?);
                            continue;
                        }
                        _ => return self.err("invalid escape sequence"),
                    };
                    self.pos += 1;
                    out.push(c);
                }
                Some(c) => out.push(c),
            }
        }
    }

    pub fn read_langtag(&mut self) -> Result<String, LexError> {
        let start = self.pos;
        let mut tag = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                tag.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        let mut parts = tag.split('-');
        let first_ok = parts.next().is_some_and(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphabetic()));
        if !first_ok || !parts.all(|p| !p.is_empty()) {
            return self.err_at(start, "malformed language tag");
        }
        Ok(tag)
    }

    /// Label after `_:`.
    pub fn read_blank_label(&mut self) -> Result<String, LexError> {
        let start = self.pos;
        let mut label = String::new();
        match self.peek() {
            Some(c) if c.is_alphanumeric() || c == '_' => {}
            _ => return self.err("malformed blank node label"),
        }
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                label.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        while label.ends_with('.') {
            label.pop();
            self.pos -= 1;
        }
        if label.is_empty() {
            return self.err_at(start, "malformed blank node label");
        }
        Ok(label)
    }

    /// Literal suffix: optional `@lang` or `^^<iri>`.
    pub fn read_literal_suffix(&mut self, lexical: String) -> Result<Literal, LexError> {
        if self.eat('@') {
            let tag = self.read_langtag()?;
            Ok(Literal::lang(lexical, tag))
        } else if self.starts_with("^^") {
            self.advance(2);
            let dt = self.read_iri()?;
            Ok(Literal::typed(lexical, dt))
        } else {
            Ok(Literal::plain(lexical))
        }
    }

    /// One N-Triples term.
    pub fn read_nt_term(&mut self) -> Result<Term, LexError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.read_iri()?)),
            Some('_') if self.peek_at(1) == Some(':') => {
                self.advance(2);
                let label = self.read_blank_label()?;
                Ok(Term::Iri(Iri::blank(&label).expect("label validated by lexer")))
            }
            Some('"') => {
                let lex = self.read_string()?;
                Ok(Term::Literal(self.read_literal_suffix(lex)?))
            }
            Some(c) => self.err(format!("unexpected character {c:?}")),
            None => self.err("unexpected end of input"),
        }
    }

    /// Prefixed name `prefix:local`; returns (prefix, local).
    pub fn read_pname(&mut self) -> Result<(String, String), LexError> {
        let start = self.pos;
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                prefix.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if prefix.ends_with('.') || prefix.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '.') {
            return self.err_at(start, "malformed prefixed name");
        }
        if !self.eat(':') {
            return self.err_at(start, "expected prefixed name");
        }
        let mut local = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '%') {
                local.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        while local.ends_with('.') {
            local.pop();
            self.pos -= 1;
        }
        Ok((prefix, local))
    }
}
