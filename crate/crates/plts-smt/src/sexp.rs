//! S-expression reader for SMT-LIB v2 scripts.
//!
//! Symbols are interned; numerals are parsed as signed 64-bit (SMT-LIB
//! numerals are unsigned, but the printer side uses `(- n)`, and
//! folding benefits from a signed carrier). Comments run from `;` to
//! end of line. Quoted symbols `|…|` and string literals `"…"` (with
//! `""` escapes) are supported.

use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Sexp {
    Sym(u32),
    Num(i64),
    Str(String),
    List(Vec<Sexp>),
}

#[derive(Debug, Default)]
pub struct Interner {
    names: Vec<String>,
    map: HashMap<String, u32>,
}

impl Interner {
    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.map.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.map.insert(name.to_string(), id);
        id
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<u32> {
        self.map.get(name).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Reader<'a> {
    input: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Reader<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { message: message.into(), line: self.line }
    }

    fn skip_trivia(&mut self) {
        while self.pos < self.input.len() {
            match self.input[self.pos] {
                b'\n' => {
                    self.line += 1;
                    self.pos += 1;
                }
                b' ' | b'\t' | b'\r' => self.pos += 1,
                b';' => {
                    while self.pos < self.input.len() && self.input[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn read(&mut self, interner: &mut Interner) -> Result<Option<Sexp>, ParseError> {
        self.skip_trivia();
        let Some(&c) = self.input.get(self.pos) else {
            return Ok(None);
        };
        match c {
            b'(' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.input.get(self.pos) {
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Some(Sexp::List(items)));
                        }
                        Some(_) => match self.read(interner)? {
                            Some(s) => items.push(s),
                            None => return Err(self.error("unclosed list")),
                        },
                        None => return Err(self.error("unclosed list")),
                    }
                }
            }
            b')' => Err(self.error("unmatched `)`")),
            b'"' => {
                self.pos += 1;
                let mut text = String::new();
                loop {
                    match self.input.get(self.pos) {
                        Some(b'"') if self.input.get(self.pos + 1) == Some(&b'"') => {
                            text.push('"');
                            self.pos += 2;
                        }
                        Some(b'"') => {
                            self.pos += 1;
                            return Ok(Some(Sexp::Str(text)));
                        }
                        Some(&b) => {
                            if b == b'\n' {
                                self.line += 1;
                            }
                            text.push(b as char);
                            self.pos += 1;
                        }
                        None => return Err(self.error("unterminated string literal")),
                    }
                }
            }
            b'|' => {
                self.pos += 1;
                let start = self.pos;
                while let Some(&b) = self.input.get(self.pos) {
                    if b == b'|' {
                        let text = std::str::from_utf8(&self.input[start..self.pos])
                            .map_err(|_| self.error("non-UTF-8 quoted symbol"))?;
                        let id = interner.intern(text);
                        self.pos += 1;
                        return Ok(Some(Sexp::Sym(id)));
                    }
                    if b == b'\n' {
                        self.line += 1;
                    }
                    self.pos += 1;
                }
                Err(self.error("unterminated quoted symbol"))
            }
            _ => {
                let start = self.pos;
                while let Some(&b) = self.input.get(self.pos) {
                    if matches!(b, b'(' | b')' | b'"' | b'|' | b';' | b' ' | b'\t' | b'\r' | b'\n')
                    {
                        break;
                    }
                    self.pos += 1;
                }
                let token = std::str::from_utf8(&self.input[start..self.pos])
                    .map_err(|_| self.error("non-UTF-8 token"))?;
                let numeric = token.bytes().all(|b| b.is_ascii_digit())
                    || (token.len() > 1
                        && token.starts_with('-')
                        && token[1..].bytes().all(|b| b.is_ascii_digit()));
                if numeric {
                    let n: i64 = token
                        .parse()
                        .map_err(|_| self.error(format!("numeral out of range: {token}")))?;
                    Ok(Some(Sexp::Num(n)))
                } else {
                    Ok(Some(Sexp::Sym(interner.intern(token))))
                }
            }
        }
    }
}

/// Incremental reader that yields one top-level s-expression at a time,
/// so large scripts can be processed without materializing every form.
pub struct SexpStream<'a> {
    reader: Reader<'a>,
}

impl<'a> SexpStream<'a> {
    pub fn new(input: &'a str) -> Self {
        SexpStream { reader: Reader { input: input.as_bytes(), pos: 0, line: 1 } }
    }

    pub fn next(&mut self, interner: &mut Interner) -> Result<Option<Sexp>, ParseError> {
        self.reader.read(interner)
    }
}

/// Reads every s-expression in `input`.
pub fn parse_all(input: &str, interner: &mut Interner) -> Result<Vec<Sexp>, ParseError> {
    let mut stream = SexpStream::new(input);
    let mut out = Vec::new();
    while let Some(s) = stream.next(interner)? {
        out.push(s);
    }
    Ok(out)
}

/// Serializes an s-expression with single spaces (used by `get-value`
/// echoing and diagnostics).
pub fn print_sexp(s: &Sexp, interner: &Interner, out: &mut String) {
    match s {
        Sexp::Sym(id) => {
            let name = interner.name(*id);
            let plain = !name.is_empty()
                && name.bytes().all(|b| {
                    !matches!(b, b'(' | b')' | b'"' | b'|' | b';' | b' ' | b'\t' | b'\r' | b'\n')
                });
            if plain {
                out.push_str(name);
            } else {
                out.push('|');
                out.push_str(name);
                out.push('|');
            }
        }
        Sexp::Num(n) => {
            if *n < 0 {
                out.push_str("(- ");
                out.push_str(&n.unsigned_abs().to_string());
                out.push(')');
            } else {
                out.push_str(&n.to_string());
            }
        }
        Sexp::Str(text) => {
            out.push('"');
            for ch in text.chars() {
                if ch == '"' {
                    out.push('"');
                }
                out.push(ch);
            }
            out.push('"');
        }
        Sexp::List(items) => {
            out.push('(');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                print_sexp(item, interner, out);
            }
            out.push(')');
        }
    }
}
