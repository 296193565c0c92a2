//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! expr    := ('+'|'-')? term (('+'|'-') term)*
//! term    := unary (('*'|'/') unary)*
//! unary   := ('+'|'-') unary | power
//! power   := primary ('^' nat)*
//! primary := integer | ident | shifted | '(' expr ')'
//! shifted := 's' ('^' nat | '{' monoid-elem '}')? '(' ident ')'
//! ```
//!
//! The parser is generic over an [`ExprSink`] that builds values as the input
//! is consumed, so ordinary polynomials, difference polynomials and rational
//! functions in `t` share one grammar.

use std::fmt;

use num_bigint::BigInt;

/// A syntax or construction error at a byte offset of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

/// The shift written in front of a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftSpec<'a> {
    /// `s(X)`: the generator.
    Generator,
    /// `s^k(X)`.
    Power(u64),
    /// `s{...}(X)` with the raw text between the braces.
    Elem(&'a str),
}

pub trait ExprSink {
    type Value;

    fn integer(&mut self, n: BigInt) -> Self::Value;
    fn ident(&mut self, name: &str, offset: usize) -> Result<Self::Value, ParseError>;
    fn shifted(
        &mut self,
        shift: ShiftSpec<'_>,
        name: &str,
        offset: usize,
    ) -> Result<Self::Value, ParseError>;
    fn add(&mut self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ParseError>;
    fn sub(&mut self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ParseError>;
    fn mul(&mut self, a: Self::Value, b: Self::Value) -> Result<Self::Value, ParseError>;
    fn div(
        &mut self,
        a: Self::Value,
        b: Self::Value,
        offset: usize,
    ) -> Result<Self::Value, ParseError>;
    fn neg(&mut self, a: Self::Value) -> Result<Self::Value, ParseError>;
    fn pow(&mut self, a: Self::Value, exp: u32, offset: usize) -> Result<Self::Value, ParseError>;
}

const MAX_EXPONENT: u64 = 4096;

pub fn parse<S: ExprSink>(text: &str, sink: &mut S) -> Result<S::Value, ParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        text,
        pos: 0,
        open_parens: Vec::new(),
        sink,
    };
    let value = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(ParseError::new(
            parser.pos,
            format!("unexpected character '{}'", parser.peek_char()),
        ));
    }
    Ok(value)
}

struct Parser<'a, 's, S: ExprSink> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    open_parens: Vec<usize>,
    sink: &'s mut S,
}

impl<S: ExprSink> Parser<'_, '_, S> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        self.text[self.pos..].chars().next().unwrap_or('?')
    }

    // Where to blame a premature end of input: the innermost unclosed
    // parenthesis if any, else the end.
    fn eof_error(&self, what: &str) -> ParseError {
        match self.open_parens.last() {
            Some(&open) => ParseError::new(open, format!("unclosed '(' (expected {what})")),
            None => ParseError::new(self.src.len(), format!("unexpected end of input, expected {what}")),
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(ParseError::new(
                self.pos,
                format!("expected '{}', found '{}'", byte as char, self.peek_char()),
            )),
            None => Err(self.eof_error(&format!("'{}'", byte as char))),
        }
    }

    fn expr(&mut self) -> Result<S::Value, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.sink.add(acc, rhs)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.sink.sub(acc, rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<S::Value, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.sink.mul(acc, rhs)?;
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.sink.div(acc, rhs, at)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<S::Value, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let v = self.unary()?;
                self.sink.neg(v)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<S::Value, ParseError> {
        let mut base = self.primary()?;
        while self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            let exp = self.natural()?;
            if exp > MAX_EXPONENT {
                return Err(ParseError::new(at, format!("exponent {exp} too large")));
            }
            base = self.sink.pow(base, exp as u32, at)?;
        }
        Ok(base)
    }

    fn natural(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                self.text[start..self.pos]
                    .parse()
                    .map_err(|_| ParseError::new(start, "integer too large"))
            }
            Some(_) => Err(ParseError::new(self.pos, "expected a natural number")),
            None => Err(self.eof_error("a natural number")),
        }
    }

    fn ident_text(&mut self) -> Option<(usize, &str)> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(b) if b.is_ascii_alphabetic() || *b == b'_' => {}
            _ => return None,
        }
        while self.pos < self.src.len() {
            let b = self.src[self.pos];
            if b.is_ascii_alphanumeric() || b == b'_' || b == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Some((start, &self.text[start..self.pos]))
    }

    fn primary(&mut self) -> Result<S::Value, ParseError> {
        match self.peek() {
            None => Err(self.eof_error("an expression")),
            Some(b'(') => {
                self.open_parens.push(self.pos);
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                self.open_parens.pop();
                Ok(v)
            }
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = self.text[start..self.pos]
                    .parse()
                    .map_err(|_| ParseError::new(start, "bad integer literal"))?;
                Ok(self.sink.integer(n))
            }
            Some(b) if b.is_ascii_alphabetic() || b == b'_' => {
                let (start, name) = self.ident_text().expect("peeked an identifier start");
                let name = name.to_string();
                if name == "s" {
                    if let Some(next @ (b'(' | b'^' | b'{')) = self.peek() {
                        return self.shifted(start, next);
                    }
                }
                self.sink.ident(&name, start)
            }
            Some(_) => Err(ParseError::new(
                self.pos,
                format!("unexpected character '{}'", self.peek_char()),
            )),
        }
    }

    fn shifted(&mut self, start: usize, next: u8) -> Result<S::Value, ParseError> {
        let mut elem_range = None;
        let spec_kind = match next {
            b'^' => {
                self.pos += 1;
                Some(self.natural()?)
            }
            b'{' => {
                self.pos += 1;
                let open = self.pos;
                while self.pos < self.src.len() && self.src[self.pos] != b'}' {
                    self.pos += 1;
                }
                if self.pos >= self.src.len() {
                    return Err(ParseError::new(open - 1, "unclosed '{'"));
                }
                elem_range = Some((open, self.pos));
                self.pos += 1;
                None
            }
            _ => None,
        };
        let paren = self.pos;
        self.expect(b'(')?;
        self.open_parens.push(paren);
        let ident = self.ident_text().map(|(_, name)| name.to_string());
        let name = match ident {
            Some(name) => name,
            None if self.pos >= self.src.len() => return Err(self.eof_error("a variable")),
            None => return Err(ParseError::new(self.pos, "expected a variable inside s(...)")),
        };
        self.expect(b')')?;
        self.open_parens.pop();
        let text = self.text;
        let spec = match (spec_kind, elem_range) {
            (Some(k), _) => ShiftSpec::Power(k),
            (None, Some((a, b))) => ShiftSpec::Elem(text[a..b].trim()),
            (None, None) => ShiftSpec::Generator,
        };
        self.sink.shifted(spec, &name, start)
    }
}
