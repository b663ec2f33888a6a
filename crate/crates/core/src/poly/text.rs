//! Polynomial text grammar:
//!
//! ```text
//! poly  := term ('+' term)*
//! term  := HEX '*' 'x^' DEC | 'x^' DEC | HEX
//! ```
//!
//! Whitespace around tokens is ignored. `x` alone is read as `x^1`.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

use super::SparsePoly;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn take_while(&mut self, pred: impl Fn(u8) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice")
    }

    fn exponent(&mut self) -> Result<u64> {
        // positioned just after 'x'
        self.skip_ws();
        if !self.eat(b'^') {
            return Ok(1);
        }
        self.skip_ws();
        let at = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.err("expected decimal exponent"));
        }
        digits.parse().map_err(|_| Error::Parse {
            pos: at,
            msg: "exponent too large".into(),
        })
    }

    fn term(&mut self, field: &FieldSpec) -> Result<(FieldElement, u64)> {
        self.skip_ws();
        if self.peek() == Some(b'x') {
            self.pos += 1;
            return Ok((field.one(), self.exponent()?));
        }
        let at = self.pos;
        if self.src[self.pos..].starts_with(b"0x") || self.src[self.pos..].starts_with(b"0X") {
            self.pos += 2;
        }
        let digits = self.take_while(|c| c.is_ascii_hexdigit());
        if digits.is_empty() {
            return Err(self.err("expected hexadecimal coefficient or 'x'"));
        }
        let value = u64::from_str_radix(digits, 16).map_err(|_| Error::Parse {
            pos: at,
            msg: "coefficient too large".into(),
        })?;
        let coeff = field.element(value).map_err(|_| Error::Parse {
            pos: at,
            msg: format!("coefficient {value:#X} out of range for GF(2^{})", field.n()),
        })?;
        if self.eat(b'*') {
            self.skip_ws();
            if self.peek() != Some(b'x') {
                return Err(self.err("expected 'x' after '*'"));
            }
            self.pos += 1;
            Ok((coeff, self.exponent()?))
        } else {
            Ok((coeff, 0))
        }
    }
}

/// Parses the polynomial text grammar into a normalized [`SparsePoly`].
pub fn parse_poly(text: &str, field: &FieldSpec) -> Result<SparsePoly> {
    let mut cur = Cursor {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut terms = vec![cur.term(field)?];
    while cur.eat(b'+') {
        terms.push(cur.term(field)?);
    }
    cur.skip_ws();
    if cur.pos != cur.src.len() {
        return Err(cur.err("unexpected character"));
    }
    SparsePoly::new(field, terms)
}
