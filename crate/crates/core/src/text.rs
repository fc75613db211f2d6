//! Text grammar for regions, used by the CLI and report files.
//!
//! ```text
//! region   := "empty" | term ("u" term)*
//! term     := ("[" | "(") bound "," bound ("]" | ")")
//! bound    := rational | "-inf" | "inf"
//! rational := int | int "/" posint
//! ```
//!
//! Whitespace is insignificant. Singletons are written `[q,q]`. Printed
//! regions (the `Display` impl on [`Region`]) round-trip through this parser.

use crate::error::{Error, Result};
use crate::regions::{Ext, Interval, Region};
use crate::Rational;
use num_bigint::BigInt;

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { bytes: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            _ => Err(self.error(format!("expected `{}`", c as char))),
        }
    }

    fn error(&self, message: String) -> Error {
        Error::Parse { offset: self.pos.min(self.bytes.len()), message }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.error("expected an integer".into()));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<BigInt>().map_err(|e| self.error(format!("bad integer: {e}")))
    }

    fn rational(&mut self) -> Result<Rational> {
        let numer = self.integer()?;
        if self.peek() == Some(b'/') {
            self.bump();
            let denom = self.integer()?;
            if denom <= BigInt::from(0) {
                return Err(self.error("denominator must be positive".into()));
            }
            Ok(Rational::new(numer, denom))
        } else {
            Ok(Rational::from(numer))
        }
    }

    fn bound(&mut self) -> Result<Ext<Rational>> {
        match self.peek() {
            Some(b'i') => {
                let w = self.word();
                if w == "inf" {
                    Ok(Ext::PosInf)
                } else {
                    Err(self.error(format!("unexpected word `{w}`")))
                }
            }
            Some(b'-') => {
                // Either "-inf" or a negative rational.
                if self.bytes.get(self.pos + 1) == Some(&b'i') {
                    self.bump();
                    let w = self.word();
                    if w == "inf" {
                        Ok(Ext::NegInf)
                    } else {
                        Err(self.error(format!("unexpected word `-{w}`")))
                    }
                } else {
                    Ok(Ext::Fin(self.rational()?))
                }
            }
            Some(c) if c.is_ascii_digit() => Ok(Ext::Fin(self.rational()?)),
            _ => Err(self.error("expected a bound".into())),
        }
    }

    fn term(&mut self) -> Result<Interval<Rational>> {
        let lower_closed = match self.bump() {
            Some(b'[') => true,
            Some(b'(') => false,
            _ => return Err(self.error("expected `[` or `(`".into())),
        };
        let lower = self.bound()?;
        self.expect(b',')?;
        let upper = self.bound()?;
        let upper_closed = match self.bump() {
            Some(b']') => true,
            Some(b')') => false,
            _ => return Err(self.error("expected `]` or `)`".into())),
        };
        let offset = self.pos;
        Interval::new(lower, lower_closed, upper, upper_closed)
            .map_err(|e| Error::Parse { offset, message: e.to_string() })
    }

    fn region(&mut self) -> Result<Region<Rational>> {
        if self.peek() == Some(b'e') {
            let w = self.word();
            if w == "empty" {
                return Ok(Region::empty());
            }
            return Err(self.error(format!("unexpected word `{w}`")));
        }
        let mut items = vec![self.term()?];
        loop {
            match self.peek() {
                Some(b'u') => {
                    let w = self.word();
                    if w != "u" {
                        return Err(self.error(format!("unexpected word `{w}`")));
                    }
                    items.push(self.term()?);
                }
                Some(_) => return Err(self.error("trailing input after region".into())),
                None => break,
            }
        }
        Ok(Region::normalize(items))
    }
}

/// Parses a region literal. The result is in normal form.
pub fn parse_region(s: &str) -> Result<Region<Rational>> {
    Lexer::new(s).region()
}

/// Parses a rational literal (`int` or `int "/" posint`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let mut lx = Lexer::new(s);
    let q = lx.rational()?;
    if lx.peek().is_some() {
        return Err(lx.error("trailing input after rational".into()));
    }
    Ok(q)
}
