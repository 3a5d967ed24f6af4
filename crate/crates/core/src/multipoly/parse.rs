//! Infix polynomial expressions: `+ - *`, `^` with a literal exponent,
//! parentheses, integer literals (read modulo p) and declared variables.
//! Juxtaposition multiplies, so `2y0` means `2*y0`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{MPoly, PolyRing};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, ch) = bytes[i];
        match ch {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '-' | '−' => {
                out.push((pos, Tok::Minus));
                i += 1;
            }
            '*' | '·' => {
                out.push((pos, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                    s.push(bytes[i].1);
                    i += 1;
                }
                out.push((pos, Tok::Num(s)));
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while i < bytes.len() && (bytes[i].1.is_alphanumeric() || bytes[i].1 == '_') {
                    s.push(bytes[i].1);
                    i += 1;
                }
                out.push((pos, Tok::Ident(s)));
            }
            c => return Err(syntax(pos, alloc::format!("unexpected character `{}`", c))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a PolyRing,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.offset();
            match self.peek().cloned() {
                Some(Tok::Num(s)) => {
                    self.pos += 1;
                    let e: u32 = s.parse().map_err(|_| syntax(at, "exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(syntax(at, "expected an integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let p = self.ring.field().characteristic();
                let v = s.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
                Ok(MPoly::constant(self.ring, self.ring.field().from_u64(v)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .ring
                    .var_index(&name)
                    .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                Ok(MPoly::var(self.ring, i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.offset(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => Err(syntax(at, alloc::format!("unexpected token {:?}", t))),
            None => Err(syntax(at, "unexpected end of expression")),
        }
    }
}

/// Parses `text` as a polynomial in `ring`.
pub fn parse_poly(ring: &PolyRing, text: &str) -> Result<MPoly> {
    let toks = lex(text)?;
    let mut parser = Parser {
        ring,
        toks,
        pos: 0,
        end: text.len(),
    };
    if parser.toks.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let poly = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(syntax(parser.offset(), "trailing input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Field;

    #[test]
    fn precedence_and_juxtaposition() {
        let f = Field::prime(7).unwrap();
        let r = PolyRing::drl(&f, ["x", "y"]);
        let a = parse_poly(&r, "2x^2y - (x - 1)*(x + 1)").unwrap();
        let b = parse_poly(&r, "2*x^2*y - x^2 + 1").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly(&r, "10").unwrap(), MPoly::from_int(&r, 3));
    }

    #[test]
    fn errors_carry_positions() {
        let f = Field::prime(7).unwrap();
        let r = PolyRing::drl(&f, ["y"]);
        assert_eq!(
            parse_poly(&r, "y^2 - u").unwrap_err(),
            Error::UnknownVariable("u".into())
        );
        match parse_poly(&r, "y^ + 1").unwrap_err() {
            Error::Syntax { offset, .. } => assert_eq!(offset, 3),
            e => panic!("{e:?}"),
        }
        assert!(parse_poly(&r, "(y + 1").is_err());
        assert!(parse_poly(&r, "y $").is_err());
    }
}
