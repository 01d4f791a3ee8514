//! Element expressions such as `1/2 a[-1]^2|0> - a[-3]a[-1]|0>`.
//!
//! A term is an optional coefficient (`p` or `p/q`), a word of creation
//! modes and the vacuum `|0>`. The word is applied right to left, so any
//! order of modes is accepted and the result is normal ordered; in
//! particular `L[-1]|0>` evaluates to 0. The literal `0` is the zero vector.

use std::fmt;

use num_traits::One;
use zhu_core::{Model, ModelKind, Rational, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source text.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug)]
pub struct ElementExpr {
    pub source: String,
    pub vector: Vector,
}

pub fn parse_element(model: &Model, text: &str) -> Result<ElementExpr, ParseError> {
    let vector = if text.trim() == "0" { Vector::zero() } else { Parser { model, s: text.as_bytes(), pos: 0 }.expr()? };
    Ok(ElementExpr { source: text.to_string(), vector })
}

struct Parser<'a> {
    model: &'a Model,
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            Ok(())
        } else {
            self.err(format!("expected '{lit}'"))
        }
    }

    fn digits(&mut self) -> Result<&str, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits"))
    }

    fn expr(&mut self) -> Result<Vector, ParseError> {
        let mut total = Vector::zero();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty expression");
        }
        let mut first = true;
        while self.peek().is_some() {
            let negative = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ if first => {
                    first = false;
                    total.add_scaled(&self.term()?, &Rational::one());
                    self.skip_ws();
                    continue;
                }
                _ => return self.err("expected '+' or '-'"),
            };
            first = false;
            self.pos += 1;
            self.skip_ws();
            let sign = if negative { -Rational::one() } else { Rational::one() };
            total.add_scaled(&self.term()?, &sign);
            self.skip_ws();
        }
        Ok(total)
    }

    fn coefficient(&mut self) -> Result<Rational, ParseError> {
        if !self.peek().is_some_and(|b| b.is_ascii_digit()) {
            return Ok(Rational::one());
        }
        let start = self.pos;
        let num = self.digits()?.to_string();
        let mut text = num;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            text = format!("{text}/{}", self.digits()?);
        }
        match zhu_core::rational::parse(&text) {
            Some(q) => Ok(q),
            None => Err(ParseError { pos: start, msg: format!("malformed fraction '{text}'") }),
        }
    }

    fn term(&mut self) -> Result<Vector, ParseError> {
        let coeff = self.coefficient()?;
        self.skip_ws();
        let mut word = Vec::new();
        while let Some(b) = self.peek().filter(u8::is_ascii_alphabetic) {
            let at = self.pos;
            let expected = match self.model.kind() {
                ModelKind::Heisenberg => b'a',
                ModelKind::Virasoro => b'L',
            };
            if b != expected {
                return self.err(format!("unknown generator '{}' for this model (expected '{}')", b as char, expected as char));
            }
            self.pos += 1;
            self.expect("[")?;
            let sign_at = self.pos;
            let negative = self.peek() == Some(b'-');
            if negative {
                self.pos += 1;
            }
            let k: i64 = match self.digits()?.parse() {
                Ok(k) => k,
                Err(_) => return self.err("mode index out of range"),
            };
            if !negative || k == 0 {
                return Err(ParseError { pos: sign_at, msg: "positive mode in a creation slot".into() });
            }
            self.expect("]")?;
            let mut reps = 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                reps = match self.digits()?.parse::<u32>() {
                    Ok(r) => r,
                    Err(_) => return self.err("exponent out of range"),
                };
            }
            word.push((at, -k, reps));
            self.skip_ws();
        }
        self.expect("|0>")?;
        let mut v = self.model.vacuum();
        for &(_, mode, reps) in word.iter().rev() {
            // a[n] is the mode a_n, L[n] is ω_{n+1}
            let j = match self.model.kind() {
                ModelKind::Heisenberg => mode,
                ModelKind::Virasoro => mode + 1,
            };
            for _ in 0..reps {
                v = v.flat_map(|m| self.model.generator_mode(j, m));
            }
        }
        Ok(v.scaled(&coeff))
    }
}
