//! Expression grammar shared by model files and the command line.
//!
//! ```text
//! element  := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := coeff | gen ['^' int]
//! coeff    := int ['/' int]
//! ```
//!
//! This accepts everything of the form `[coeff '*'] monomial | coeff` and a little more
//! (a coefficient may appear anywhere in a product).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::{Monomial, Terms};
use super::GeneratorSpec;
use crate::error::{Error, Result};
use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let err = |reason: String| Error::Parse {
        input: input.to_string(),
        reason,
    };
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' | '\u{00b7}' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token::Int(s.parse().map_err(|_| err(format!("bad integer {s}")))?));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(err(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    input: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    generators: &'a [GeneratorSpec],
    odd: Vec<bool>,
}

impl Parser<'_> {
    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Parse {
            input: self.input.to_string(),
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn element(&mut self) -> Result<Terms> {
        if self.tokens.is_empty() {
            return Err(self.err("empty expression"));
        }
        let mut terms = Terms::new();
        let mut negative = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                true
            }
            Some(Token::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            if let Some((m, mut c)) = self.term()? {
                if negative {
                    c = -c;
                }
                let entry = terms.entry(m).or_insert_with(Rational::zero);
                *entry += c;
            }
            match self.next() {
                None => break,
                Some(Token::Plus) => negative = false,
                Some(Token::Minus) => negative = true,
                Some(t) => return Err(self.err(format!("unexpected token {t:?}"))),
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(terms)
    }

    /// A product of factors. `None` when an odd generator appears twice.
    fn term(&mut self) -> Result<Option<(Monomial, Rational)>> {
        let n = self.generators.len();
        let mut mono = Monomial::one(n);
        let mut coeff = Rational::one();
        let mut vanished = false;
        loop {
            match self.next() {
                Some(Token::Int(num)) => {
                    let mut c = Rational::from_integer(num);
                    if self.peek() == Some(&Token::Slash) {
                        self.pos += 1;
                        match self.next() {
                            Some(Token::Int(den)) if !den.is_zero() => {
                                c /= Rational::from_integer(den);
                            }
                            _ => return Err(self.err("expected a non-zero denominator")),
                        }
                    }
                    coeff *= c;
                }
                Some(Token::Ident(name)) => {
                    let idx = self
                        .generators
                        .iter()
                        .position(|g| g.name == name)
                        .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
                    let mut power = 1u32;
                    if self.peek() == Some(&Token::Caret) {
                        self.pos += 1;
                        match self.next() {
                            Some(Token::Int(e)) => {
                                power = e
                                    .try_into()
                                    .map_err(|_| self.err("exponent too large"))?;
                            }
                            _ => return Err(self.err("expected an integer exponent")),
                        }
                    }
                    if power > 0 {
                        let g = Monomial::generator(n, idx, power);
                        if self.odd[idx] && power > 1 {
                            vanished = true;
                        } else if let Some((m, neg)) = mono.mul_signed(&g, &self.odd) {
                            mono = m;
                            if neg {
                                coeff = -coeff;
                            }
                        } else {
                            vanished = true;
                        }
                    }
                }
                Some(t) => return Err(self.err(format!("unexpected token {t:?}"))),
                None => return Err(self.err("unexpected end of input")),
            }
            if self.peek() == Some(&Token::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(if vanished { None } else { Some((mono, coeff)) })
    }
}

/// Parses `input` into raw (unreduced) terms over `generators`.
pub fn parse_terms(input: &str, generators: &[GeneratorSpec]) -> Result<Terms> {
    let mut p = Parser {
        input,
        tokens: tokenize(input)?,
        pos: 0,
        generators,
        odd: generators.iter().map(GeneratorSpec::is_odd).collect(),
    };
    p.element()
}

/// Parses a standalone rational such as `-1/2` or `3`.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let terms = parse_terms(input, &[])?;
    match terms.len() {
        0 => Ok(Rational::zero()),
        1 => Ok(terms.into_values().next().unwrap()),
        _ => unreachable!("no generators means at most one monomial"),
    }
}
