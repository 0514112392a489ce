//! Text syntax for rationals and polynomials.
//!
//! A polynomial is a sum of terms joined by `+`/`-`; a term is a product of
//! factors joined by `*`, each factor an integer, a fraction `p/q`, or a
//! variable with an optional `^k`. Variable names match
//! `[a-zA-Z][a-zA-Z0-9_]*`. There are no parentheses.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Poly, Rational};
use crate::error::{Error, Result};

/// Parses `p` or `p/q` with an optional leading sign.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let mut p = Parser::new(text);
    p.skip_ws();
    let neg = p.eat(b'-');
    if !neg {
        p.eat(b'+');
    }
    p.skip_ws();
    let r = p.fraction()?;
    p.skip_ws();
    if !p.done() {
        return Err(p.error("unexpected trailing characters"));
    }
    Ok(if neg { -r } else { r })
}

/// Parses a polynomial. With `vars` given, any other identifier is rejected
/// and the result uses exactly that variable order; otherwise variables are
/// ordered by first appearance.
pub fn parse_poly(text: &str, vars: Option<&[String]>) -> Result<Poly> {
    let mut p = Parser::new(text);
    let mut names: Vec<String> = vars.map(|v| v.to_vec()).unwrap_or_default();
    let mut raw: Vec<(Vec<(usize, u32)>, Rational)> = Vec::new();
    p.skip_ws();
    if p.done() {
        return Err(p.error("empty polynomial"));
    }
    let mut first = true;
    loop {
        p.skip_ws();
        let mut sign = Rational::one();
        if p.eat(b'-') {
            sign = -sign;
        } else if !p.eat(b'+') && !first {
            return Err(p.error("expected `+` or `-`"));
        }
        first = false;
        p.skip_ws();
        let mut coeff = sign;
        let mut powers: Vec<(usize, u32)> = Vec::new();
        loop {
            p.skip_ws();
            match p.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= p.fraction()?,
                Some(c) if c.is_ascii_alphabetic() => {
                    let start = p.pos;
                    let name = p.ident();
                    let idx = match names.iter().position(|n| *n == name) {
                        Some(i) => i,
                        None if vars.is_none() => {
                            names.push(name);
                            names.len() - 1
                        }
                        None => {
                            return Err(Error::parse_at(
                                text,
                                start,
                                format!("unknown variable `{name}`"),
                            ))
                        }
                    };
                    p.skip_ws();
                    let k = if p.eat(b'^') {
                        p.skip_ws();
                        let e = p.integer()?;
                        u32::try_from(&e).map_err(|_| p.error("exponent out of range"))?
                    } else {
                        1
                    };
                    powers.push((idx, k));
                }
                _ => return Err(p.error("expected a number or a variable")),
            }
            p.skip_ws();
            if !p.eat(b'*') {
                break;
            }
        }
        raw.push((powers, coeff));
        p.skip_ws();
        if p.done() {
            break;
        }
    }
    let n = names.len();
    let terms = raw
        .into_iter()
        .map(|(powers, c)| {
            let mut e = vec![0u32; n];
            for (i, k) in powers {
                e[i] += k;
            }
            (e, c)
        })
        .collect();
    Ok(Poly::from_terms(names, terms))
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::parse_at(self.text, self.pos, msg)
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn done(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(self.text[start..self.pos].parse().expect("ascii digits"))
    }

    fn fraction(&mut self) -> Result<Rational> {
        let num = self.integer()?;
        self.skip_ws();
        if self.eat(b'/') {
            self.skip_ws();
            let at = self.pos;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(Error::parse_at(self.text, at, "zero denominator"));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        self.text[start..self.pos].to_string()
    }
}
