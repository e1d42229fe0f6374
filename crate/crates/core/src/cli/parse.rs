//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' exponent)*
//! atom     := rational | var | '(' expr ')'
//! exponent := integer | '(' ['-'] rational ')'
//! rational := int ('/' posint)?
//! var      := x | y | F | G
//! ```
//!
//! Whitespace is ignored. Fractional or negative exponents must be parenthesized.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{Monomial, Var};
use crate::{FracPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable '{name}' at byte {offset}")]
    UnknownVariable { offset: usize, name: String },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub fn parse_poly(text: &str) -> Result<FracPoly, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a bare rational literal such as `-3/4`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let negative = p.eat(b'-');
    let r = p.rational()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(if negative { -r } else { r })
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<FracPoly, ParseError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FracPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FracPoly, ParseError> {
        let start = self.pos;
        let mut base = self.atom()?;
        while self.eat(b'^') {
            let e = self.exponent()?;
            base = power(&base, &e).ok_or(ParseError::Syntax {
                offset: start,
                message: "fractional or negative power of a non-monomial".into(),
            })?;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FracPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(FracPoly::constant(self.rational()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("?");
                Var::from_name(name)
                    .map(FracPoly::var)
                    .ok_or_else(|| ParseError::UnknownVariable {
                        offset: start,
                        name: name.to_string(),
                    })
            }
            Some(_) => Err(self.error("expected a number, variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        if self.eat(b'(') {
            let negative = self.eat(b'-');
            let r = self.rational()?;
            self.expect(b')')?;
            Ok(if negative { -r } else { r })
        } else {
            self.integer().map(Rational::from_integer)
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse::<BigInt>().expect("digits parse"))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let num = self.integer()?;
        self.skip_ws();
        // a '/' directly after an integer always belongs to the literal
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }
}

/// `p^e`: any rational power of a single term, nonnegative integer powers otherwise.
fn power(p: &FracPoly, e: &Rational) -> Option<FracPoly> {
    if e.is_integer() && !e.is_negative() {
        return Some(p.pow(e.to_integer().to_u32()?));
    }
    let (c, m) = p.as_monomial()?;
    let coeff = crate::algebra::rational_pow(c, e)?;
    Some(FracPoly::term(coeff, m.pow(e)))
}

/// Builds `c * x^a y^b` style monomials in tests without going through text.
pub fn monomial_poly(c: Rational, exps: &[(Var, Rational)]) -> FracPoly {
    let mut m = Monomial::one();
    for (v, e) in exps {
        m = m.with(*v, e.clone());
    }
    FracPoly::term(c, m)
}
