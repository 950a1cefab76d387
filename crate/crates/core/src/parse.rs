//! Text grammar for polynomials over a field `K`, in a distinguished variable.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | identifier | "(" expr ")"
//! ```
//!
//! Identifiers are the distinguished variable or a transcendental variable of
//! `K`. Division is allowed only by nonzero elements of `K`, so `t^2/s^3` and
//! `3/4*x` parse while `1/x` does not. Whitespace is insignificant.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    field: &'a Field,
    var: Option<&'a str>,
}

impl<'a> Parser<'a> {
    fn error(&self, at: usize, message: impl Into<String>) -> Error {
        let offset = self.chars.get(at).map(|c| c.0).unwrap_or(self.src.len());
        let before = &self.src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().unwrap().chars().count() + 1;
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, self.field);
                }
                '-' | '−' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?, self.field);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?, self.field);
                }
                '/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if d.degree() != Some(0) {
                        return Err(self.error(at, "division only by nonzero constants"));
                    }
                    let inv = self
                        .field
                        .inv(d.coeff(0))
                        .map_err(|e| self.error(at, e.to_string()))?;
                    acc = acc.scale(&inv, self.field);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('-') | Some('−') => {
                self.pos += 1;
                Ok(self.unary()?.neg(self.field))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let digits = self.take_while(|c| c.is_ascii_digit());
            let n: usize = digits
                .parse()
                .map_err(|_| self.error(at, "expected a nonnegative integer exponent"))?;
            return Ok(base.pow(n, self.field));
        }
        Ok(base)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.pos += 1;
        }
        s
    }

    fn atom(&mut self) -> Result<Poly> {
        let at = self.pos;
        match self.peek() {
            None => Err(self.error(at, "unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    let here = self.pos;
                    return Err(self.error(here, "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let digits = self.take_while(|c| c.is_ascii_digit());
                let n: BigInt = digits.parse().map_err(|_| self.error(at, "bad integer"))?;
                Ok(Poly::constant(self.field.from_bigint(&n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let at = self.pos;
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                if Some(name.as_str()) == self.var {
                    return Ok(Poly::x(self.field));
                }
                match self.field.variable(&name) {
                    Some(e) => Ok(Poly::constant(e)),
                    None => Err(self.error(at, format!("unknown identifier '{name}'"))),
                }
            }
            Some(c) => Err(self.error(self.pos, format!("unexpected character '{c}'"))),
        }
    }
}

fn run(src: &str, field: &Field, var: Option<&str>) -> Result<Poly> {
    let mut p = Parser {
        src,
        chars: src.char_indices().collect(),
        pos: 0,
        field,
        var,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        let at = p.pos;
        return Err(p.error(at, "unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a polynomial in `var` with coefficients in `field`.
pub fn parse_poly(src: &str, field: &Field, var: &str) -> Result<Poly> {
    run(src, field, Some(var))
}

/// Parses an element of `field`.
pub fn parse_elem(src: &str, field: &Field) -> Result<Elem> {
    let p = run(src, field, None)?;
    Ok(p.coeffs().first().cloned().unwrap_or_else(|| field.zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_polynomials() {
        let q = Field::Rationals;
        let p = parse_poly("x^2 + 1", &q, "x").unwrap();
        assert_eq!(q.fmt_poly(&p, "x"), "x^2 + 1");
        let p = parse_poly("(x+1)^2 - 2*(x+1) + 2", &q, "x").unwrap();
        assert_eq!(q.fmt_poly(&p, "x"), "x^2 + 1");
        let p = parse_poly("x^3 − 2", &q, "x").unwrap();
        assert_eq!(q.fmt_poly(&p, "x"), "x^3 - 2");
        let p = parse_poly("3/4*x - 1/2", &q, "x").unwrap();
        assert_eq!(q.fmt_poly(&p, "x"), "3/4*x - 1/2");
    }

    #[test]
    fn coefficients_in_function_fields() {
        let k = Field::rational_functions(Field::rational_functions(Field::Rationals, "s"), "t");
        let p = parse_poly("x^2 + s", &k, "x").unwrap();
        assert_eq!(k.fmt_poly(&p, "x"), "x^2 + s");
        let e = parse_elem("t^2/s^3", &k).unwrap();
        assert_eq!(k.fmt_elem(&e), "(1/s^3)*t^2");
    }

    #[test]
    fn prime_field_reduction() {
        let f3 = Field::Prime(3);
        let p = parse_poly("x^2 + 4", &f3, "x").unwrap();
        assert_eq!(f3.fmt_poly(&p, "x"), "x^2 + 1");
    }

    #[test]
    fn errors_carry_positions() {
        let q = Field::Rationals;
        match parse_poly("x^2 +\n  y", &q, "x") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("1/x", &q, "x"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(parse_poly("(x+1", &q, "x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("1/0", &q, "x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x x", &q, "x"), Err(Error::Parse { column: 3, .. })));
    }
}
