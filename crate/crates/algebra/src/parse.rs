//! Recursive-descent parser for polynomial expressions such as
//! `x^2 - 2*x + t^2 - 4` or `(9*sqrt(2)/32)*t*(t^2 - 16/9)`.
//!
//! Division is only allowed by constants. `sqrt(c)` needs `c` to be a
//! square in the field and evaluates to its canonically positive root.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{AlgebraError, Result};
use crate::{BiPoly, FieldElem, FieldSpec, Rational, UniPoly, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = bytes[start..i].iter().collect();
            out.push((start, Tok::Num(s.parse().unwrap())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(AlgebraError::Parse { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    field: &'a FieldSpec,
    t_name: &'a str,
    x_name: Option<&'a str>,
    constants: &'a BTreeMap<String, FieldElem>,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let pos = self.toks.get(self.pos).map_or(self.end, |t| t.0);
        Err(AlgebraError::Parse { pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = as_constant(&d).ok_or(()).or_else(|_| self.err("division by a non-constant"))?;
                let inv = c.inverse()?;
                acc = acc.scale(&inv);
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('('))) {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<BiPoly> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    u32::try_from(n).or_else(|_| self.err("exponent too large"))?
                }
                _ => return self.err("expected an integer exponent"),
            };
            if neg {
                let c = as_constant(&base).ok_or(()).or_else(|_| self.err("negative power of a non-constant"))?;
                return Ok(BiPoly::constant(c.inverse()?.pow(e)));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BiPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(BiPoly::constant(self.field.from_rational(Rational::from_integer(n))))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "sqrt" {
                    if !self.eat('(') {
                        return self.err("expected '(' after sqrt");
                    }
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return self.err("expected ')'");
                    }
                    let c = as_constant(&arg).ok_or(()).or_else(|_| self.err("sqrt of a non-constant"))?;
                    return match c.sqrt()? {
                        Some(r) => Ok(BiPoly::constant(r)),
                        None => self.err(format!("{c} is not a square in {}", self.field)),
                    };
                }
                if name == self.t_name {
                    return Ok(BiPoly::t(self.field));
                }
                if Some(name.as_str()) == self.x_name {
                    return Ok(BiPoly::x(self.field));
                }
                if !self.field.is_rationals() && name == self.field.name() {
                    return Ok(BiPoly::constant(self.field.generator()));
                }
                if let Some(c) = self.constants.get(&name) {
                    if c.field() != self.field {
                        return self.err(format!("constant {name} lives in another field"));
                    }
                    return Ok(BiPoly::constant(c.clone()));
                }
                self.pos -= 1;
                self.err(format!("unknown identifier {name:?}"))
            }
            _ => self.err("expected a number, identifier or '('"),
        }
    }
}

fn as_constant(p: &BiPoly) -> Option<FieldElem> {
    match p.x_degree() {
        None => Some(p.field().zero()),
        Some(0) if p.x_coeff(0).is_constant() => Some(p.x_coeff(0).coeff(0)),
        _ => None,
    }
}

fn run(
    src: &str,
    field: &FieldSpec,
    t_name: &str,
    x_name: Option<&str>,
    constants: &BTreeMap<String, FieldElem>,
) -> Result<BiPoly> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(AlgebraError::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, end: src.len(), field, t_name, x_name, constants };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses a polynomial in `t` and `x`.
pub fn parse_bipoly(src: &str, field: &FieldSpec, constants: &BTreeMap<String, FieldElem>) -> Result<BiPoly> {
    run(src, field, "t", Some("x"), constants)
}

/// Parses a polynomial in the single variable `var`.
pub fn parse_unipoly(
    src: &str,
    field: &FieldSpec,
    var: Var,
    constants: &BTreeMap<String, FieldElem>,
) -> Result<UniPoly> {
    let b = run(src, field, var.name(), None, constants)?;
    Ok(b.x_coeff(0).with_var(var))
}

/// Parses a constant expression.
pub fn parse_field_elem(
    src: &str,
    field: &FieldSpec,
    constants: &BTreeMap<String, FieldElem>,
) -> Result<FieldElem> {
    let b = run(src, field, "\u{0}", None, constants)?;
    Ok(as_constant(&b).expect("no variables were allowed"))
}

/// Parses a polynomial with rational coefficients in the variable
/// `var_name`, e.g. a minimal polynomial `a^2 + 1`.
pub fn parse_rational_poly(src: &str, var_name: &str) -> Result<Vec<Rational>> {
    let q = FieldSpec::rationals();
    let b = run(src, &q, var_name, None, &BTreeMap::new())?;
    Ok(b.x_coeff(0).coefficients().iter().map(|c| c.as_rational().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_curve_with_implicit_products() {
        let q = FieldSpec::rationals();
        let p = parse_bipoly("x^2 - 2x + t^2 - 4", &q, &BTreeMap::new()).unwrap();
        assert_eq!(p.to_string(), "x^2 + t^2 - 2*x - 4");
    }

    #[test]
    fn rejects_division_by_variable() {
        let q = FieldSpec::rationals();
        assert!(parse_bipoly("1/t", &q, &BTreeMap::new()).is_err());
    }

    #[test]
    fn sqrt_of_square_constant() {
        let q = FieldSpec::rationals();
        let p = parse_field_elem("sqrt(9/4) - 1", &q, &BTreeMap::new()).unwrap();
        assert_eq!(p, q.from_rational(Rational::new(1.into(), 2.into())));
    }
}
