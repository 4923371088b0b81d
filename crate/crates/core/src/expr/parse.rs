//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := ('+'|'-')? base ('^' integer)?
//! base   := number | identifier | '(' expr ')'
//! ```
//!
//! Beyond the core grammar, a factor may carry a unary sign (`-x^2` means
//! `-(x^2)`), exponents may be negative (`x^-2`, `x^(-2)`), and numbers may
//! be written as exact decimals (`0.25`).

use num_bigint::BigInt;
use num_traits::Zero;

use super::ratfn::RatFn;
use super::symbol::{is_identifier, Lookup, SymbolTable};
use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt, u32),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut scale = 0;
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                    scale += 1;
                }
            }
            let digits: String = src[start..i].chars().filter(|&c| c != '.').collect();
            let n = if digits.is_empty() {
                BigInt::zero()
            } else {
                digits.parse().expect("digit string")
            };
            out.push((start, Tok::Num(n, scale)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    table: &'a SymbolTable,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expr<F: Field>(&mut self) -> Result<RatFn<F>> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add_ref(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub_ref(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<F: Field>(&mut self) -> Result<RatFn<F>> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.mul_ref(&self.factor()?);
            } else if self.eat('/') {
                let d = self.factor()?;
                acc = acc.checked_div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor<F: Field>(&mut self) -> Result<RatFn<F>> {
        if self.eat('-') {
            return Ok(self.factor::<F>()?.neg_ref());
        }
        if self.eat('+') {
            return self.factor();
        }
        let base = self.base()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.offset();
        let e = self.exponent().ok_or(Error::NonIntegerExponent(at))?;
        base.pow(e)
    }

    fn exponent(&mut self) -> Option<i64> {
        let start = self.pos;
        let paren = self.eat('(');
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let value = match self.peek() {
            Some(Tok::Num(n, 0)) => i64::try_from(n.clone()).ok(),
            _ => None,
        };
        let ok = value.is_some() && {
            self.pos += 1;
            !paren || self.eat(')')
        };
        if !ok {
            self.pos = start;
            return None;
        }
        value.map(|v| if neg { -v } else { v })
    }

    fn base<F: Field>(&mut self) -> Result<RatFn<F>> {
        match self.peek().cloned() {
            Some(Tok::Num(n, scale)) => {
                self.pos += 1;
                let v = F::from_bigint(n) / F::from_bigint(BigInt::from(10).pow(scale));
                Ok(RatFn::constant(v))
            }
            Some(Tok::Ident(name)) => {
                debug_assert!(is_identifier(&name));
                self.pos += 1;
                match self.table.lookup(&name) {
                    Some(Lookup::Var(v)) => Ok(RatFn::var(v)),
                    Some(Lookup::Zero) => Ok(RatFn::zero()),
                    None => Err(Error::UndeclaredIdentifier(name)),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.syntax("expected `)`");
                }
                Ok(e)
            }
            Some(t) => self.syntax(format!("unexpected {t:?}")),
            None => self.syntax("unexpected end of input"),
        }
    }
}

impl SymbolTable {
    /// Parses an expression over the rationals.
    pub fn parse(&self, src: &str) -> Result<RatFn<Rational>> {
        self.parse_as(src)
    }

    /// Parses an expression with coefficients in `F`.
    pub fn parse_as<F: Field>(&self, src: &str) -> Result<RatFn<F>> {
        let toks = tokenize(src)?;
        if toks.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut p = Parser {
            toks,
            pos: 0,
            end: src.len(),
            table: self,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return p.syntax("trailing input");
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::symbol::Deps;
    use crate::scalar::q;

    fn table() -> SymbolTable {
        let t = SymbolTable::new();
        for k in ["k1", "k2", "k3"] {
            t.parameter(k).unwrap();
        }
        t.function("b", Deps::XY).unwrap();
        t
    }

    #[test]
    fn trivial_inputs() {
        let t = table();
        assert!(t.parse("x/x").unwrap().is_one());
        assert!(t.parse("0").unwrap().is_zero());
        assert!(t.parse("b_x - b_x").unwrap().is_zero());
    }

    #[test]
    fn precedence_and_signs() {
        let t = table();
        assert_eq!(t.parse("-x^2").unwrap(), t.parse("0 - x*x").unwrap());
        assert_eq!(t.parse("2^-1").unwrap(), RatFn::constant(q(1, 2)));
        assert_eq!(t.parse("x^(-2)").unwrap(), t.parse("1/(x*x)").unwrap());
        assert_eq!(t.parse("1/2*x").unwrap(), t.parse("x/2").unwrap());
        assert_eq!(t.parse("0.25").unwrap(), RatFn::constant(q(1, 4)));
        assert_eq!(t.parse("1.5").unwrap(), RatFn::constant(q(3, 2)));
    }

    #[test]
    fn errors() {
        let t = table();
        assert_eq!(t.parse("w + 1"), Err(Error::UndeclaredIdentifier("w".into())));
        assert_eq!(t.parse("x/(y - y)"), Err(Error::DivisionByZero));
        assert_eq!(t.parse("x^y"), Err(Error::NonIntegerExponent(2)));
        assert_eq!(t.parse("x^1.5"), Err(Error::NonIntegerExponent(2)));
        assert!(matches!(t.parse("(x"), Err(Error::Syntax { .. })));
        assert!(matches!(t.parse("x $ y"), Err(Error::Syntax { pos: 2, .. })));
        assert_eq!(t.parse("  "), Err(Error::EmptyInput));
    }

    #[test]
    fn jets_of_missing_directions_vanish() {
        let t = table();
        t.function("a", Deps::X).unwrap();
        assert!(t.parse("a_y").unwrap().is_zero());
        assert_eq!(t.parse("1/a_xy"), Err(Error::DivisionByZero));
    }
}
