//! Canonical printer. Output is accepted by the parser and re-parses to the
//! same canonical form.

use std::fmt::Write;

use super::poly::{Monomial, Poly};
use super::ratfn::RatFn;
use super::symbol::SymbolTable;
use crate::scalar::Field;

impl SymbolTable {
    fn monomial_text(&self, m: &Monomial) -> String {
        let mut s = String::new();
        for (i, &(v, e)) in m.factors().iter().enumerate() {
            if i > 0 {
                s.push('*');
            }
            s.push_str(&self.name(v));
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }

    /// Prints a polynomial, terms in decreasing monomial order.
    pub fn print_poly<F: Field>(&self, p: &Poly<F>) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in p.terms().iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if m.is_one() {
                s.push_str(&abs.to_text());
            } else if abs.is_one() {
                s.push_str(&self.monomial_text(m));
            } else {
                let _ = write!(s, "{}*{}", abs.to_text(), self.monomial_text(m));
            }
        }
        s
    }

    /// Prints a rational function.
    pub fn print<F: Field>(&self, e: &RatFn<F>) -> String {
        let num = self.print_poly(e.num());
        if e.den().is_one() {
            return num;
        }
        let num = if e.num().len() > 1 { format!("({num})") } else { num };
        let den = self.print_poly(e.den());
        let bare = matches!(e.den().terms(), [(m, c)] if c.is_one() && m.factors().len() == 1);
        if bare {
            format!("{num}/{den}")
        } else {
            format!("{num}/({den})")
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::symbol::{Deps, SymbolTable};

    #[test]
    fn prints_canonical_text() {
        let t = SymbolTable::new();
        t.fiber("p").unwrap();
        t.fiber("q").unwrap();
        t.function("b", Deps::XY).unwrap();
        let cases = [
            ("-y/(2*x^3)", "-1/2*y/x^3"),
            ("2*q^3 - 2*p^3", "-2*p^3 + 2*q^3"),
            ("(x + 1)/(x*y)", "(x + 1)/(x*y)"),
            ("b_yx + b_xy*b", "b*b_xy + b_xy"),
            ("1/(1 - x)", "-1/(x - 1)"),
            ("0", "0"),
        ];
        for (src, want) in cases {
            let e = t.parse(src).unwrap();
            let printed = t.print(&e);
            assert_eq!(printed, want, "{src}");
            assert_eq!(t.parse(&printed).unwrap(), e);
        }
    }
}
