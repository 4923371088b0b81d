//! Exact symbolic kernel: symbols, polynomials, canonical rational functions,
//! parsing, printing and linear algebra over the fraction field.

mod gcd;
pub mod linalg;
mod parse;
pub mod poly;
mod print;
pub mod ratfn;
pub mod symbol;

use std::collections::HashMap;

pub use gcd::{gcd, lcm};
pub use linalg::{
    generic_rank, primitive_vector, solve_rational_combination, GenericRank, Matrix,
};
pub use poly::{Monomial, Poly};
pub use ratfn::{EvalError, RatFn};
pub use symbol::{Deps, Lookup, SymbolKind, SymbolTable, Var};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Partial derivative along a coordinate.
///
/// Along a base coordinate, jet atoms are promoted (`b` to `b_x`). Fiber
/// coordinates are accepted as well; every other symbol is independent of
/// them. Parameters and jets are not coordinates.
pub fn differentiate<F: Field>(e: &RatFn<F>, v: Var) -> Result<RatFn<F>> {
    if !v.is_coordinate() {
        return Err(Error::NotACoordinate(format!("{v:?}")));
    }
    Ok(e.diff(v))
}

impl SymbolTable {
    /// [`differentiate`] with the coordinate given by name.
    pub fn differentiate<F: Field>(&self, e: &RatFn<F>, coord: &str) -> Result<RatFn<F>> {
        let v = self.var(coord)?;
        if !v.is_coordinate() {
            return Err(Error::NotACoordinate(coord.into()));
        }
        Ok(e.diff(v))
    }

    /// Exact evaluation at a point given by symbol names.
    pub fn eval_at<F: Field>(&self, e: &RatFn<F>, point: &[(&str, F)]) -> Result<F> {
        let mut map = HashMap::new();
        for (name, value) in point {
            map.insert(self.var(name)?, value.clone());
        }
        e.eval_at(&map).map_err(|err| match err {
            EvalError::Missing(v) => Error::MissingAssignment(self.name(v)),
            EvalError::Pole => Error::Pole,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn table() -> SymbolTable {
        let t = SymbolTable::new();
        for k in ["k1", "k2", "k3"] {
            t.parameter(k).unwrap();
        }
        t.fiber("p").unwrap();
        t.fiber("q").unwrap();
        t.function("b", Deps::XY).unwrap();
        t
    }

    #[test]
    fn differentiation_examples() {
        let t = table();
        let b = t.parse("b").unwrap();
        assert_eq!(t.differentiate(&b, "x").unwrap(), t.parse("b_x").unwrap());
        let e = t.parse("y/(4*x^2)").unwrap();
        assert_eq!(t.differentiate(&e, "x").unwrap(), t.parse("-y/(2*x^3)").unwrap());
        let xq = t.parse("x*q").unwrap();
        assert!(t.differentiate(&xq, "p").unwrap().is_zero());
        assert!(t.differentiate(&t.parse("k1*p").unwrap(), "x").unwrap().is_zero());
        assert_eq!(
            t.differentiate(&xq, "k1"),
            Err(Error::NotACoordinate("k1".into()))
        );
        assert!(matches!(
            differentiate(&xq, t.var("b_x").unwrap()),
            Err(Error::NotACoordinate(_))
        ));
    }

    #[test]
    fn evaluation_examples() {
        let t = table();
        let b = t.parse("4*k1*(k1*y+k2)/(4*x+k3)^2").unwrap();
        let pt = [("x", q(1, 1)), ("y", q(1, 1)), ("k1", q(1, 1)), ("k2", q(0, 1)), ("k3", q(0, 1))];
        assert_eq!(t.eval_at(&b, &pt), Ok(q(1, 4)));
        assert_eq!(t.eval_at(&RatFn::zero(), &pt), Ok(q(0, 1)));
        let pole = t.parse("1/(x - 1)").unwrap();
        assert_eq!(t.eval_at(&pole, &pt), Err(Error::Pole));
        assert_eq!(
            t.eval_at(&b, &pt[..2]),
            Err(Error::MissingAssignment("k3".into()))
        );
    }
}
