//! Canonical rational functions.

use std::collections::{BTreeSet, HashMap};
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::gcd::gcd;
use super::poly::Poly;
use super::symbol::{SymbolKind, Var};
use crate::error::{Error, Result};
use crate::scalar::{Field, Rational};

/// A reduced fraction of polynomials with a normalized denominator.
///
/// Structural equality coincides with mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFn<F: Field = Rational> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> Default for RatFn<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> From<Poly<F>> for RatFn<F> {
    fn from(p: Poly<F>) -> Self {
        RatFn {
            num: p,
            den: Poly::one(),
        }
    }
}

impl<F: Field> RatFn<F> {
    pub fn zero() -> Self {
        Poly::zero().into()
    }

    pub fn one() -> Self {
        Poly::one().into()
    }

    pub fn constant(c: F) -> Self {
        Poly::constant(c).into()
    }

    pub fn int(n: i64) -> Self {
        Self::constant(F::from_i64(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::var(v).into()
    }

    /// `num / den` in canonical form.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<F>, den: Poly<F>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.constant_value() {
            return num.scale(&(F::one() / c)).into();
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::normalize_unit(num, den)
    }

    fn normalize_unit(num: Poly<F>, den: Poly<F>) -> Self {
        if let Some(c) = den.constant_value() {
            return num.scale(&(F::one() / c)).into();
        }
        let u = den.normalizing_unit();
        if u.is_one() {
            RatFn { num, den }
        } else {
            RatFn {
                num: num.scale(&u),
                den: den.scale(&u),
            }
        }
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn into_parts(self) -> (Poly<F>, Poly<F>) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// Whether any symbol of the given kind occurs.
    pub fn contains_kind(&self, kind: SymbolKind) -> bool {
        self.vars().iter().any(|v| v.kind() == kind)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.den.is_one() {
                return self.num.add_ref(&other.num).into();
            }
            return Self::reduce(self.num.add_ref(&other.num), self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let num = self
                .num
                .mul_ref(&other.den)
                .add_ref(&other.num.mul_ref(&self.den));
            return Self::normalize_unit(num, self.den.mul_ref(&other.den));
        }
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul_ref(&d2).add_ref(&other.num.mul_ref(&d1));
        if num.is_zero() {
            return Self::zero();
        }
        let h = gcd(&num, &g);
        let den = self.den.mul_ref(&d2);
        if h.is_one() {
            Self::normalize_unit(num, den)
        } else {
            Self::normalize_unit(
                num.div_exact(&h).expect("gcd divides"),
                den.div_exact(&h).expect("gcd divides"),
            )
        }
    }

    pub fn neg_ref(&self) -> Self {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return self.num.mul_ref(&other.num).into();
        }
        let cancel = |n: &Poly<F>, d: &Poly<F>| -> (Poly<F>, Poly<F>) {
            if d.is_one() {
                return (n.clone(), d.clone());
            }
            let g = gcd(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (
                    n.div_exact(&g).expect("gcd divides"),
                    d.div_exact(&g).expect("gcd divides"),
                )
            }
        };
        let (n1, d2) = cancel(&self.num, &other.den);
        let (n2, d1) = cancel(&other.num, &self.den);
        Self::normalize_unit(n1.mul_ref(&n2), d1.mul_ref(&d2))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_unit(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        if base.den.is_one() {
            return Ok(base.num.pow(e).into());
        }
        Ok(RatFn {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Partial derivative with jet promotion along base coordinates. No
    /// validation of `v` is done here; see [`crate::expr::differentiate`].
    pub fn diff(&self, v: Var) -> Self {
        let dn = self.num.diff(v);
        if self.den.is_one() {
            return dn.into();
        }
        let dd = self.den.diff(v);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let num = dn.mul_ref(&self.den).sub_ref(&self.num.mul_ref(&dd));
        Self::reduce(num, self.den.mul_ref(&self.den))
    }

    /// Exact value at a point given by `lookup`.
    pub fn eval_with(&self, lookup: &dyn Fn(Var) -> Option<F>) -> std::result::Result<F, EvalError> {
        let d = self.den.eval(lookup).map_err(EvalError::Missing)?;
        if d.is_zero() {
            return Err(EvalError::Pole);
        }
        let n = self.num.eval(lookup).map_err(EvalError::Missing)?;
        Ok(n / d)
    }

    pub fn eval_at(&self, point: &HashMap<Var, F>) -> std::result::Result<F, EvalError> {
        self.eval_with(&|v| point.get(&v).cloned())
    }

    /// Substitutes rational functions for variables.
    pub fn substitute(&self, map: &dyn Fn(Var) -> Option<RatFn<F>>) -> Self {
        let sub = |p: &Poly<F>| -> Self {
            let mut acc = Self::zero();
            for (m, c) in p.terms() {
                let mut t = Self::constant(c.clone());
                let mut keep = super::poly::Monomial::one();
                for &(v, e) in m.factors() {
                    match map(v) {
                        Some(r) => t = t.mul_ref(&r.pow(e as i64).expect("nonzero power")),
                        None => keep = keep.mul(&super::poly::Monomial::var(v, e)),
                    }
                }
                acc = acc.add_ref(&t.mul_ref(&Poly::monomial(keep, F::one()).into()));
            }
            acc
        };
        let n = sub(&self.num);
        if self.den.is_one() {
            return n;
        }
        n.checked_div(&sub(&self.den))
            .expect("substitution made the denominator vanish")
    }
}

/// Failure modes of exact evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    Missing(Var),
    Pole,
}

macro_rules! ratfn_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl<F: Field> $tr<&RatFn<F>> for &RatFn<F> {
            type Output = RatFn<F>;
            fn $m(self, rhs: &RatFn<F>) -> RatFn<F> {
                self.$imp(rhs)
            }
        }
        impl<F: Field> $tr<RatFn<F>> for RatFn<F> {
            type Output = RatFn<F>;
            fn $m(self, rhs: RatFn<F>) -> RatFn<F> {
                self.$imp(&rhs)
            }
        }
        impl<F: Field> $tr<&RatFn<F>> for RatFn<F> {
            type Output = RatFn<F>;
            fn $m(self, rhs: &RatFn<F>) -> RatFn<F> {
                self.$imp(rhs)
            }
        }
        impl<F: Field> $tr<RatFn<F>> for &RatFn<F> {
            type Output = RatFn<F>;
            fn $m(self, rhs: RatFn<F>) -> RatFn<F> {
                self.$imp(&rhs)
            }
        }
    };
}

impl<F: Field> RatFn<F> {
    fn div_or_panic(&self, rhs: &Self) -> Self {
        self.checked_div(rhs).expect("division by a zero rational function")
    }
}

ratfn_binop!(Add, add, add_ref);
ratfn_binop!(Sub, sub, sub_ref);
ratfn_binop!(Mul, mul, mul_ref);
ratfn_binop!(Div, div, div_or_panic);

impl<F: Field> Neg for &RatFn<F> {
    type Output = RatFn<F>;
    fn neg(self) -> RatFn<F> {
        self.neg_ref()
    }
}

impl<F: Field> Neg for RatFn<F> {
    type Output = RatFn<F>;
    fn neg(self) -> RatFn<F> {
        self.neg_ref()
    }
}

impl<F: Field> std::iter::Sum for RatFn<F> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a.add_ref(&b))
    }
}
