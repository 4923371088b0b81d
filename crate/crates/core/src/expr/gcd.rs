//! Multivariate polynomial gcd by recursive primitive remainder sequences.

use std::collections::BTreeSet;

use super::poly::Poly;
use super::symbol::Var;
use crate::scalar::Field;

/// Canonical gcd (normalized with [`Field::normalizing_unit`]).
pub fn gcd<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    gcd_raw(a, b).normalized()
}

pub fn lcm<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd_raw(a, b);
    a.div_exact(&g).expect("gcd divides").mul_ref(b).normalized()
}

/// Gcd up to a unit.
fn gcd_raw<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let common = ma.gcd(&mb);
    let a1 = if ma.is_one() { a.clone() } else { a.div_monomial(&ma) };
    let b1 = if mb.is_one() { b.clone() } else { b.div_monomial(&mb) };
    let g = gcd_no_monomial(&a1, &b1);
    if common.is_one() {
        g
    } else {
        g.mul_term(&common, &F::one())
    }
}

fn gcd_no_monomial<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.len() <= b.len() {
        if b.div_exact(a).is_some() {
            return a.clone();
        }
    } else if a.div_exact(b).is_some() {
        return b.clone();
    }
    let va = a.vars();
    let vb = b.vars();
    if let Some(&v) = va.symmetric_difference(&vb).next() {
        let (p, other) = if va.contains(&v) { (a, b) } else { (b, a) };
        let mut g = other.clone();
        for c in p.coefficients_in(v).iter().rev().filter(|c| !c.is_zero()) {
            g = gcd_raw(&g, c);
            if g.is_constant() {
                return Poly::one();
            }
        }
        return g;
    }
    let v = main_variable(a, b, &va);
    let ca = content(a, v);
    let cb = content(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd_raw(&ca, &cb);
    let g = primitive_prs(pa, pb, v);
    if c.is_constant() {
        g
    } else {
        c.mul_ref(&g)
    }
}

fn main_variable<F: Field>(a: &Poly<F>, b: &Poly<F>, vars: &BTreeSet<Var>) -> Var {
    *vars
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("non-constant polynomial has variables")
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content<F: Field>(p: &Poly<F>, v: Var) -> Poly<F> {
    let coeffs = p.coefficients_in(v);
    let mut nonzero = coeffs.iter().rev().filter(|c| !c.is_zero());
    let mut g = nonzero.next().cloned().unwrap_or_else(Poly::zero);
    for c in nonzero {
        if g.is_constant() {
            return Poly::one();
        }
        g = gcd_raw(&g, c);
    }
    if g.is_constant() {
        Poly::one()
    } else {
        g.normalized()
    }
}

fn primitive_part<F: Field>(p: &Poly<F>, v: Var) -> Poly<F> {
    let c = content(p, v);
    if c.is_one() {
        p.clone()
    } else {
        p.div_exact(&c).expect("content divides")
    }
}

/// Sparse pseudo-remainder of `a` by `b` in `v` (without the final power of
/// the leading coefficient, which does not affect gcds).
fn pseudo_remainder<F: Field>(a: &Poly<F>, b: &Poly<F>, v: Var) -> Poly<F> {
    let bc = b.coefficients_in(v);
    let db = bc.len() - 1;
    if db == 0 {
        return Poly::zero();
    }
    let lb = &bc[db];
    let mut r = a.coefficients_in(v);
    let is_zero = |r: &Vec<Poly<F>>| r.len() == 1 && r[0].is_zero();
    while !is_zero(&r) && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul_ref(lb);
        }
        for (i, c) in bc.iter().enumerate() {
            r[i + shift] = r[i + shift].sub_ref(&lr.mul_ref(c));
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        while r.len() > 1 && r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    Poly::from_coefficients_in(v, &r)
}

fn primitive_prs<F: Field>(a: Poly<F>, b: Poly<F>, v: Var) -> Poly<F> {
    let (mut r0, mut r1) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        if r1.degree_in(v) == 0 {
            return Poly::one();
        }
        let r = pseudo_remainder(&r0, &r1, v);
        if r.is_zero() {
            return r1;
        }
        r0 = r1;
        // Scalar content too, or the coefficients grow exponentially.
        r1 = primitive_part(&r, v).normalized();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::symbol::{Deps, SymbolTable};
    use crate::scalar::{q, PrimeField, Rational};

    type P = Poly<Rational>;

    fn parse(t: &SymbolTable, s: &str) -> P {
        let e = t.parse(s).unwrap();
        assert!(e.den().is_one());
        e.num().clone()
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let t = SymbolTable::new();
        t.parameter("k").unwrap();
        t.function("b", Deps::XY).unwrap();
        let g = parse(&t, "x*y - k*b + 3");
        let a = &g * &parse(&t, "x^2 + b_x*y + 1");
        let b = &g * &parse(&t, "y^3 - k");
        assert_eq!(gcd(&a, &b), g.normalized());
    }

    #[test]
    fn coprime_bivariate_gcd_keeps_coefficients_small() {
        let t = SymbolTable::new();
        let a = parse(
            &t,
            "-8*x^6*y^2 - 16*x^4*y^3 + 6*x^2*y^4 - 24*x^4*y - 16*x^3*y^2 + 2*y^5 - 12*x^2*y^2 \
             + 24*x*y^3 - 96*x^3 - 12*y^3 - 18*x^2 + 120*x*y + 18*y",
        );
        let f = parse(&t, "2*x^2*y - y^2 + 3");
        let b = f.mul_ref(&f).mul_ref(&f);
        assert_eq!(gcd(&a, &b), P::one());
        assert_eq!(gcd(&a.mul_ref(&f), &b), f.normalized());
    }

    #[test]
    fn gcd_is_normalized_and_monomial_aware() {
        let t = SymbolTable::new();
        let a = parse(&t, "6*x^2*y");
        let b = parse(&t, "4*x*y^2 + 2*x*y");
        assert_eq!(gcd(&a, &b), parse(&t, "x*y"));
        let c = parse(&t, "-2*x - 4");
        assert_eq!(gcd(&c, &c), parse(&t, "x + 2"));
        assert_eq!(gcd(&c, &P::constant(q(3, 1))), P::one());
    }

    #[test]
    fn lcm_of_coprime_is_product() {
        let t = SymbolTable::new();
        let a = parse(&t, "x + 1");
        let b = parse(&t, "y - 1");
        assert_eq!(lcm(&a, &b), (&a * &b).normalized());
    }

    #[test]
    fn gcd_over_prime_field() {
        type F = PrimeField<101>;
        let x = Poly::<F>::var(Var::X);
        let y = Poly::<F>::var(Var::Y);
        let one = Poly::<F>::one();
        let g = &(&x * &y) + &one;
        let a = &g * &(&x + &one);
        let b = &g * &(&y + &(&one + &one));
        assert_eq!(gcd(&a, &b), g.normalized());
    }
}
