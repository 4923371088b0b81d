//! Coefficient fields.
//!
//! Every algebraic structure in the crate is generic over an exact [`Field`].
//! Exactness matters: rank claims and zero tests are decided structurally, so
//! floating point types are deliberately not fields here. They can still be
//! used as evaluation targets through [`EvalInto`].

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, NumRef, One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rationals, the default coefficient field.
pub type Rational = BigRational;

/// An exact, computable field.
pub trait Field:
    Num + NumRef + Neg<Output = Self> + Clone + Eq + Hash + Debug + Display + Send + Sync + 'static
{
    fn from_bigint(n: BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Whether the value prints with a leading minus sign.
    fn is_negative(&self) -> bool;

    /// The unit `u` such that `u * p` is the canonical associate of the
    /// polynomial whose coefficients are `coeffs` (leading coefficient first).
    ///
    /// The default makes the polynomial monic.
    fn normalizing_unit<'a, I>(mut coeffs: I) -> Self
    where
        I: Iterator<Item = &'a Self>,
        Self: 'a,
    {
        match coeffs.next() {
            Some(lc) => Self::one() / lc.clone(),
            None => Self::one(),
        }
    }

    /// Textual form used by the printer. Must be accepted by the parser as a
    /// product/quotient of integers.
    fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Field for BigRational {
    fn from_bigint(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    /// Integer-primitive with a positive leading coefficient.
    fn normalizing_unit<'a, I>(coeffs: I) -> Self
    where
        I: Iterator<Item = &'a Self>,
    {
        let mut lead_negative = None;
        let mut den_lcm = BigInt::one();
        let mut nums: Vec<(BigInt, BigInt)> = Vec::new();
        for c in coeffs {
            if lead_negative.is_none() {
                lead_negative = Some(Signed::is_negative(c));
            }
            den_lcm = den_lcm.lcm(c.denom());
            nums.push((c.numer().clone(), c.denom().clone()));
        }
        let Some(neg) = lead_negative else {
            return Self::one();
        };
        let mut num_gcd = BigInt::zero();
        for (n, d) in &nums {
            num_gcd = num_gcd.gcd(&(n * (&den_lcm / d)));
        }
        if num_gcd.is_zero() {
            return Self::one();
        }
        let unit = BigRational::new(den_lcm, num_gcd);
        if neg {
            -unit
        } else {
            unit
        }
    }
}

/// The prime field `Z/PZ` for a prime `P < 2^32`.
///
/// Used as a second exact field, mostly for modular cross-checks of the
/// polynomial kernel.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct PrimeField<const P: u64>(u64);

impl<const P: u64> PrimeField<P> {
    pub fn new(v: i64) -> Self {
        Self(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P;
            }
            base = base * base % P;
            e >>= 1;
        }
        Self(acc)
    }

    pub fn inverse(self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(P - 2))
    }
}

impl<const P: u64> Display for PrimeField<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! prime_field_op {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<const P: u64> std::ops::$tr for PrimeField<P> {
            type Output = Self;
            fn $m(self, rhs: Self) -> Self {
                let f: fn(u64, u64) -> u64 = $body;
                Self(f(self.0, rhs.0))
            }
        }
        impl<'a, const P: u64> std::ops::$tr<&'a PrimeField<P>> for PrimeField<P> {
            type Output = Self;
            fn $m(self, rhs: &'a Self) -> Self {
                std::ops::$tr::$m(self, *rhs)
            }
        }
    };
}

prime_field_op!(Add, add, |a, b| (a + b) % P);
prime_field_op!(Sub, sub, |a, b| (a + P - b) % P);
prime_field_op!(Mul, mul, |a, b| a * b % P);
prime_field_op!(Div, div, |a, b| {
    let inv = PrimeField::<P>(b).inverse().expect("division by zero in prime field");
    a * inv.0 % P
});
prime_field_op!(Rem, rem, |_, b| {
    assert!(b != 0, "remainder by zero in prime field");
    0
});

impl<const P: u64> Neg for PrimeField<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Self((P - self.0) % P)
    }
}

impl<const P: u64> Zero for PrimeField<P> {
    fn zero() -> Self {
        Self(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for PrimeField<P> {
    fn one() -> Self {
        Self(1 % P)
    }
}

impl<const P: u64> Num for PrimeField<P> {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        i64::from_str_radix(s, radix).map(Self::new)
    }
}

impl<const P: u64> Field for PrimeField<P> {
    fn from_bigint(n: BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(P));
        Self(r.to_u64().expect("reduced residue fits in u64"))
    }

    fn is_negative(&self) -> bool {
        false
    }
}

/// Conversion of exact coefficients into an evaluation target.
pub trait EvalInto<T> {
    fn eval_into(&self) -> T;
}

impl<F: Field> EvalInto<F> for F {
    fn eval_into(&self) -> F {
        self.clone()
    }
}

impl EvalInto<f64> for BigRational {
    fn eval_into(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl EvalInto<f32> for BigRational {
    fn eval_into(&self) -> f32 {
        self.to_f32().unwrap_or(f32::NAN)
    }
}

/// Shorthand for a rational from numerator and denominator.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_normalizing_unit_is_primitive_and_positive() {
        let coeffs = [q(-3, 4), q(1, 2), q(9, 8)];
        let u = Rational::normalizing_unit(coeffs.iter());
        let scaled: Vec<_> = coeffs.iter().map(|c| c * &u).collect();
        assert_eq!(scaled, vec![q(6, 1), q(-4, 1), q(-9, 1)]);
    }

    #[test]
    fn prime_field_arithmetic() {
        type F7 = PrimeField<7>;
        let a = F7::new(3);
        let b = F7::new(5);
        assert_eq!((a + b).value(), 1);
        assert_eq!((a - b).value(), 5);
        assert_eq!((a * b).value(), 1);
        assert_eq!((a / b * b).value(), 3);
        assert_eq!((-a).value(), 4);
        assert_eq!(F7::from_bigint(BigInt::from(-1)).value(), 6);
        assert!(F7::new(0).inverse().is_none());
    }
}
