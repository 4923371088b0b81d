use std::fmt::Write;

use super::Chart;
use crate::error::{Error, Result};
use crate::expr::{RatFn, Var};
use crate::scalar::{Field, Rational};

/// A vector field `Σ aⁱ ∂_i` on a chart.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField<F: Field = Rational> {
    chart: Chart,
    coeffs: Vec<RatFn<F>>,
}

impl<F: Field> VectorField<F> {
    pub fn new(chart: &Chart, coeffs: Vec<RatFn<F>>) -> Result<Self> {
        if coeffs.len() != chart.dim() {
            return Err(Error::RankMismatch {
                expected: chart.dim(),
                found: coeffs.len(),
            });
        }
        Ok(VectorField {
            chart: chart.clone(),
            coeffs,
        })
    }

    pub fn zero(chart: &Chart) -> Self {
        VectorField {
            chart: chart.clone(),
            coeffs: vec![RatFn::zero(); chart.dim()],
        }
    }

    /// The coordinate field `∂_i`.
    pub fn coordinate(chart: &Chart, i: usize) -> Self {
        let mut v = Self::zero(chart);
        v.coeffs[i] = RatFn::one();
        v
    }

    /// A field from `(coordinate name, coefficient)` pairs.
    pub fn from_terms(chart: &Chart, terms: &[(&str, RatFn<F>)]) -> Result<Self> {
        let mut v = Self::zero(chart);
        for (name, c) in terms {
            let i = chart.index(name)?;
            v.coeffs[i] = v.coeffs[i].add_ref(c);
        }
        Ok(v)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn coeffs(&self) -> &[RatFn<F>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &RatFn<F> {
        &self.coeffs[i]
    }

    /// Coefficient of `∂_v`, zero when `v` is not on the chart.
    pub fn coeff_of(&self, v: Var) -> RatFn<F> {
        self.chart
            .index_of(v)
            .map_or_else(RatFn::zero, |i| self.coeffs[i].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFn::is_zero)
    }

    /// The derivative `V(f)`.
    pub fn apply(&self, f: &RatFn<F>) -> RatFn<F> {
        let mut acc = RatFn::zero();
        for (a, &v) in self.coeffs.iter().zip(self.chart.coords()) {
            if a.is_zero() {
                continue;
            }
            let d = f.diff(v);
            if !d.is_zero() {
                acc = acc.add_ref(&a.mul_ref(&d));
            }
        }
        acc
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.chart == other.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    /// `[V, W]ⁱ = V(Wⁱ) − W(Vⁱ)`.
    pub fn lie_bracket(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(v, w)| self.apply(w).sub_ref(&other.apply(v)))
            .collect();
        Ok(VectorField {
            chart: self.chart.clone(),
            coeffs,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a.add_ref(b)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a.sub_ref(b)))
    }

    fn zip(&self, other: &Self, f: impl Fn(&RatFn<F>, &RatFn<F>) -> RatFn<F>) -> Self {
        VectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, f: &RatFn<F>) -> Self {
        self.map(|a| a.mul_ref(f))
    }

    pub fn neg(&self) -> Self {
        self.map(RatFn::neg_ref)
    }

    pub fn map(&self, f: impl Fn(&RatFn<F>) -> RatFn<F>) -> Self {
        VectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Moves the field to another chart. Coefficients of coordinates missing
    /// from `chart` must vanish.
    pub fn restrict(&self, chart: &Chart) -> Result<Self> {
        let mut out = Self::zero(chart);
        for (a, &v) in self.coeffs.iter().zip(self.chart.coords()) {
            match chart.index_of(v) {
                Some(i) => out.coeffs[i] = a.clone(),
                None if a.is_zero() => {}
                None => return Err(Error::ChartMismatch),
            }
        }
        Ok(out)
    }

    /// Text such as `p*d/dz + (b*q + mu*z)*d/dp`.
    pub fn print(&self) -> String {
        let t = self.chart.table();
        let mut s = String::new();
        for (a, &v) in self.coeffs.iter().zip(self.chart.coords()) {
            if a.is_zero() {
                continue;
            }
            let mut text = t.print(a);
            if !s.is_empty() {
                // A leading minus sign covers the whole product, so it can
                // become the separator.
                match text.strip_prefix('-') {
                    Some(rest) if a.num().len() == 1 => {
                        s.push_str(" - ");
                        text = rest.to_string();
                    }
                    _ => s.push_str(" + "),
                }
            }
            if a.is_one() {
                let _ = write!(s, "d/d{}", t.name(v));
            } else if a.num().len() > 1 && a.den().is_one() {
                let _ = write!(s, "({text})*d/d{}", t.name(v));
            } else {
                let _ = write!(s, "{text}*d/d{}", t.name(v));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}
