use std::fmt::Write;

use super::{Chart, VectorField};
use crate::error::{Error, Result};
use crate::expr::RatFn;
use crate::scalar::{Field, Rational};

/// A differential form of degree 0, 1 or 2.
///
/// Coefficients are stored for increasing index tuples: the function itself,
/// then `dx_i`, then `dx_i∧dx_j` with `i < j` in lexicographic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form<F: Field = Rational> {
    chart: Chart,
    degree: usize,
    coeffs: Vec<RatFn<F>>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn slots(n: usize, degree: usize) -> usize {
    match degree {
        0 => 1,
        1 => n,
        _ => n * n.saturating_sub(1) / 2,
    }
}

impl<F: Field> Form<F> {
    pub fn zero(chart: &Chart, degree: usize) -> Result<Self> {
        if degree > 2 {
            return Err(Error::DegreeOverflow(degree));
        }
        Ok(Form {
            chart: chart.clone(),
            degree,
            coeffs: vec![RatFn::zero(); slots(chart.dim(), degree)],
        })
    }

    pub fn function(chart: &Chart, f: RatFn<F>) -> Self {
        Form {
            chart: chart.clone(),
            degree: 0,
            coeffs: vec![f],
        }
    }

    /// The 1-form `Σ aᵢ dxⁱ`.
    pub fn one_form(chart: &Chart, coeffs: Vec<RatFn<F>>) -> Result<Self> {
        if coeffs.len() != chart.dim() {
            return Err(Error::RankMismatch {
                expected: chart.dim(),
                found: coeffs.len(),
            });
        }
        Ok(Form {
            chart: chart.clone(),
            degree: 1,
            coeffs,
        })
    }

    /// The 1-form from `(coordinate name, coefficient)` pairs.
    pub fn from_terms(chart: &Chart, terms: &[(&str, RatFn<F>)]) -> Result<Self> {
        let mut w = Self::zero(chart, 1)?;
        for (name, c) in terms {
            let i = chart.index(name)?;
            w.coeffs[i] = w.coeffs[i].add_ref(c);
        }
        Ok(w)
    }

    /// The coordinate differential `dxⁱ`.
    pub fn coordinate(chart: &Chart, i: usize) -> Self {
        let mut w = Self::zero(chart, 1).expect("degree 1");
        w.coeffs[i] = RatFn::one();
        w
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[RatFn<F>] {
        &self.coeffs
    }

    /// Coefficient of `dxⁱ` in a 1-form.
    pub fn coeff(&self, i: usize) -> &RatFn<F> {
        assert_eq!(self.degree, 1, "not a 1-form");
        &self.coeffs[i]
    }

    /// Coefficient of `dxⁱ∧dxʲ` in a 2-form, antisymmetric in `(i, j)`.
    pub fn coeff2(&self, i: usize, j: usize) -> RatFn<F> {
        assert_eq!(self.degree, 2, "not a 2-form");
        let n = self.chart.dim();
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coeffs[pair_index(n, i, j)].clone(),
            std::cmp::Ordering::Greater => self.coeffs[pair_index(n, j, i)].neg_ref(),
            std::cmp::Ordering::Equal => RatFn::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFn::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.chart != other.chart {
            Err(Error::ChartMismatch)
        } else if self.degree != other.degree {
            Err(Error::Precondition("forms of different degree".into()))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip(other, RatFn::add_ref))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip(other, RatFn::sub_ref))
    }

    fn zip(&self, other: &Self, f: impl Fn(&RatFn<F>, &RatFn<F>) -> RatFn<F>) -> Self {
        Form {
            chart: self.chart.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, f: &RatFn<F>) -> Self {
        Form {
            chart: self.chart.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a.mul_ref(f)).collect(),
        }
    }

    /// Exterior derivative.
    pub fn d(&self) -> Result<Self> {
        let coords = self.chart.coords();
        let n = coords.len();
        match self.degree {
            0 => Ok(Form {
                chart: self.chart.clone(),
                degree: 1,
                coeffs: coords.iter().map(|&v| self.coeffs[0].diff(v)).collect(),
            }),
            1 => {
                let mut out = Self::zero(&self.chart, 2)?;
                for i in 0..n {
                    for j in i + 1..n {
                        let c = self.coeffs[j]
                            .diff(coords[i])
                            .sub_ref(&self.coeffs[i].diff(coords[j]));
                        out.coeffs[pair_index(n, i, j)] = c;
                    }
                }
                Ok(out)
            }
            d => Err(Error::DegreeOverflow(d + 1)),
        }
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch);
        }
        let degree = self.degree + other.degree;
        if degree > 2 {
            return Err(Error::DegreeOverflow(degree));
        }
        if self.degree == 0 {
            return Ok(other.scale(&self.coeffs[0]));
        }
        if other.degree == 0 {
            return Ok(self.scale(&other.coeffs[0]));
        }
        let n = self.chart.dim();
        let mut out = Self::zero(&self.chart, 2)?;
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&self.coeffs, &other.coeffs);
                out.coeffs[pair_index(n, i, j)] = a[i].mul_ref(&b[j]).sub_ref(&a[j].mul_ref(&b[i]));
            }
        }
        Ok(out)
    }

    /// `ω(V)` for a 1-form.
    pub fn pair(&self, v: &VectorField<F>) -> Result<RatFn<F>> {
        if self.chart != *v.chart() {
            return Err(Error::ChartMismatch);
        }
        if self.degree != 1 {
            return Err(Error::Precondition("pairing needs a 1-form".into()));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(v.coeffs())
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a.mul_ref(b))
            .sum())
    }

    /// `Θ(V, W)` for a 2-form.
    pub fn eval2(&self, v: &VectorField<F>, w: &VectorField<F>) -> Result<RatFn<F>> {
        if self.chart != *v.chart() || self.chart != *w.chart() {
            return Err(Error::ChartMismatch);
        }
        if self.degree != 2 {
            return Err(Error::Precondition("evaluation needs a 2-form".into()));
        }
        let n = self.chart.dim();
        let (a, b) = (v.coeffs(), w.coeffs());
        let mut acc = RatFn::zero();
        for i in 0..n {
            for j in i + 1..n {
                let c = &self.coeffs[pair_index(n, i, j)];
                if c.is_zero() {
                    continue;
                }
                let m = a[i].mul_ref(&b[j]).sub_ref(&a[j].mul_ref(&b[i]));
                acc = acc.add_ref(&c.mul_ref(&m));
            }
        }
        Ok(acc)
    }

    /// Text such as `dz - p*dx - q*dy` or `dx^dp + dy^dq`.
    pub fn print(&self) -> String {
        let t = self.chart.table();
        let names = self.chart.names();
        let n = names.len();
        let basis: Vec<String> = match self.degree {
            0 => vec![String::new()],
            1 => names.iter().map(|v| format!("d{v}")).collect(),
            _ => {
                let mut b = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        b.push(format!("d{}^d{}", names[i], names[j]));
                    }
                }
                b
            }
        };
        let mut s = String::new();
        for (c, e) in self.coeffs.iter().zip(&basis) {
            if c.is_zero() {
                continue;
            }
            let (neg, c) = if c.num().leading_coeff().is_negative() {
                (true, c.neg_ref())
            } else {
                (false, c.clone())
            };
            match (s.is_empty(), neg) {
                (true, true) => s.push('-'),
                (false, true) => s.push_str(" - "),
                (false, false) => s.push_str(" + "),
                (true, false) => {}
            }
            let text = t.print(&c);
            if e.is_empty() {
                s.push_str(&text);
            } else if c.is_one() {
                s.push_str(e);
            } else if c.num().len() > 1 && c.den().is_one() {
                let _ = write!(s, "({text})*{e}");
            } else {
                let _ = write!(s, "{text}*{e}");
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Deps, SymbolTable};

    fn setup() -> (SymbolTable, Chart) {
        let t = SymbolTable::new();
        t.function("b", Deps::XY).unwrap();
        t.function("c", Deps::XY).unwrap();
        let c = Chart::new(&t, &["x", "y", "z", "p", "q"]).unwrap();
        (t, c)
    }

    #[test]
    fn d_of_examples() {
        let (t, c) = setup();
        let e = |s: &str| t.parse(s).unwrap();
        let xdy = Form::from_terms(&c, &[("y", e("x"))]).unwrap();
        let dxdy = Form::coordinate(&c, 0).wedge(&Form::coordinate(&c, 1)).unwrap();
        assert_eq!(xdy.d().unwrap(), dxdy);
        let wz = Form::from_terms(&c, &[("z", e("1")), ("x", e("-p")), ("y", e("-q"))]).unwrap();
        assert_eq!(wz.d().unwrap().print(), "dx^dp + dy^dq");
        assert!(Form::function(&c, e("3")).d().unwrap().is_zero());
        assert_eq!(dxdy.d(), Err(Error::DegreeOverflow(3)));
    }

    #[test]
    fn wedge_examples() {
        let (t, c) = setup();
        let e = |s: &str| t.parse(s).unwrap();
        let dx = Form::coordinate(&c, 0);
        let dy = Form::coordinate(&c, 1);
        assert!(dx.wedge(&dx).unwrap().is_zero());
        let s = dx.wedge(&dy).unwrap().add(&dy.wedge(&dx).unwrap()).unwrap();
        assert!(s.is_zero());
        let w = dx.scale(&e("b")).wedge(&dy.scale(&e("c"))).unwrap();
        assert_eq!(w.coeff2(0, 1), e("b*c"));
        assert_eq!(w.coeff2(1, 0), e("-b*c"));
        let two = dx.wedge(&dy).unwrap();
        assert_eq!(two.wedge(&dx), Err(Error::DegreeOverflow(3)));
    }
}
