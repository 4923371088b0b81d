//! Linear connections on trivial bundles over a surface chart `(x, y)`.
//!
//! A connection of rank `k` is stored as two `k×k` matrices `M_x`, `M_y`
//! with `ω = M_x dx + M_y dy`. Row `β` of `ω` describes `de_β`, so the
//! connection forms on the total space are `ω_β = de_β − (M_i e)_β dxⁱ` and
//! the horizontal lifts are `X_i = ∂_i + (M_i e)·∂_e`.

mod classify;

use crate::error::{Error, Result};
use crate::expr::{Matrix, RatFn, SymbolKind, Var};
use crate::forms::{Chart, Distribution, Form, VectorField};
use crate::scalar::{Field, Rational};

pub use classify::{classify_growth, witness_kernel, GrowthClass, GrowthClassification};

/// Structure group tag carried by a connection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructureGroup {
    GeneralLinear,
    /// Stabilizer of the splitting `L ⊕ TΣ ⊕ L*` of a rank-4 bundle.
    Parabolic,
    /// `diag(λ, eᵃ, e⁻ᵃ)` acting on a rank-3 bundle.
    ScaleAndBoost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection<F: Field = Rational> {
    base: Chart,
    fibers: Vec<String>,
    parts: [Matrix<F>; 2],
    group: StructureGroup,
}

/// The `dx∧dy` coefficient of `dω − ω∧ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curvature<F: Field = Rational> {
    matrix: Matrix<F>,
}

impl<F: Field> Curvature<F> {
    pub fn new(matrix: Matrix<F>) -> Self {
        Curvature { matrix }
    }

    /// Same orientation as the connection matrix: row `β` acts on `de_β`.
    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    /// Components `R^α_β` with `α` as the row index, so that the vertical
    /// field `[X_1, X_2]` is `Σ e_α R^α_β ∂_{e_β}`. This is the transpose of
    /// [`Curvature::matrix`].
    pub fn components(&self) -> Matrix<F> {
        self.matrix.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }
}

fn check_base(base: &Chart) -> Result<()> {
    let t = base.table();
    if base.coords() != [t.x(), t.y()] {
        return Err(Error::Precondition(
            "connection base chart must be (x, y)".into(),
        ));
    }
    Ok(())
}

fn check_square<F: Field>(m: &Matrix<F>, k: usize) -> Result<()> {
    if m.nrows() != k || m.ncols() != k {
        return Err(Error::RankMismatch {
            expected: k,
            found: if m.nrows() != k { m.nrows() } else { m.ncols() },
        });
    }
    Ok(())
}

fn check_base_functions<F: Field>(m: &Matrix<F>) -> Result<()> {
    if m.entries().iter().any(|e| e.contains_kind(SymbolKind::Fiber)) {
        return Err(Error::Precondition(
            "entries must not depend on fiber coordinates".into(),
        ));
    }
    Ok(())
}

impl<F: Field> Connection<F> {
    /// `ω = dx_part·dx + dy_part·dy` on the bundle with fiber coordinates
    /// `fibers`.
    pub fn new(base: &Chart, fibers: &[&str], dx_part: Matrix<F>, dy_part: Matrix<F>) -> Result<Self> {
        check_base(base)?;
        let k = fibers.len();
        if k == 0 {
            return Err(Error::EmptyInput);
        }
        for m in [&dx_part, &dy_part] {
            check_square(m, k)?;
            check_base_functions(m)?;
        }
        let c = Connection {
            base: base.clone(),
            fibers: fibers.iter().map(|s| s.to_string()).collect(),
            parts: [dx_part, dy_part],
            group: StructureGroup::GeneralLinear,
        };
        c.total_chart()?;
        Ok(c)
    }

    pub fn zero(base: &Chart, fibers: &[&str]) -> Result<Self> {
        let k = fibers.len();
        Self::new(base, fibers, Matrix::zeros(k, k), Matrix::zeros(k, k))
    }

    pub fn with_group(mut self, group: StructureGroup) -> Self {
        self.group = group;
        self
    }

    pub fn base(&self) -> &Chart {
        &self.base
    }

    pub fn fibers(&self) -> &[String] {
        &self.fibers
    }

    pub fn rank(&self) -> usize {
        self.fibers.len()
    }

    pub fn group(&self) -> StructureGroup {
        self.group
    }

    /// Coefficient matrix of `dx` (`i = 0`) or `dy` (`i = 1`).
    pub fn part(&self, i: usize) -> &Matrix<F> {
        &self.parts[i]
    }

    /// Entry `(row, col)` as a 1-form on the base chart.
    pub fn entry(&self, row: usize, col: usize) -> Form<F> {
        Form::one_form(
            &self.base,
            vec![self.parts[0][(row, col)].clone(), self.parts[1][(row, col)].clone()],
        )
        .expect("base chart has two coordinates")
    }

    /// The base chart followed by the fiber coordinates.
    pub fn total_chart(&self) -> Result<Chart> {
        let names: Vec<&str> = self.fibers.iter().map(String::as_str).collect();
        let chart = self.base.extend(&names)?;
        if chart.coords()[2..].iter().any(|v| v.kind() != SymbolKind::Fiber) {
            return Err(Error::Precondition(
                "fiber names must be fiber coordinates".into(),
            ));
        }
        Ok(chart)
    }

    fn fiber_vars(&self, total: &Chart) -> Vec<Var> {
        total.coords()[2..].to_vec()
    }

    /// `(M_i e)_β` for each `β`.
    fn lifted(&self, total: &Chart, i: usize) -> Vec<RatFn<F>> {
        let e = self.fiber_vars(total);
        let m = &self.parts[i];
        (0..self.rank())
            .map(|b| {
                let mut acc = RatFn::zero();
                for (a, &ea) in e.iter().enumerate() {
                    let g = &m[(b, a)];
                    if !g.is_zero() {
                        acc = acc.add_ref(&g.mul_ref(&RatFn::var(ea)));
                    }
                }
                acc
            })
            .collect()
    }

    /// The horizontal lifts `X_1, X_2` of `∂x, ∂y`.
    pub fn horizontal_fields(&self) -> Result<[VectorField<F>; 2]> {
        let total = self.total_chart()?;
        let make = |i: usize| {
            let mut coeffs = vec![RatFn::zero(); total.dim()];
            coeffs[i] = RatFn::one();
            for (b, c) in self.lifted(&total, i).into_iter().enumerate() {
                coeffs[2 + b] = c;
            }
            VectorField::new(&total, coeffs)
        };
        Ok([make(0)?, make(1)?])
    }

    /// The forms `ω_β = de_β − (M_i e)_β dxⁱ` on the total space.
    pub fn connection_forms(&self) -> Result<Vec<Form<F>>> {
        let total = self.total_chart()?;
        let lx = self.lifted(&total, 0);
        let ly = self.lifted(&total, 1);
        (0..self.rank())
            .map(|b| {
                let mut coeffs = vec![RatFn::zero(); total.dim()];
                coeffs[0] = lx[b].neg_ref();
                coeffs[1] = ly[b].neg_ref();
                coeffs[2 + b] = RatFn::one();
                Form::one_form(&total, coeffs)
            })
            .collect()
    }
}

/// The horizontal distribution `span{X_1, X_2}` on the total space.
pub fn horizontal_distribution<F: Field>(c: &Connection<F>) -> Result<Distribution<F>> {
    Distribution::new(c.horizontal_fields()?.to_vec())
}

fn diff_matrix<F: Field>(m: &Matrix<F>, v: Var) -> Matrix<F> {
    m.map(|e| e.diff(v))
}

/// `R = dω − ω∧ω`, i.e. `∂_x M_y − ∂_y M_x − [M_x, M_y]`.
pub fn curvature<F: Field>(c: &Connection<F>) -> Curvature<F> {
    let t = c.base.table();
    let [mx, my] = &c.parts;
    let d = diff_matrix(my, t.x()).sub_ref(&diff_matrix(mx, t.y()));
    let comm = mx.mul_ref(my).sub_ref(&my.mul_ref(mx));
    Curvature::new(d.sub_ref(&comm))
}

/// Reads `N` off a vertical field whose `∂_{e_β}` coefficient is
/// `Σ_α N[β][α] e_α`.
pub fn vertical_matrix<F: Field>(c: &Connection<F>, v: &VectorField<F>) -> Result<Matrix<F>> {
    let total = c.total_chart()?;
    if *v.chart() != total {
        return Err(Error::ChartMismatch);
    }
    let table = total.table();
    if !v.coeff(0).is_zero() || !v.coeff(1).is_zero() {
        return Err(Error::NonlinearFiber(format!(
            "field is not vertical: {}",
            v.print()
        )));
    }
    let e = c.fiber_vars(&total);
    let k = c.rank();
    let mut m = Matrix::zeros(k, k);
    for b in 0..k {
        let cb = v.coeff(2 + b);
        let mut rest = cb.clone();
        for (a, &ea) in e.iter().enumerate() {
            let d = cb.diff(ea);
            if d.contains_kind(SymbolKind::Fiber) {
                return Err(Error::NonlinearFiber(table.print(cb)));
            }
            rest = rest.sub_ref(&d.mul_ref(&RatFn::var(ea)));
            m[(b, a)] = d;
        }
        if !rest.is_zero() {
            return Err(Error::NonlinearFiber(table.print(cb)));
        }
    }
    Ok(m)
}

/// The covariant derivatives `∇_{∂x} R` and `∇_{∂y} R`, read off the vertical
/// fields `[X_k, [X_1, X_2]]`. The results use the orientation of
/// [`Curvature::matrix`].
pub fn covariant_curvature_derivatives<F: Field>(
    c: &Connection<F>,
) -> Result<(Curvature<F>, Curvature<F>)> {
    let [x1, x2] = c.horizontal_fields()?;
    let x3 = x1.lie_bracket(&x2)?;
    let d1 = vertical_matrix(c, &x1.lie_bracket(&x3)?)?;
    let d2 = vertical_matrix(c, &x2.lie_bracket(&x3)?)?;
    Ok((Curvature::new(d1), Curvature::new(d2)))
}

/// Matrix route to `∇_{∂_k} R`: `∂_k R + R M_k − M_k R`. Agrees with the
/// bracket route of [`covariant_curvature_derivatives`].
pub fn covariant_derivative_formula<F: Field>(c: &Connection<F>, k: usize) -> Curvature<F> {
    let t = c.base.table();
    let r = curvature(c).matrix;
    let m = &c.parts[k];
    let v = if k == 0 { t.x() } else { t.y() };
    let out = diff_matrix(&r, v)
        .add_ref(&r.mul_ref(m))
        .sub_ref(&m.mul_ref(&r));
    Curvature::new(out)
}

/// `ω̃ = g ω g⁻¹ + dg g⁻¹`.
pub fn gauge_transform<F: Field>(c: &Connection<F>, g: &Matrix<F>) -> Result<Connection<F>> {
    check_square(g, c.rank())?;
    check_base_functions(g)?;
    let ginv = g.inverse().ok_or(Error::SingularGauge)?;
    let t = c.base.table();
    let parts = [0, 1].map(|i| {
        let v = if i == 0 { t.x() } else { t.y() };
        g.mul_ref(&c.parts[i])
            .mul_ref(&ginv)
            .add_ref(&diff_matrix(g, v).mul_ref(&ginv))
    });
    Ok(Connection {
        base: c.base.clone(),
        fibers: c.fibers.clone(),
        parts,
        group: c.group,
    })
}

/// Christoffel symbols `Γ^i_{jk}` of a surface, symmetric in `j, k`.
/// Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Christoffel<F: Field = Rational> {
    gamma: [[[RatFn<F>; 2]; 2]; 2],
}

impl<F: Field> Christoffel<F> {
    pub fn zero() -> Self {
        Self::from_fn(|_, _, _| RatFn::zero())
    }

    /// Builds the table from `f(i, j, k)`, called with `j ≤ k` only.
    pub fn from_fn(f: impl Fn(usize, usize, usize) -> RatFn<F>) -> Self {
        let gamma = [0, 1].map(|i| [0, 1].map(|j| [0, 1].map(|k| f(i, j.min(k), j.max(k)))));
        Christoffel { gamma }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &RatFn<F> {
        &self.gamma[i][j][k]
    }
}

/// The Gauss-formula connection of a surface in euclidean space on the frame
/// `(sigma, p, q)`.
pub fn euclidean_connection<F: Field>(
    base: &Chart,
    gamma: &Christoffel<F>,
    l: &RatFn<F>,
    m: &RatFn<F>,
    n: &RatFn<F>,
) -> Result<Connection<F>> {
    let g = |i: usize, j: usize, k: usize| gamma.get(i, j, k).clone();
    let z = RatFn::zero;
    let one = RatFn::one;
    let dx = Matrix::from_rows(vec![
        vec![z(), one(), z()],
        vec![l.clone(), g(0, 0, 0), g(1, 0, 0)],
        vec![m.clone(), g(0, 0, 1), g(1, 0, 1)],
    ]);
    let dy = Matrix::from_rows(vec![
        vec![z(), z(), one()],
        vec![m.clone(), g(0, 0, 1), g(1, 0, 1)],
        vec![n.clone(), g(0, 1, 1), g(1, 1, 1)],
    ]);
    Connection::new(base, &["sigma", "p", "q"], dx, dy)
}

#[cfg(test)]
mod tests;
