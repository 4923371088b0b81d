//! Projective surfaces through their canonical system
//! `z_xx = b z_y + μ z`, `z_yy = c z_x + ν z` in asymptotic coordinates.

mod catalog;
mod classify;
mod invariants;
mod systems;

use crate::connection::{curvature, Connection, StructureGroup};
use crate::error::{Error, Result};
use crate::expr::{solve_rational_combination, Deps, Matrix, SymbolKind, SymbolTable};
use crate::forms::{Chart, Distribution, Form, VectorField};
use crate::Expr;

pub use catalog::{catalog, catalog_entry, CatalogEntry, Origin, CATALOG_NAMES};
pub use classify::{
    classify, growth_dictionary, step23_excluded, ruled_canonical, ruled_ode_matrix, Classification,
    DictionaryReport, Stratum,
};
pub use invariants::{
    applicability_residuals, frame_data, gaussian_curvature, invariants, FrameData,
    InvariantsReport,
};
pub use systems::{
    canonicalize, extract_h, wilczynski_covariance_check, wilczynski_gauge, GeneralSystem, HTensor,
    PreCanonicalSystem,
};

/// Coefficients `(b, c, μ, ν)` of a canonical system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalSystem {
    table: SymbolTable,
    pub b: Expr,
    pub c: Expr,
    pub mu: Expr,
    pub nu: Expr,
}

pub(crate) fn check_no_fibers(e: &Expr, what: &str) -> Result<()> {
    if e.contains_kind(SymbolKind::Fiber) {
        return Err(Error::Precondition(format!(
            "{what} must not depend on fiber coordinates"
        )));
    }
    Ok(())
}

impl CanonicalSystem {
    pub fn new(table: &SymbolTable, b: Expr, c: Expr, mu: Expr, nu: Expr) -> Result<Self> {
        for (e, n) in [(&b, "b"), (&c, "c"), (&mu, "mu"), (&nu, "nu")] {
            check_no_fibers(e, n)?;
        }
        Chart::new(table, &["x", "y", "z", "p", "q", "s"])?;
        Ok(CanonicalSystem {
            table: table.clone(),
            b,
            c,
            mu,
            nu,
        })
    }

    /// Parses the four coefficient texts.
    pub fn parse(table: &SymbolTable, b: &str, c: &str, mu: &str, nu: &str) -> Result<Self> {
        Self::new(
            table,
            table.parse(b)?,
            table.parse(c)?,
            table.parse(mu)?,
            table.parse(nu)?,
        )
    }

    /// `b, c, mu, nu` as unspecified functions of `(x, y)`.
    pub fn symbolic(table: &SymbolTable) -> Result<Self> {
        for n in ["b", "c", "mu", "nu"] {
            table.function(n, Deps::XY)?;
        }
        Self::parse(table, "b", "c", "mu", "nu")
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    fn e(&self, src: &str) -> Expr {
        self.table.parse(src).expect("fixed text")
    }

    fn dx(&self, e: &Expr) -> Expr {
        e.diff(self.table.x())
    }

    fn dy(&self, e: &Expr) -> Expr {
        e.diff(self.table.y())
    }

    /// The base chart `(x, y)`.
    pub fn base_chart(&self) -> Result<Chart> {
        Chart::new(&self.table, &["x", "y"])
    }

    /// `(x, y, z, p, q)`.
    pub fn m5_chart(&self) -> Result<Chart> {
        Chart::new(&self.table, &["x", "y", "z", "p", "q"])
    }

    /// `(x, y, z, p, q, s)`.
    pub fn m6_chart(&self) -> Result<Chart> {
        Chart::new(&self.table, &["x", "y", "z", "p", "q", "s"])
    }

    /// `r = b q + μ z`.
    pub fn r(&self) -> Expr {
        &self.b * &self.e("q") + &self.mu * &self.e("z")
    }

    /// `t = c p + ν z`.
    pub fn t(&self) -> Expr {
        &self.c * &self.e("p") + &self.nu * &self.e("z")
    }
}

/// The three compatibility conditions of the canonical system.
pub fn integrability_residuals(s: &CanonicalSystem) -> [Expr; 3] {
    let (b, c, mu, nu) = (&s.b, &s.c, &s.mu, &s.nu);
    let (bx, by) = (s.dx(b), s.dy(b));
    let (cx, cy) = (s.dx(c), s.dy(c));
    let (mux, muy) = (s.dx(mu), s.dy(mu));
    let (nux, nuy) = (s.dx(nu), s.dy(nu));
    let two = Expr::int(2);
    let r1 = -(&two * &by * nu) - b * &nuy - s.dy(&muy) + &mux * c + &two * mu * &cx + s.dx(&nux);
    let r2 = -(&two * &by * c) - b * &cy + s.dx(&cx) + &two * &nux;
    let r3 = -(&two * &muy) - s.dy(&by) + &bx * c + &two * b * &cx;
    [r1, r2, r3]
}

/// The rank-3 connection on `B = E/L*` with frame `(z, p, q)`.
pub fn bar_connection(s: &CanonicalSystem) -> Result<Connection> {
    let z = Expr::zero;
    let one = Expr::one;
    let dx = Matrix::from_rows(vec![
        vec![z(), one(), z()],
        vec![s.mu.clone(), z(), s.b.clone()],
        vec![z(), z(), z()],
    ]);
    let dy = Matrix::from_rows(vec![
        vec![z(), z(), one()],
        vec![z(), z(), z()],
        vec![s.nu.clone(), s.c.clone(), z()],
    ]);
    Ok(Connection::new(&s.base_chart()?, &["z", "p", "q"], dx, dy)?
        .with_group(StructureGroup::ScaleAndBoost))
}

/// The rank-4 connection on `E` with frame `(z, p, q, s)` as displayed.
fn rank4_displayed(s: &CanonicalSystem) -> Result<Connection> {
    let z = Expr::zero;
    let one = Expr::one;
    let (b, c, mu, nu) = (&s.b, &s.c, &s.mu, &s.nu);
    let dx = Matrix::from_rows(vec![
        vec![z(), one(), z(), z()],
        vec![mu.clone(), z(), b.clone(), z()],
        vec![z(), z(), z(), one()],
        vec![b * nu + s.dy(mu), b * c, mu + &s.dy(b), z()],
    ]);
    let dy = Matrix::from_rows(vec![
        vec![z(), z(), one(), z()],
        vec![z(), z(), z(), one()],
        vec![nu.clone(), c.clone(), z(), z()],
        vec![mu * c + s.dx(nu), s.dx(c) + nu, b * c, z()],
    ]);
    Ok(Connection::new(&s.base_chart()?, &["z", "p", "q", "s"], dx, dy)?
        .with_group(StructureGroup::Parabolic))
}

/// The last row of the rank-4 connection from the total derivatives
/// `D_y(r)` and `D_x(t)`, as coefficients of `(z, p, q, s)`.
pub fn total_derivative_row(s: &CanonicalSystem) -> Result<[Vec<Expr>; 2]> {
    let m6 = s.m6_chart()?;
    let t = &s.table;
    let (r, tt) = (s.r(), s.t());
    let e = |n: &str| s.e(n);
    let dxf = VectorField::from_terms(&m6, &[("x", e("1")), ("z", e("p")), ("p", r.clone()), ("q", e("s"))])?;
    let dyf = VectorField::from_terms(&m6, &[("y", e("1")), ("z", e("q")), ("p", e("s")), ("q", tt.clone())])?;
    let dyr = dyf.apply(&r);
    let dxt = dxf.apply(&tt);
    let mut rows = [Vec::new(), Vec::new()];
    for (row, f) in rows.iter_mut().zip([&dyr, &dxt]) {
        let mut rest = f.clone();
        for name in ["z", "p", "q", "s"] {
            let v = t.var(name)?;
            let coeff = f.diff(v);
            if coeff.contains_kind(SymbolKind::Fiber) {
                return Err(Error::NonlinearFiber(t.print(f)));
            }
            rest = &rest - &(&coeff * &Expr::var(v));
            row.push(coeff);
        }
        if !rest.is_zero() {
            return Err(Error::NonlinearFiber(t.print(f)));
        }
    }
    Ok(rows)
}

/// The rank-4 connection of the canonical system.
///
/// The last row is assembled from total derivatives and checked against the
/// displayed matrix, and against the contractions
/// `ω^α_s = ι_{∂y} R̄^α_p + ι_{∂x} R̄^α_q` of the curvature of
/// [`bar_connection`].
pub fn rank4_connection(s: &CanonicalSystem) -> Result<Connection> {
    let shown = rank4_displayed(s)?;
    let [rx, ry] = total_derivative_row(s)?;
    for j in 0..4 {
        if shown.part(0)[(3, j)] != rx[j] || shown.part(1)[(3, j)] != ry[j] {
            return Err(Error::Inconsistent(
                "last row of the rank-4 connection disagrees with the total derivatives".into(),
            ));
        }
    }
    let rbar = curvature(&bar_connection(s)?).components();
    for a in 0..3 {
        let from_dx = -&rbar[(a, 1)];
        let from_dy = rbar[(a, 2)].clone();
        if shown.part(0)[(3, a)] != from_dx || shown.part(1)[(3, a)] != from_dy {
            return Err(Error::Inconsistent(
                "last row of the rank-4 connection is not a contraction of the curvature".into(),
            ));
        }
    }
    Ok(shown)
}

/// Whether every curvature entry of [`rank4_connection`] is a constant
/// combination of the integrability residuals and each residual is a
/// constant combination of the curvature entries.
pub fn flatness_equivalence(s: &CanonicalSystem) -> Result<bool> {
    let r = curvature(&rank4_connection(s)?);
    let entries: Vec<Expr> = r.matrix().entries().iter().filter(|e| !e.is_zero()).cloned().collect();
    let res: Vec<Expr> = integrability_residuals(s).into_iter().filter(|e| !e.is_zero()).collect();
    let spans = |from: &[Expr], to: &[Expr]| {
        to.iter().all(|e| solve_rational_combination(e, from).is_some())
    };
    Ok(spans(&res, &entries) && spans(&entries, &res))
}

/// `X`, `Y` and `Z = ∂s` on `(x, y, z, p, q, s)`.
pub fn m6_distribution(s: &CanonicalSystem) -> Result<Distribution> {
    let m6 = s.m6_chart()?;
    let e = |n: &str| s.e(n);
    let x = VectorField::from_terms(&m6, &[("x", e("1")), ("z", e("p")), ("p", s.r()), ("q", e("s"))])?;
    let y = VectorField::from_terms(&m6, &[("y", e("1")), ("z", e("q")), ("p", e("s")), ("q", s.t())])?;
    let z = VectorField::from_terms(&m6, &[("s", e("1"))])?;
    Distribution::new(vec![x, y, z])
}

/// `ω_z, ω_x, ω_y` on `M⁶`.
pub fn m6_forms(s: &CanonicalSystem) -> Result<Vec<Form>> {
    let m6 = s.m6_chart()?;
    let e = |n: &str| s.e(n);
    Ok(vec![
        Form::from_terms(&m6, &[("z", e("1")), ("x", e("-p")), ("y", e("-q"))])?,
        Form::from_terms(&m6, &[("p", e("1")), ("x", -s.r()), ("y", e("-s"))])?,
        Form::from_terms(&m6, &[("q", e("1")), ("x", e("-s")), ("y", -s.t())])?,
    ])
}

/// `ω_s = ds − D_y(r) dx − D_x(t) dy`.
pub fn omega_s(s: &CanonicalSystem) -> Result<Form> {
    let m6 = s.m6_chart()?;
    let [rx, ry] = total_derivative_row(s)?;
    let fibers = ["z", "p", "q", "s"];
    let lin = |row: &[Expr]| -> Result<Expr> {
        let mut acc = Expr::zero();
        for (c, n) in row.iter().zip(fibers) {
            acc = &acc + &(c * &s.e(n));
        }
        Ok(acc)
    };
    Form::from_terms(&m6, &[("s", s.e("1")), ("x", -lin(&rx)?), ("y", -lin(&ry)?)])
}

fn check_s0(s0: &Expr) -> Result<()> {
    if s0.contains_kind(SymbolKind::Base)
        || s0.contains_kind(SymbolKind::Fiber)
        || s0.contains_kind(SymbolKind::Jet)
    {
        return Err(Error::Precondition(
            "s0 must be constant along the base and the fibers".into(),
        ));
    }
    Ok(())
}

fn level_fields(s: &CanonicalSystem, s0: &Expr) -> Result<[VectorField; 3]> {
    check_s0(s0)?;
    let m6 = s.m6_chart()?;
    let e = |n: &str| s.e(n);
    let x = VectorField::from_terms(&m6, &[("x", e("1")), ("z", e("p")), ("p", s.r()), ("q", s0.clone())])?;
    let y = VectorField::from_terms(&m6, &[("y", e("1")), ("z", e("q")), ("p", s0.clone()), ("q", s.t())])?;
    let z = VectorField::from_terms(&m6, &[("s", e("1"))])?;
    Ok([x, y, z])
}

/// `span{X_{s0}, Y_{s0}, ∂s}` on `M⁶`.
pub fn hat_distribution(s: &CanonicalSystem, s0: &Expr) -> Result<Distribution> {
    Distribution::new(level_fields(s, s0)?.to_vec())
}

/// The Cauchy reduction of `span{X_{s0}, Y_{s0}, ∂s}` along `∂s`: the
/// 2-plane distribution on `(x, y, z, p, q)`.
pub fn derived_reduction(s: &CanonicalSystem, s0: &Expr) -> Result<Distribution> {
    let [x, y, z] = level_fields(s, s0)?;
    if !z.lie_bracket(&x)?.is_zero() || !z.lie_bracket(&y)?.is_zero() {
        return Err(Error::Inconsistent("∂s does not commute with the level fields".into()));
    }
    let m5 = s.m5_chart()?;
    Distribution::new(vec![x.restrict(&m5)?, y.restrict(&m5)?])
}

