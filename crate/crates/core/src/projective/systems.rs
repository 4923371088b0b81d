use super::invariants::frame_data;
use super::{bar_connection, check_no_fibers, rank4_connection, CanonicalSystem};
use crate::connection::{gauge_transform, Connection, StructureGroup};
use crate::error::{Error, Result};
use crate::expr::{Matrix, SymbolTable};
use crate::Expr;

/// `z_xx = l z_xy + α z_x + b z_y + μ z`, `z_yy = m z_xy + c z_x + δ z_y + ν z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralSystem {
    table: SymbolTable,
    pub l: Expr,
    pub m: Expr,
    pub alpha: Expr,
    pub b: Expr,
    pub mu: Expr,
    pub c: Expr,
    pub delta: Expr,
    pub nu: Expr,
}

impl GeneralSystem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        table: &SymbolTable,
        l: Expr,
        m: Expr,
        alpha: Expr,
        b: Expr,
        mu: Expr,
        c: Expr,
        delta: Expr,
        nu: Expr,
    ) -> Result<Self> {
        for e in [&l, &m, &alpha, &b, &mu, &c, &delta, &nu] {
            check_no_fibers(e, "coefficients")?;
        }
        Ok(GeneralSystem {
            table: table.clone(),
            l,
            m,
            alpha,
            b,
            mu,
            c,
            delta,
            nu,
        })
    }

    /// `lm − 1`; `h` is nondegenerate iff this is nonzero.
    pub fn discriminant(&self) -> Expr {
        &self.l * &self.m - Expr::one()
    }

    /// The flat connection `de = ωe` on the frame `(z, z_x, z_y, z_xy)`.
    /// The last row solves `s_x − l s_y = A`, `s_y − m s_x = B` for the
    /// derivatives of `s = z_xy`.
    pub fn connection(&self) -> Result<Connection> {
        let d = self.discriminant();
        if d.is_zero() {
            return Err(Error::Precondition("degenerate h: lm - 1 = 0".into()));
        }
        let (x, y) = (self.table.x(), self.table.y());
        let (l, m, al, b, mu, c, de, nu) = (
            &self.l, &self.m, &self.alpha, &self.b, &self.mu, &self.c, &self.delta, &self.nu,
        );
        let z = Expr::zero;
        let one = Expr::one;
        // Coefficients of (z, p, q, s).
        let a = [
            b * nu + mu.diff(y),
            b * c + al.diff(y),
            b.diff(y) + b * de + mu.clone(),
            l.diff(y) + al + &(b * m),
        ];
        let bb = [
            c * mu + nu.diff(x),
            c.diff(x) + &(c * al) + nu.clone(),
            c * b + de.diff(x),
            m.diff(x) + &(c * l) + de.clone(),
        ];
        let den = -d;
        let sx: Vec<Expr> = (0..4).map(|k| (&a[k] + &(l * &bb[k])) / &den).collect();
        let sy: Vec<Expr> = (0..4).map(|k| (&bb[k] + &(m * &a[k])) / &den).collect();
        let dx = Matrix::from_rows(vec![
            vec![z(), one(), z(), z()],
            vec![mu.clone(), al.clone(), b.clone(), l.clone()],
            vec![z(), z(), z(), one()],
            sx,
        ]);
        let dy = Matrix::from_rows(vec![
            vec![z(), z(), one(), z()],
            vec![z(), z(), z(), one()],
            vec![nu.clone(), c.clone(), de.clone(), m.clone()],
            sy,
        ]);
        let base = crate::forms::Chart::new(&self.table, &["x", "y"])?;
        Ok(Connection::new(&base, &["z", "p", "q", "s"], dx, dy)?.with_group(StructureGroup::Parabolic))
    }
}

/// The tensor `h = l dx⊗dx + dx⊗dy + dy⊗dx + m dy⊗dy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HTensor {
    pub h: Matrix,
    pub determinant: Expr,
    /// `l = m = 0`: the coordinates are asymptotic.
    pub asymptotic: bool,
    /// Nonconstant factors whose vanishing makes `h` degenerate.
    pub certificate: Vec<Expr>,
}

/// Reads `h` off the connection of a general system.
pub fn extract_h(g: &GeneralSystem) -> Result<HTensor> {
    let h = frame_data(&g.connection()?)?.h;
    let determinant = h.det();
    if determinant.is_zero() {
        return Err(Error::Precondition("degenerate h".into()));
    }
    let asymptotic = h[(0, 0)].is_zero() && h[(1, 1)].is_zero();
    let certificate = if determinant.is_constant() { vec![] } else { vec![determinant.clone()] };
    Ok(HTensor {
        h,
        determinant,
        asymptotic,
        certificate,
    })
}

/// `z_xx = α z_x + b z_y + μ z`, `z_yy = c z_x + δ z_y + ν z` together with
/// a potential `θ` for `α dx + δ dy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreCanonicalSystem {
    table: SymbolTable,
    pub alpha: Expr,
    pub delta: Expr,
    pub b: Expr,
    pub c: Expr,
    pub mu: Expr,
    pub nu: Expr,
    pub theta: Expr,
}

impl PreCanonicalSystem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        table: &SymbolTable,
        alpha: Expr,
        delta: Expr,
        b: Expr,
        c: Expr,
        mu: Expr,
        nu: Expr,
        theta: Expr,
    ) -> Result<Self> {
        for e in [&alpha, &delta, &b, &c, &mu, &nu, &theta] {
            check_no_fibers(e, "coefficients")?;
        }
        if theta.diff(table.x()) != alpha || theta.diff(table.y()) != delta {
            return Err(Error::Precondition(
                "theta is not a potential: need theta_x = alpha and theta_y = delta".into(),
            ));
        }
        Ok(PreCanonicalSystem {
            table: table.clone(),
            alpha,
            delta,
            b,
            c,
            mu,
            nu,
            theta,
        })
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }
}

/// The canonical system satisfied by `e^{−θ/2} z`.
pub fn canonicalize(p: &PreCanonicalSystem) -> Result<CanonicalSystem> {
    let (x, y) = (p.table.x(), p.table.y());
    let (tx, ty) = (p.theta.diff(x), p.theta.diff(y));
    let half = Expr::constant(crate::q(1, 2));
    let quarter = Expr::constant(crate::q(1, 4));
    let mu = &p.mu + &(&p.b * &ty * &half) + &tx * &tx * &quarter - &tx.diff(x) * &half;
    let nu = &p.nu + &(&p.c * &tx * &half) + &ty * &ty * &quarter - &ty.diff(y) * &half;
    CanonicalSystem::new(&p.table, p.b.clone(), p.c.clone(), mu, nu)
}

/// The gauge induced on `(z, z_x, z_y, z_xy)` by `z ↦ f z`.
pub fn wilczynski_gauge(table: &SymbolTable, f: &Expr) -> Result<Matrix> {
    if f.is_zero() {
        return Err(Error::Precondition("f vanishes identically".into()));
    }
    let (x, y) = (table.x(), table.y());
    let (fx, fy) = (f.diff(x), f.diff(y));
    let z = Expr::zero;
    Ok(Matrix::from_rows(vec![
        vec![f.clone(), z(), z(), z()],
        vec![fx.clone(), f.clone(), z(), z()],
        vec![fy.clone(), z(), f.clone(), z()],
        vec![fx.diff(y), fy, fx, f.clone()],
    ]))
}

/// Gauges the rank-4 connection by `g_f` and `ω̄` by its `(z, p, q)` block,
/// then checks that `h` read off the new rank-4 connection is unchanged and
/// that `ω̄` keeps its coframe row `(0, dx, dy)`.
pub fn wilczynski_covariance_check(s: &CanonicalSystem, f: &Expr) -> Result<bool> {
    let g = wilczynski_gauge(s.table(), f)?;
    let w = rank4_connection(s)?;
    let h = frame_data(&w)?.h;
    let wt = gauge_transform(&w, &g)?;
    let ht = frame_data(&wt)?.h;
    let bar = bar_connection(s)?;
    let g3 = Matrix::from_fn(3, 3, |i, j| g[(i, j)].clone());
    let bt = gauge_transform(&bar, &g3)?;
    let row_kept = (0..3).all(|j| {
        bt.part(0)[(0, j)] == bar.part(0)[(0, j)] && bt.part(1)[(0, j)] == bar.part(1)[(0, j)]
    });
    Ok(h == ht && row_kept)
}
