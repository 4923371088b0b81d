use super::{integrability_residuals, rank4_connection, CanonicalSystem};
use crate::connection::Connection;
use crate::error::{Error, Result};
use crate::expr::Matrix;
use crate::Expr;

/// Frame quantities read off a rank-4 connection with frame
/// `(e0, e1, e2, e3)` and `de_β = ω^α_β e_α`, where `ω^α_β` is entry
/// `(β, α)` of the stored matrix. Indices `i, j, k` run over `{1, 2}` and
/// are stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameData {
    /// `ω^i = ω^i_0 = C[i][0] dx + C[i][1] dy`.
    pub coframe: Matrix,
    /// `ω^3_i = h_ij ω^j`.
    pub h: Matrix,
    /// `h_ij ω^j_3 − ω^0_i = ℓ_ij ω^j`.
    pub ell: Matrix,
    /// `ω^0_3 = −r_j ω^j`.
    pub r: [Expr; 2],
    /// `Φ_ijk ω^k = dh_ij − h_kj ω^k_i − h_ik ω^k_j`, index `[i][j][k]`.
    pub cubic: [[[Expr; 2]; 2]; 2],
}

impl FrameData {
    /// `Φ_ijk Φ_pqr h^ip h^jq h^kr`.
    pub fn fubini(&self) -> Result<Expr> {
        let hi = self.h.inverse().ok_or_else(|| Error::Precondition("h is degenerate".into()))?;
        let p = &self.cubic;
        let mut f = Expr::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for a in 0..2 {
                        for b in 0..2 {
                            for c in 0..2 {
                                let t = &hi[(i, a)] * &hi[(j, b)] * &hi[(k, c)];
                                if !t.is_zero() {
                                    f = &f + &(&p[i][j][k] * &p[a][b][c] * t);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(f)
    }

    /// `h^ij Φ_ijk` for `k = 1, 2`.
    pub fn apolarity(&self) -> Result<[Expr; 2]> {
        let hi = self.h.inverse().ok_or_else(|| Error::Precondition("h is degenerate".into()))?;
        let mut out = [Expr::zero(), Expr::zero()];
        for (k, o) in out.iter_mut().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    *o = &*o + &(&hi[(i, j)] * &self.cubic[i][j][k]);
                }
            }
        }
        Ok(out)
    }
}

/// Applies the Cartan lemma to the rows of a rank-4 connection.
pub fn frame_data(w: &Connection) -> Result<FrameData> {
    if w.rank() != 4 {
        return Err(Error::RankMismatch {
            expected: 4,
            found: w.rank(),
        });
    }
    let t = w.base().table().clone();
    // ω^α_β as a (dx, dy) pair.
    let om = |a: usize, b: usize| [w.part(0)[(b, a)].clone(), w.part(1)[(b, a)].clone()];
    let coframe = Matrix::from_fn(2, 2, |i, d| om(i + 1, 0)[d].clone());
    let cinv = coframe
        .inverse()
        .ok_or_else(|| Error::Precondition("ω^1, ω^2 are not a coframe".into()))?;
    // Coefficients κ_j of a (dx, dy) pair in the coframe.
    let in_coframe = |f: &[Expr; 2]| -> [Expr; 2] {
        let k = |j: usize| &(&f[0] * &cinv[(0, j)]) + &(&f[1] * &cinv[(1, j)]);
        [k(0), k(1)]
    };
    let h = Matrix::from_rows((0..2).map(|i| in_coframe(&om(3, i + 1)).to_vec()).collect());
    let ell = Matrix::from_rows(
        (0..2)
            .map(|i| {
                let mut f = [-&om(0, i + 1)[0], -&om(0, i + 1)[1]];
                for j in 0..2 {
                    let o = om(j + 1, 3);
                    for d in 0..2 {
                        f[d] = &f[d] + &(&h[(i, j)] * &o[d]);
                    }
                }
                in_coframe(&f).to_vec()
            })
            .collect(),
    );
    let r0 = om(0, 3);
    let [r1, r2] = in_coframe(&[-&r0[0], -&r0[1]]);
    let mut cubic: [[[Expr; 2]; 2]; 2] = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            let hij = &h[(i, j)];
            let mut f = [hij.diff(t.x()), hij.diff(t.y())];
            for k in 0..2 {
                let (oki, okj) = (om(k + 1, i + 1), om(k + 1, j + 1));
                for d in 0..2 {
                    f[d] = &f[d] - &(&h[(k, j)] * &oki[d]) - &h[(i, k)] * &okj[d];
                }
            }
            cubic[i][j] = in_coframe(&f);
        }
    }
    Ok(FrameData {
        coframe,
        h,
        ell,
        r: [r1, r2],
        cubic,
    })
}

/// `(f_xy f − f_x f_y) / f²`, the log-free `∂²_xy log f`.
fn log_xy(s: &CanonicalSystem, f: &Expr) -> Expr {
    let (x, y) = (s.table().x(), s.table().y());
    let (fx, fy) = (f.diff(x), f.diff(y));
    (&fx.diff(y) * f - &fx * &fy) / (f * f)
}

fn nonzero_bc(s: &CanonicalSystem) -> Result<Expr> {
    let u = &s.b * &s.c;
    if u.is_zero() {
        return Err(Error::Precondition("bc vanishes identically".into()));
    }
    Ok(u)
}

/// Gaussian curvature of `φ = 8bc·h`: `K = −L(bc) / (8bc)` with `L` the
/// log-free `∂²_xy log`.
pub fn gaussian_curvature(s: &CanonicalSystem) -> Result<Expr> {
    let u = nonzero_bc(s)?;
    Ok(-log_xy(s, &u) / (Expr::int(8) * u))
}

/// `∂²_xy log(b/c)`, `∂_x(∂²_xy log c / bc)`, `∂_y(∂²_xy log b / bc)`.
///
/// When all three vanish the Gaussian curvature is checked to be constant.
pub fn applicability_residuals(s: &CanonicalSystem) -> Result<[Expr; 3]> {
    let u = nonzero_bc(s)?;
    let (x, y) = (s.table().x(), s.table().y());
    let (lb, lc) = (log_xy(s, &s.b), log_xy(s, &s.c));
    let out = [&lb - &lc, (&lc / &u).diff(x), (&lb / &u).diff(y)];
    if out.iter().all(Expr::is_zero) {
        let k = gaussian_curvature(s)?;
        if !k.diff(x).is_zero() || !k.diff(y).is_zero() {
            return Err(Error::Inconsistent(
                "applicability residuals vanish but K is not constant".into(),
            ));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantsReport {
    /// Coefficient of `h` in the projective metric.
    pub phi: Expr,
    /// `(Φ_111, Φ_222)`; the mixed components vanish.
    pub cubic: [Expr; 2],
    pub fubini: Expr,
    /// `(ℓ11, ℓ12, ℓ22)`.
    pub ell: [Expr; 3],
    pub r: [Expr; 2],
    /// Absent when `bc = 0`.
    pub gaussian_curvature: Option<Expr>,
    pub integrability: [Expr; 3],
    /// Absent when `bc = 0`.
    pub applicability: Option<[Expr; 3]>,
    pub apolar: bool,
}

/// Reads the invariants off the rank-4 connection and checks them against
/// the closed forms `φ = 8bc·h`, `Φ = −2b dx³ − 2c dy³`.
pub fn invariants(s: &CanonicalSystem) -> Result<InvariantsReport> {
    let fd = frame_data(&rank4_connection(s)?)?;
    let inconsistent = |what: &str| Err(Error::Inconsistent(format!("{what} disagrees with the closed form")));
    let h0 = Matrix::from_rows(vec![vec![Expr::zero(), Expr::one()], vec![Expr::one(), Expr::zero()]]);
    if fd.h != h0 {
        return inconsistent("h");
    }
    let fubini = fd.fubini()?;
    let phi = Expr::int(8) * &s.b * &s.c;
    if fubini != phi {
        return inconsistent("the Fubini contraction");
    }
    let p = &fd.cubic;
    let cubic = [p[0][0][0].clone(), p[1][1][1].clone()];
    let mixed = [&p[0][0][1], &p[0][1][0], &p[1][0][0], &p[0][1][1], &p[1][0][1], &p[1][1][0]];
    if cubic != [Expr::int(-2) * &s.b, Expr::int(-2) * &s.c] || mixed.iter().any(|e| !e.is_zero()) {
        return inconsistent("the cubic form");
    }
    if fd.ell[(0, 1)] != fd.ell[(1, 0)] {
        return Err(Error::Inconsistent("ℓ is not symmetric".into()));
    }
    let apolar = fd.apolarity()?.iter().all(Expr::is_zero);
    let bc_zero = (&s.b * &s.c).is_zero();
    Ok(InvariantsReport {
        phi,
        cubic,
        fubini,
        ell: [fd.ell[(0, 0)].clone(), fd.ell[(0, 1)].clone(), fd.ell[(1, 1)].clone()],
        r: fd.r.clone(),
        gaussian_curvature: if bc_zero { None } else { Some(gaussian_curvature(s)?) },
        integrability: integrability_residuals(s),
        applicability: if bc_zero { None } else { Some(applicability_residuals(s)?) },
        apolar,
    })
}
