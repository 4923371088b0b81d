use super::{bar_connection, derived_reduction, integrability_residuals, CanonicalSystem};
use crate::connection::{
    classify_growth, covariant_curvature_derivatives, curvature, horizontal_distribution,
    witness_kernel, GrowthClass, GrowthClassification,
};
use crate::error::{Error, Result};
use crate::expr::{solve_rational_combination, Matrix, SymbolTable};
use crate::forms::VectorField;
use crate::Expr;

/// Rough stratification by the vanishing of `b` and `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stratum {
    /// `b = c = 0`.
    Quadric,
    /// Exactly one of `b`, `c` vanishes; `c_vanishes` says which.
    Ruled { c_vanishes: bool },
    /// `bc ≠ 0`.
    VeryGeneral,
}

impl Stratum {
    pub fn name(&self) -> &'static str {
        match self {
            Stratum::Quadric => "Quadric",
            Stratum::Ruled { .. } => "Ruled",
            Stratum::VeryGeneral => "VeryGeneral",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub stratum: Stratum,
    /// All three applicability residuals vanish (never for `bc = 0`).
    pub applicable: bool,
    /// Expected growth vector of the horizontal distribution on `B`.
    pub prediction: Vec<usize>,
    /// Set when the prediction is `(2,3,4)` because of a witness.
    pub witness: Option<VectorField>,
    /// Ruled with flat `ω̄`: the surface lies in two linear complexes.
    pub flat_ruled: bool,
}

impl Classification {
    pub fn label(&self) -> String {
        match self.stratum {
            Stratum::Ruled { c_vanishes } => {
                let side = if c_vanishes { "c=0" } else { "b=0" };
                if self.flat_ruled {
                    format!("Ruled({side}), intersection of two linear complexes")
                } else {
                    format!("Ruled({side})")
                }
            }
            s => s.name().to_string(),
        }
    }
}

/// Stratum from exact zero tests on `b`, `c`, and the growth vector the
/// dictionary predicts for it.
pub fn classify(s: &CanonicalSystem) -> Result<Classification> {
    let stratum = match (s.b.is_zero(), s.c.is_zero()) {
        (true, true) => Stratum::Quadric,
        (false, true) => Stratum::Ruled { c_vanishes: true },
        (true, false) => Stratum::Ruled { c_vanishes: false },
        (false, false) => Stratum::VeryGeneral,
    };
    let applicable = stratum == Stratum::VeryGeneral
        && super::applicability_residuals(s)?.iter().all(Expr::is_zero);
    let bar = bar_connection(s)?;
    let flat = curvature(&bar).is_zero();
    let mut witness = None;
    let prediction = match stratum {
        Stratum::Quadric => vec![2],
        _ if flat => vec![2],
        Stratum::Ruled { .. } => {
            let (d1, d2) = covariant_curvature_derivatives(&bar)?;
            if let Some(f) = witness_kernel(&d1, &d2) {
                witness = Some(VectorField::new(bar.base(), f)?);
            }
            vec![2, 3, 4]
        }
        Stratum::VeryGeneral => {
            let (d1, d2) = covariant_curvature_derivatives(&bar)?;
            match witness_kernel(&d1, &d2) {
                Some(f) => {
                    witness = Some(VectorField::new(bar.base(), f)?);
                    vec![2, 3, 4]
                }
                None => vec![2, 3, 5],
            }
        }
    };
    Ok(Classification {
        stratum,
        applicable,
        prediction,
        witness,
        flat_ruled: flat && matches!(stratum, Stratum::Ruled { .. }),
    })
}

/// Whether `D₁ = D₂ = 0` forces `R̄ = 0`: each entry of `R̄` is checked to
/// be a constant combination of the entries of `D₁` and `D₂`.
pub fn step23_excluded(s: &CanonicalSystem) -> Result<bool> {
    let bar = bar_connection(s)?;
    let (d1, d2) = covariant_curvature_derivatives(&bar)?;
    let ds: Vec<Expr> = d1
        .matrix()
        .entries()
        .iter()
        .chain(d2.matrix().entries())
        .filter(|e| !e.is_zero())
        .cloned()
        .collect();
    Ok(curvature(&bar)
        .matrix()
        .entries()
        .iter()
        .all(|e| e.is_zero() || solve_rational_combination(e, &ds).is_some()))
}

/// The three routes to the growth vector of `B`, cross-checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DictionaryReport {
    pub classification: Classification,
    pub growth: GrowthClassification,
    /// The computed vector agrees with the stratum's prediction.
    pub prediction_holds: bool,
    /// See [`step23_excluded`].
    pub step23_excluded: bool,
}

impl DictionaryReport {
    pub fn ranks(&self) -> &[usize] {
        &self.growth.growth.ranks
    }

    pub fn witness(&self) -> Option<&VectorField> {
        self.growth.class.witness().or(self.classification.witness.as_ref())
    }
}

/// Computes the derived flag of the horizontal distribution of `ω̄`, the
/// curvature classification of `ω̄`, and the stratum prediction, and
/// checks them against each other.
///
/// A mismatch with the stratum prediction is reported, not raised; the
/// other disagreements are errors.
pub fn growth_dictionary(s: &CanonicalSystem) -> Result<DictionaryReport> {
    let bar = bar_connection(s)?;
    if horizontal_distribution(&bar)? != derived_reduction(s, &Expr::zero())? {
        return Err(Error::Inconsistent(
            "horizontal distribution of the connection differs from the reduction".into(),
        ));
    }
    let growth = classify_growth(&bar)?;
    if growth.class == GrowthClass::Step23 {
        return Err(Error::Inconsistent("a projective surface produced growth (2,3)".into()));
    }
    let step23_excluded = step23_excluded(s)?;
    if !step23_excluded {
        return Err(Error::Inconsistent("∇R̄ = 0 does not force R̄ = 0".into()));
    }
    let classification = classify(s)?;
    if let (Some(a), Some(b)) = (growth.class.witness(), classification.witness.as_ref()) {
        if a != b {
            return Err(Error::Inconsistent("the two witness computations disagree".into()));
        }
    }
    let prediction_holds = growth.growth.ranks == classification.prediction;
    Ok(DictionaryReport {
        classification,
        growth,
        prediction_holds,
        step23_excluded,
    })
}

fn x_only(table: &SymbolTable, es: &[&Expr]) -> Result<()> {
    if es.iter().any(|e| !e.diff(table.y()).is_zero()) {
        return Err(Error::Precondition("ruled data must depend on x only".into()));
    }
    Ok(())
}

/// `b = αy² + βy + γ`, `μ = −αy + δ`, `c = ν = 0`.
pub fn ruled_canonical(
    table: &SymbolTable,
    alpha: &Expr,
    beta: &Expr,
    gamma: &Expr,
    delta: &Expr,
) -> Result<CanonicalSystem> {
    x_only(table, &[alpha, beta, gamma, delta])?;
    let y = Expr::var(table.y());
    let b = alpha * &y * &y + beta * &y + gamma.clone();
    let mu = delta - &(alpha * &y);
    let s = CanonicalSystem::new(table, b, Expr::zero(), mu, Expr::zero())?;
    if !integrability_residuals(&s).iter().all(Expr::is_zero) {
        return Err(Error::Inconsistent("ruled system is not integrable".into()));
    }
    Ok(s)
}

/// `Q` with `(u, v)'' = Q (u, v)` along a ruling: rows `(δ, γ)`, `(−α, β+δ)`.
pub fn ruled_ode_matrix(
    table: &SymbolTable,
    alpha: &Expr,
    beta: &Expr,
    gamma: &Expr,
    delta: &Expr,
) -> Result<Matrix> {
    x_only(table, &[alpha, beta, gamma, delta])?;
    Ok(Matrix::from_rows(vec![
        vec![delta.clone(), gamma.clone()],
        vec![-alpha, beta + delta],
    ]))
}
