use super::{covariant_curvature_derivatives, curvature, horizontal_distribution, Connection, Curvature};
use crate::error::{Error, Result};
use crate::expr::{primitive_vector, Matrix, RatFn};
use crate::forms::{derived_flag, GrowthVector, VectorField};
use crate::scalar::{Field, Rational};

/// Growth vector of a horizontal 2-plane distribution on a rank-3 bundle,
/// decided from the curvature and its covariant derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthClass<F: Field = Rational> {
    /// `R = 0`.
    Integrable,
    /// `R ≠ 0`, `∇R = 0`.
    Step23,
    /// Rank 4 after two derivations. The witness `X` on the base has
    /// `∇_X R = 0`; it is absent when the fibers carry an invariant that the
    /// curvature test does not detect.
    Step234 { witness: Option<VectorField<F>> },
    Step235,
    /// The flag reaches rank 4 and then 5. The curvature test alone does
    /// not see this case; a witness is recorded when one exists.
    Step2345 { witness: Option<VectorField<F>> },
}

impl<F: Field> GrowthClass<F> {
    pub fn growth(&self) -> Vec<usize> {
        match self {
            GrowthClass::Integrable => vec![2],
            GrowthClass::Step23 => vec![2, 3],
            GrowthClass::Step234 { .. } => vec![2, 3, 4],
            GrowthClass::Step235 => vec![2, 3, 5],
            GrowthClass::Step2345 { .. } => vec![2, 3, 4, 5],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GrowthClass::Integrable => "integrable",
            GrowthClass::Step23 => "(2,3)",
            GrowthClass::Step234 { .. } => "(2,3,4)",
            GrowthClass::Step235 => "(2,3,5)",
            GrowthClass::Step2345 { .. } => "(2,3,4,5)",
        }
    }

    pub fn witness(&self) -> Option<&VectorField<F>> {
        match self {
            GrowthClass::Step234 { witness } | GrowthClass::Step2345 { witness } => {
                witness.as_ref()
            }
            _ => None,
        }
    }
}

/// The classification together with the derived flag it was checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthClassification<F: Field = Rational> {
    pub class: GrowthClass<F>,
    pub growth: GrowthVector<F>,
    pub curvature: Curvature<F>,
    /// `(∇_{∂x} R, ∇_{∂y} R)`; absent when `R = 0`.
    pub derivatives: Option<(Curvature<F>, Curvature<F>)>,
    /// Whether the curvature test alone predicted `class`.
    pub curvature_test_agrees: bool,
}

/// A primitive `(f1, f2) ≠ 0` with `f1·D1 + f2·D2 = 0`, if one exists over
/// the fraction field.
pub fn witness_kernel<F: Field>(d1: &Curvature<F>, d2: &Curvature<F>) -> Option<Vec<RatFn<F>>> {
    let a = d1.matrix().entries();
    let b = d2.matrix().entries();
    let m = Matrix::from_fn(a.len(), 2, |i, j| if j == 0 { a[i].clone() } else { b[i].clone() });
    let kernel = m.kernel();
    kernel.first().map(|v| primitive_vector(v))
}

/// Classifies by curvature first, then `∇R = 0`, then the witness kernel,
/// and cross-checks the answer against the derived flag of the horizontal
/// distribution.
pub fn classify_growth<F: Field>(c: &Connection<F>) -> Result<GrowthClassification<F>> {
    if c.rank() != 3 {
        return Err(Error::RankMismatch {
            expected: 3,
            found: c.rank(),
        });
    }
    let r = curvature(c);
    let mut derivatives = None;
    let class = if r.is_zero() {
        GrowthClass::Integrable
    } else {
        let (d1, d2) = covariant_curvature_derivatives(c)?;
        let class = if d1.is_zero() && d2.is_zero() {
            GrowthClass::Step23
        } else if let Some(f) = witness_kernel(&d1, &d2) {
            GrowthClass::Step234 {
                witness: Some(VectorField::new(c.base(), f)?),
            }
        } else {
            GrowthClass::Step235
        };
        derivatives = Some((d1, d2));
        class
    };
    let (_, growth) = derived_flag(&horizontal_distribution(c)?, 4)?;
    let predicted = class.growth();
    let curvature_test_agrees = growth.ranks == predicted;
    let class = match class {
        _ if curvature_test_agrees => class,
        GrowthClass::Step234 { witness } if growth.ranks == [2, 3, 4, 5] => {
            GrowthClass::Step2345 { witness }
        }
        GrowthClass::Step235 if growth.ranks == [2, 3, 4] => GrowthClass::Step234 { witness: None },
        GrowthClass::Step235 if growth.ranks == [2, 3, 4, 5] => GrowthClass::Step2345 { witness: None },
        _ => {
            return Err(Error::Inconsistent(format!(
                "curvature test gives {} but the derived flag gives {}",
                class.label(),
                growth.text()
            )))
        }
    };
    Ok(GrowthClassification {
        class,
        growth,
        curvature: r,
        derivatives,
        curvature_test_agrees,
    })
}
