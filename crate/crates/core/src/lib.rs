//! Exact symbolic differential geometry for projective surfaces.
//!
//! The crate computes derived flags and growth vectors of distributions,
//! curvature of linear connections and projective invariants of surfaces in
//! `P^3`, all over exact rational function fields.
//!
//! Every structure is generic over an exact coefficient [`Field`]; the
//! aliases below fix the field to the rationals, which is what the
//! geometric layers use.

pub mod connection;
pub mod error;
pub mod expr;
pub mod forms;
pub mod projective;
pub mod scalar;

pub use error::{Error, Result};
pub use expr::{differentiate, Deps, SymbolKind, SymbolTable, Var};
pub use scalar::{q, Field, PrimeField, Rational};

/// Rational function over the rationals.
pub type Expr = expr::RatFn<Rational>;
/// Polynomial over the rationals.
pub type Polynomial = expr::Poly<Rational>;
/// Matrix of rational functions over the rationals.
pub type ExprMatrix = expr::Matrix<Rational>;
