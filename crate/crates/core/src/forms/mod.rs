//! Vector fields, differential forms and distributions on coordinate charts.

mod distribution;
mod field;
mod form;

use std::sync::Arc;

pub use distribution::{
    annihilator, cauchy_characteristics, derived_codistribution, derived_flag, generic_rank,
    same_coframe_span, same_span, Distribution, GrowthVector,
};
pub use field::VectorField;
pub use form::Form;

use crate::error::{Error, Result};
use crate::expr::{Lookup, SymbolKind, SymbolTable, Var};

#[derive(Debug)]
struct ChartInner {
    table: SymbolTable,
    coords: Vec<Var>,
}

/// An ordered list of coordinates sharing one symbol table.
///
/// Cloning is cheap; two charts are equal when they use the same table and
/// the same coordinates in the same order.
#[derive(Clone, Debug)]
pub struct Chart(Arc<ChartInner>);

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.table == other.0.table && self.0.coords == other.0.coords)
    }
}

impl Eq for Chart {}

impl Chart {
    /// A chart from coordinate names. `x` and `y` are the base coordinates;
    /// any other name is declared as a fiber coordinate if it is new.
    pub fn new(table: &SymbolTable, names: &[&str]) -> Result<Chart> {
        let mut coords = Vec::with_capacity(names.len());
        for name in names {
            let v = match table.lookup(name) {
                Some(Lookup::Var(v)) if v.is_coordinate() => v,
                Some(_) => return Err(Error::NotACoordinate((*name).into())),
                None => table.fiber(name)?,
            };
            coords.push(v);
        }
        Self::from_vars(table, coords)
    }

    pub fn from_vars(table: &SymbolTable, coords: Vec<Var>) -> Result<Chart> {
        for (i, v) in coords.iter().enumerate() {
            if !v.is_coordinate() {
                return Err(Error::NotACoordinate(table.name(*v)));
            }
            if coords[..i].contains(v) {
                return Err(Error::Precondition(format!(
                    "coordinate `{}` listed twice",
                    table.name(*v)
                )));
            }
        }
        Ok(Chart(Arc::new(ChartInner {
            table: table.clone(),
            coords,
        })))
    }

    /// This chart followed by further coordinates.
    pub fn extend(&self, names: &[&str]) -> Result<Chart> {
        let mut all: Vec<String> = self.names();
        all.extend(names.iter().map(|s| s.to_string()));
        let refs: Vec<&str> = all.iter().map(String::as_str).collect();
        Chart::new(self.table(), &refs)
    }

    /// This chart without the coordinate `name`.
    pub fn without(&self, name: &str) -> Result<Chart> {
        let v = self.table().var(name)?;
        let coords = self.coords().iter().copied().filter(|&c| c != v).collect();
        Chart::from_vars(self.table(), coords)
    }

    pub fn table(&self) -> &SymbolTable {
        &self.0.table
    }

    pub fn coords(&self) -> &[Var] {
        &self.0.coords
    }

    pub fn dim(&self) -> usize {
        self.0.coords.len()
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.0.coords.iter().position(|&c| c == v)
    }

    /// Position of the coordinate called `name`.
    pub fn index(&self, name: &str) -> Result<usize> {
        let v = self.table().var(name)?;
        self.index_of(v)
            .ok_or_else(|| Error::NotACoordinate(name.into()))
    }

    pub fn names(&self) -> Vec<String> {
        self.0.coords.iter().map(|&v| self.table().name(v)).collect()
    }

    /// Number of base coordinates on the chart.
    pub fn base_dim(&self) -> usize {
        self.0
            .coords
            .iter()
            .filter(|v| v.kind() == SymbolKind::Base)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_declare_fibers_and_reject_duplicates() {
        let t = SymbolTable::new();
        let c = Chart::new(&t, &["x", "y", "z"]).unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.base_dim(), 2);
        assert_eq!(c, Chart::new(&t, &["x", "y", "z"]).unwrap());
        assert!(Chart::new(&t, &["x", "x"]).is_err());
        t.parameter("k").unwrap();
        assert_eq!(Chart::new(&t, &["k"]), Err(Error::NotACoordinate("k".into())));
        assert_eq!(c.extend(&["p"]).unwrap().names(), ["x", "y", "z", "p"]);
        assert_eq!(c.without("z").unwrap().names(), ["x", "y"]);
    }
}
