use super::classify::{ruled_canonical, Stratum};
use super::CanonicalSystem;
use crate::error::Result;
use crate::expr::{Deps, SymbolTable};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    /// Stated in the literature for this family.
    Published,
    /// Worked out by hand for this library.
    HandDerived,
}

impl Origin {
    pub fn name(&self) -> &'static str {
        match self {
            Origin::Published => "published",
            Origin::HandDerived => "hand-derived",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub system: CanonicalSystem,
    pub stratum: Stratum,
    pub growth: Vec<usize>,
    pub origin: Origin,
}

pub const CATALOG_NAMES: [&str; 5] = ["quadric", "ruled", "flat-ruled", "example-234", "unit-bc"];

/// One bundled example on a fresh symbol table.
pub fn catalog_entry(name: &str) -> Result<Option<CatalogEntry>> {
    let t = SymbolTable::new();
    let entry = match name {
        "quadric" => CatalogEntry {
            name: "quadric",
            system: CanonicalSystem::parse(&t, "0", "0", "0", "0")?,
            stratum: Stratum::Quadric,
            growth: vec![2],
            origin: Origin::Published,
        },
        "ruled" => {
            for f in ["alpha", "beta", "gamma", "delta"] {
                t.function(f, Deps::X)?;
            }
            let e = |s: &str| t.parse(s);
            CatalogEntry {
                name: "ruled",
                system: ruled_canonical(&t, &e("alpha")?, &e("beta")?, &e("gamma")?, &e("delta")?)?,
                stratum: Stratum::Ruled { c_vanishes: true },
                growth: vec![2, 3, 4],
                origin: Origin::Published,
            }
        }
        "flat-ruled" => {
            for f in ["beta", "gamma"] {
                t.function(f, Deps::X)?;
            }
            CatalogEntry {
                name: "flat-ruled",
                system: CanonicalSystem::parse(&t, "beta*y + gamma", "0", "-beta", "0")?,
                stratum: Stratum::Ruled { c_vanishes: true },
                growth: vec![2],
                origin: Origin::Published,
            }
        }
        "example-234" => {
            for k in ["k1", "k2", "k3"] {
                t.parameter(k)?;
            }
            CatalogEntry {
                name: "example-234",
                system: CanonicalSystem::parse(
                    &t,
                    "4*k1*(k1*y + k2)/(4*x + k3)^2",
                    "(4*x + k3)/(k1*y + k2)^2",
                    "0",
                    "0",
                )?,
                stratum: Stratum::VeryGeneral,
                growth: vec![2, 3, 4],
                origin: Origin::Published,
            }
        }
        "unit-bc" => CatalogEntry {
            name: "unit-bc",
            system: CanonicalSystem::parse(&t, "1", "1", "0", "0")?,
            stratum: Stratum::VeryGeneral,
            growth: vec![2, 3, 5],
            origin: Origin::HandDerived,
        },
        _ => return Ok(None),
    };
    Ok(Some(entry))
}

/// All bundled examples, in a fixed order.
pub fn catalog() -> Result<Vec<CatalogEntry>> {
    CATALOG_NAMES
        .iter()
        .map(|n| catalog_entry(n).map(|e| e.expect("known name")))
        .collect()
}
