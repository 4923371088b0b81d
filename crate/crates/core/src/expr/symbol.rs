//! Symbols and the append-only symbol table.
//!
//! A [`Var`] packs everything the kernel needs into one `u64`, so jet
//! promotion, dependency checks and the monomial order are pure arithmetic:
//!
//! ```text
//!  63..60 category   base = 0, fiber = 1, parameter = 2, jet = 3
//!  59..44 index      declaration index within the category
//!  43..30 order      j + k   (jets only)
//!  29..16 j          number of x-derivatives (jets only)
//!   1..0  deps       bit 0: depends on x, bit 1: depends on y (jets only)
//! ```
//!
//! Smaller values are more significant in the monomial order, which gives the
//! precedence coordinates < parameters < jets.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};

const CAT_SHIFT: u32 = 60;
const IDX_SHIFT: u32 = 44;
const ORD_SHIFT: u32 = 30;
const J_SHIFT: u32 = 16;
const IDX_MASK: u64 = 0xFFFF;
const ORD_MASK: u64 = 0x3FFF;

/// The kind of a symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    Base,
    Fiber,
    Parameter,
    Jet,
}

/// Which base coordinates a function depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Deps {
    pub x: bool,
    pub y: bool,
}

impl Deps {
    pub const X: Deps = Deps { x: true, y: false };
    pub const Y: Deps = Deps { x: false, y: true };
    pub const XY: Deps = Deps { x: true, y: true };

    fn bits(self) -> u64 {
        self.x as u64 | (self.y as u64) << 1
    }
}

/// A packed symbol identifier.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u64);

impl Var {
    pub const X: Var = Var(0);
    pub const Y: Var = Var(1 << IDX_SHIFT);

    fn pack(kind: SymbolKind, idx: usize) -> Var {
        assert!((idx as u64) <= IDX_MASK, "symbol table overflow");
        Var((kind as u64) << CAT_SHIFT | (idx as u64) << IDX_SHIFT)
    }

    pub fn base(idx: usize) -> Var {
        Var::pack(SymbolKind::Base, idx)
    }

    pub fn fiber(idx: usize) -> Var {
        Var::pack(SymbolKind::Fiber, idx)
    }

    pub fn parameter(idx: usize) -> Var {
        Var::pack(SymbolKind::Parameter, idx)
    }

    pub fn jet(func: usize, j: u32, k: u32, deps: Deps) -> Var {
        let order = (j + k) as u64;
        assert!(order <= ORD_MASK, "jet order overflow");
        let v = Var::pack(SymbolKind::Jet, func).0;
        Var(v | order << ORD_SHIFT | (j as u64) << J_SHIFT | deps.bits())
    }

    pub fn kind(self) -> SymbolKind {
        match self.0 >> CAT_SHIFT {
            0 => SymbolKind::Base,
            1 => SymbolKind::Fiber,
            2 => SymbolKind::Parameter,
            _ => SymbolKind::Jet,
        }
    }

    pub fn index(self) -> usize {
        ((self.0 >> IDX_SHIFT) & IDX_MASK) as usize
    }

    pub fn is_coordinate(self) -> bool {
        matches!(self.kind(), SymbolKind::Base | SymbolKind::Fiber)
    }

    /// `(j, k)` for a jet atom.
    pub fn jet_index(self) -> Option<(u32, u32)> {
        (self.kind() == SymbolKind::Jet).then(|| {
            let order = ((self.0 >> ORD_SHIFT) & ORD_MASK) as u32;
            let j = ((self.0 >> J_SHIFT) & ORD_MASK) as u32;
            (j, order - j)
        })
    }

    pub fn deps(self) -> Deps {
        Deps {
            x: self.0 & 1 == 1,
            y: self.0 & 2 == 2,
        }
    }

    /// Whether the symbol can have a nonzero derivative along base coordinate
    /// `dir` (0 for x, 1 for y) without being that coordinate.
    pub fn depends_on(self, dir: usize) -> bool {
        self.kind() == SymbolKind::Jet
            && match dir {
                0 => self.deps().x,
                _ => self.deps().y,
            }
    }

    /// The jet obtained by one more derivative along base direction `dir`, or
    /// `None` when that derivative vanishes.
    pub fn promote(self, dir: usize) -> Option<Var> {
        let (j, k) = self.jet_index()?;
        if !self.depends_on(dir) {
            return None;
        }
        let (j, k) = if dir == 0 { (j + 1, k) } else { (j, k + 1) };
        Some(Var::jet(self.index(), j, k, self.deps()))
    }

    /// The underlying function atom `(0,0)` of a jet.
    pub fn jet_root(self) -> Option<Var> {
        self.jet_index().map(|_| Var::jet(self.index(), 0, 0, self.deps()))
    }

    /// Base direction of a base coordinate.
    pub fn base_dir(self) -> Option<usize> {
        (self.kind() == SymbolKind::Base).then(|| self.index())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            SymbolKind::Base => write!(f, "base{}", self.index()),
            SymbolKind::Fiber => write!(f, "fiber{}", self.index()),
            SymbolKind::Parameter => write!(f, "param{}", self.index()),
            SymbolKind::Jet => {
                let (j, k) = self.jet_index().unwrap();
                write!(f, "jet{}[{},{}]", self.index(), j, k)
            }
        }
    }
}

/// Result of a name lookup. Jets of a function along a direction it does not
/// depend on resolve to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Var(Var),
    Zero,
}

#[derive(Debug, Default)]
struct Inner {
    fibers: Vec<String>,
    params: Vec<String>,
    functions: Vec<(String, Deps)>,
    names: HashMap<String, Var>,
}

/// Shared, append-only symbol table. Cloning yields another handle to the same
/// table. The base coordinates `x` and `y` are always present.
#[derive(Clone, Debug)]
pub struct SymbolTable(Arc<RwLock<Inner>>);

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl PartialEq for SymbolTable {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for SymbolTable {}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn split_jet(name: &str) -> impl Iterator<Item = (&str, u32, u32)> {
    name.char_indices().rev().filter_map(move |(i, ch)| {
        if ch != '_' || i == 0 {
            return None;
        }
        let suffix = &name[i + 1..];
        if suffix.is_empty() || !suffix.chars().all(|c| c == 'x' || c == 'y') {
            return None;
        }
        let j = suffix.chars().filter(|&c| c == 'x').count() as u32;
        Some((&name[..i], j, suffix.len() as u32 - j))
    })
}

impl SymbolTable {
    pub fn new() -> Self {
        let mut inner = Inner::default();
        inner.names.insert("x".into(), Var::X);
        inner.names.insert("y".into(), Var::Y);
        SymbolTable(Arc::new(RwLock::new(inner)))
    }

    pub fn x(&self) -> Var {
        Var::X
    }

    pub fn y(&self) -> Var {
        Var::Y
    }

    fn check_new_name(inner: &Inner, name: &str, kind: SymbolKind) -> Result<Option<Var>> {
        if !is_identifier(name) {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("`{name}` is not an identifier"),
            });
        }
        if let Some(&v) = inner.names.get(name) {
            return if v.kind() == kind && kind != SymbolKind::Jet {
                Ok(Some(v))
            } else {
                Err(Error::NameConflict(name.into()))
            };
        }
        if Self::resolve_jet(inner, name).is_some() {
            return Err(Error::NameConflict(name.into()));
        }
        Ok(None)
    }

    /// Declares (or returns the existing) fiber coordinate `name`.
    pub fn fiber(&self, name: &str) -> Result<Var> {
        let mut inner = self.0.write().expect("symbol table poisoned");
        if let Some(v) = Self::check_new_name(&inner, name, SymbolKind::Fiber)? {
            return Ok(v);
        }
        let v = Var::fiber(inner.fibers.len());
        inner.fibers.push(name.into());
        inner.names.insert(name.into(), v);
        Ok(v)
    }

    /// Declares (or returns the existing) parameter `name`.
    pub fn parameter(&self, name: &str) -> Result<Var> {
        let mut inner = self.0.write().expect("symbol table poisoned");
        if let Some(v) = Self::check_new_name(&inner, name, SymbolKind::Parameter)? {
            return Ok(v);
        }
        let v = Var::parameter(inner.params.len());
        inner.params.push(name.into());
        inner.names.insert(name.into(), v);
        Ok(v)
    }

    /// Declares an unspecified function of the base coordinates and returns
    /// its zeroth jet. Redeclaring with the same dependencies is a no-op.
    pub fn function(&self, name: &str, deps: Deps) -> Result<Var> {
        if !deps.x && !deps.y {
            return Err(Error::Precondition(format!(
                "function `{name}` must depend on x or y; declare a parameter instead"
            )));
        }
        let mut inner = self.0.write().expect("symbol table poisoned");
        if let Some(&v) = inner.names.get(name) {
            return if v.kind() == SymbolKind::Jet && v.deps() == deps {
                Ok(v)
            } else {
                Err(Error::NameConflict(name.into()))
            };
        }
        Self::check_new_name(&inner, name, SymbolKind::Jet)?;
        let prefix = format!("{name}_");
        let clash = inner.names.keys().any(|n| {
            n.strip_prefix(&prefix)
                .is_some_and(|s| !s.is_empty() && s.chars().all(|c| c == 'x' || c == 'y'))
        });
        if clash {
            return Err(Error::NameConflict(name.into()));
        }
        let v = Var::jet(inner.functions.len(), 0, 0, deps);
        inner.functions.push((name.into(), deps));
        inner.names.insert(name.into(), v);
        Ok(v)
    }

    fn resolve_jet(inner: &Inner, name: &str) -> Option<Lookup> {
        for (root, j, k) in split_jet(name) {
            if let Some(&v) = inner.names.get(root) {
                if v.kind() != SymbolKind::Jet {
                    continue;
                }
                let deps = v.deps();
                if (j > 0 && !deps.x) || (k > 0 && !deps.y) {
                    return Some(Lookup::Zero);
                }
                return Some(Lookup::Var(Var::jet(v.index(), j, k, deps)));
            }
        }
        None
    }

    /// Resolves a name, including derived jet names such as `b_xy`.
    pub fn lookup(&self, name: &str) -> Option<Lookup> {
        let inner = self.0.read().expect("symbol table poisoned");
        if let Some(&v) = inner.names.get(name) {
            return Some(Lookup::Var(v));
        }
        Self::resolve_jet(&inner, name)
    }

    /// Resolves a name that must denote a symbol (not a vanishing jet).
    pub fn var(&self, name: &str) -> Result<Var> {
        match self.lookup(name) {
            Some(Lookup::Var(v)) => Ok(v),
            _ => Err(Error::UndeclaredIdentifier(name.into())),
        }
    }

    pub fn name(&self, v: Var) -> String {
        let inner = self.0.read().expect("symbol table poisoned");
        let idx = v.index();
        let missing = || format!("{v:?}");
        match v.kind() {
            SymbolKind::Base => match idx {
                0 => "x".into(),
                1 => "y".into(),
                _ => missing(),
            },
            SymbolKind::Fiber => inner.fibers.get(idx).cloned().unwrap_or_else(missing),
            SymbolKind::Parameter => inner.params.get(idx).cloned().unwrap_or_else(missing),
            SymbolKind::Jet => {
                let Some((root, _)) = inner.functions.get(idx) else {
                    return missing();
                };
                let (j, k) = v.jet_index().unwrap();
                if j + k == 0 {
                    root.clone()
                } else {
                    format!("{root}_{}{}", "x".repeat(j as usize), "y".repeat(k as usize))
                }
            }
        }
    }

    pub fn parameters(&self) -> Vec<Var> {
        let inner = self.0.read().expect("symbol table poisoned");
        (0..inner.params.len()).map(Var::parameter).collect()
    }

    pub fn functions(&self) -> Vec<Var> {
        let inner = self.0.read().expect("symbol table poisoned");
        inner
            .functions
            .iter()
            .enumerate()
            .map(|(i, (_, d))| Var::jet(i, 0, 0, *d))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_coordinates_parameters_jets() {
        let t = SymbolTable::new();
        let z = t.fiber("z").unwrap();
        let k = t.parameter("k1").unwrap();
        let b = t.function("b", Deps::XY).unwrap();
        assert!(Var::X < Var::Y && Var::Y < z && z < k && k < b);
    }

    #[test]
    fn jets_promote_and_print() {
        let t = SymbolTable::new();
        let b = t.function("b", Deps::XY).unwrap();
        let bx = b.promote(0).unwrap();
        let bxy = bx.promote(1).unwrap();
        assert_eq!(t.name(bxy), "b_xy");
        assert_eq!(t.lookup("b_yx"), Some(Lookup::Var(bxy)));
        assert!(b < bx && bx < bxy);
        let a = t.function("alpha", Deps::X).unwrap();
        assert_eq!(a.promote(1), None);
        assert_eq!(t.lookup("alpha_y"), Some(Lookup::Zero));
    }

    #[test]
    fn jet_order_is_by_total_order_then_j() {
        let t = SymbolTable::new();
        t.function("b", Deps::XY).unwrap();
        let by = t.var("b_y").unwrap();
        let bx = t.var("b_x").unwrap();
        let bxx = t.var("b_xx").unwrap();
        assert!(by < bx && bx < bxx);
    }

    #[test]
    fn conflicting_names_are_rejected() {
        let t = SymbolTable::new();
        t.function("b", Deps::XY).unwrap();
        assert_eq!(t.parameter("b_x"), Err(Error::NameConflict("b_x".into())));
        assert_eq!(t.fiber("b"), Err(Error::NameConflict("b".into())));
        assert_eq!(t.parameter("x"), Err(Error::NameConflict("x".into())));
        t.parameter("c_y").unwrap();
        assert!(t.function("c", Deps::XY).is_err());
        assert_eq!(t.fiber("z").unwrap(), t.fiber("z").unwrap());
    }
}
