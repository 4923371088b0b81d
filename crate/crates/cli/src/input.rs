//! Sectioned surface files.
//!
//! ```text
//! # comment
//! [surface]
//! mode = concrete            # or symbolic
//! functions = alpha(x), beta(x, y)
//! b = 4*k1*(k1*y + k2)/(4*x + k3)^2
//! c = ...
//! mu = 0
//! nu = 0
//! [params]
//! names = k1, k2, k3
//! [precanonical]
//! alpha = ...
//! delta = ...
//! theta = ...
//! [run]
//! commands = check, classify
//! s0 = 0
//! ```

use std::collections::BTreeMap;

use projflag::projective::{canonicalize, CanonicalSystem, PreCanonicalSystem};
use projflag::{Deps, Expr, SymbolTable};

use crate::CliError;

const SECTIONS: [&str; 4] = ["surface", "params", "precanonical", "run"];

pub const COMMANDS: [&str; 5] = ["check", "invariants", "classify", "growth", "curvature"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Concrete,
    Symbolic,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Concrete => "concrete",
            Mode::Symbolic => "symbolic",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceSpec {
    pub mode: Mode,
    pub parameters: Vec<String>,
    pub functions: Vec<String>,
    pub system: CanonicalSystem,
    /// Set when the file had a `[precanonical]` block.
    pub canonicalized: bool,
    /// `None` without a `[run]` section.
    pub commands: Option<Vec<String>>,
    pub s0: Option<String>,
}

type Sections = BTreeMap<String, BTreeMap<String, String>>;

fn split_sections(text: &str) -> Result<Sections, CliError> {
    let mut out: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| CliError::Input(format!("line {}: {msg}", n + 1));
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| bad("unterminated section header".into()))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(bad(format!("unknown section [{name}]")));
            }
            if out.contains_key(name) {
                return Err(bad(format!("section [{name}] appears twice")));
            }
            out.insert(name.to_string(), BTreeMap::new());
            current = Some(name.to_string());
            continue;
        }
        let section = current.as_ref().ok_or_else(|| bad("key outside of a section".into()))?;
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| bad("expected `key = value`".into()))?;
        let (k, v) = (k.trim(), v.trim());
        let keys = out.get_mut(section).expect("section was inserted");
        if keys.insert(k.to_string(), v.to_string()).is_some() {
            return Err(bad(format!("duplicate key `{k}`")));
        }
    }
    Ok(out)
}

fn list(v: &str) -> Vec<String> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

/// Splits `alpha(x), beta(x, y)` at top-level commas.
fn function_decls(v: &str) -> Result<Vec<(String, Deps)>, CliError> {
    let mut out = Vec::new();
    let mut rest = v.trim();
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| CliError::Input(format!("function declaration without arguments: `{rest}`")))?;
        let close = rest[open..]
            .find(')')
            .map(|i| i + open)
            .ok_or_else(|| CliError::Input("unbalanced parenthesis in functions".into()))?;
        let name = rest[..open].trim().to_string();
        let args = list(&rest[open + 1..close]);
        let deps = match args.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
            ["x"] => Deps::X,
            ["y"] => Deps::Y,
            ["x", "y"] | ["y", "x"] => Deps::XY,
            _ => return Err(CliError::Input(format!("`{name}` must depend on x, y or both"))),
        };
        out.push((name, deps));
        rest = rest[close + 1..].trim_start().trim_start_matches(',').trim_start();
    }
    Ok(out)
}

fn take<'a>(keys: &'a BTreeMap<String, String>, section: &str, allowed: &[&str]) -> Result<&'a BTreeMap<String, String>, CliError> {
    if let Some(k) = keys.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(CliError::Input(format!("unknown key `{k}` in [{section}]")));
    }
    Ok(keys)
}

pub fn parse_spec(text: &str) -> Result<SurfaceSpec, CliError> {
    let sections = split_sections(text)?;
    let empty = BTreeMap::new();
    let surface = sections
        .get("surface")
        .ok_or_else(|| CliError::Input("missing [surface] section".into()))?;
    let surface = take(surface, "surface", &["mode", "functions", "b", "c", "mu", "nu"])?;
    let params = take(sections.get("params").unwrap_or(&empty), "params", &["names"])?;
    let pre = sections
        .get("precanonical")
        .map(|p| take(p, "precanonical", &["alpha", "delta", "theta"]))
        .transpose()?;
    let run = sections
        .get("run")
        .map(|r| take(r, "run", &["commands", "s0"]))
        .transpose()?;

    let mode = match surface.get("mode").map(String::as_str) {
        None | Some("concrete") => Mode::Concrete,
        Some("symbolic") => Mode::Symbolic,
        Some(m) => return Err(CliError::Input(format!("unknown mode `{m}`"))),
    };

    let t = SymbolTable::new();
    let parameters = params.get("names").map(|v| list(v)).unwrap_or_default();
    for p in &parameters {
        t.parameter(p)?;
    }
    let mut functions = Vec::new();
    if let Some(v) = surface.get("functions") {
        for (name, deps) in function_decls(v)? {
            t.function(&name, deps)?;
            functions.push(name);
        }
    }

    let coeff = |k: &str| -> Result<Expr, CliError> {
        let src = surface
            .get(k)
            .ok_or_else(|| CliError::Input(format!("missing `{k}` in [surface]")))?;
        Ok(t.parse(src)?)
    };
    let (b, c, mu, nu) = match mode {
        Mode::Concrete => (coeff("b")?, coeff("c")?, coeff("mu")?, coeff("nu")?),
        Mode::Symbolic => {
            if let Some(k) = ["b", "c", "mu", "nu"].into_iter().find(|k| surface.contains_key(*k)) {
                return Err(CliError::Input(format!("`{k}` is implicit in symbolic mode")));
            }
            let s = CanonicalSystem::symbolic(&t)?;
            functions.extend(["b", "c", "mu", "nu"].map(String::from));
            (s.b, s.c, s.mu, s.nu)
        }
    };
    let (system, canonicalized) = match pre {
        None => (CanonicalSystem::new(&t, b, c, mu, nu)?, false),
        Some(p) => {
            let get = |k: &str| -> Result<Expr, CliError> {
                let src = p
                    .get(k)
                    .ok_or_else(|| CliError::Input(format!("missing `{k}` in [precanonical]")))?;
                Ok(t.parse(src)?)
            };
            let pc = PreCanonicalSystem::new(&t, get("alpha")?, get("delta")?, b, c, mu, nu, get("theta")?)?;
            (canonicalize(&pc)?, true)
        }
    };

    let commands = run.map(|r| r.get("commands").map(|v| list(v)).unwrap_or_default());
    if let Some(cmds) = &commands {
        if let Some(bad) = cmds.iter().find(|c| !COMMANDS.contains(&c.as_str())) {
            return Err(CliError::Input(format!("unknown command `{bad}` in [run]")));
        }
    }
    let s0 = run.and_then(|r| r.get("s0").cloned());
    Ok(SurfaceSpec {
        mode,
        parameters,
        functions,
        system,
        canonicalized,
        commands,
        s0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_comments() {
        let spec = parse_spec(
            "# family\n[params]\nnames = k1, k2\n[surface]\nb = k1*x # inline\nc = 1\nmu = 0\nnu = k2\n",
        )
        .unwrap();
        assert_eq!(spec.parameters, ["k1", "k2"]);
        assert_eq!(spec.system.table().print(&spec.system.b), "x*k1");
        assert!(spec.commands.is_none());
    }

    #[test]
    fn function_declarations() {
        let d = function_decls("alpha(x), beta(x, y),gamma(y)").unwrap();
        let names: Vec<&str> = d.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["alpha", "beta", "gamma"]);
        assert_eq!(d[1].1, Deps::XY);
        assert!(function_decls("alpha(z)").is_err());
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        assert!(matches!(parse_spec("[surface]\nbb = 1\n"), Err(CliError::Input(_))));
        assert!(matches!(parse_spec("[other]\n"), Err(CliError::Input(_))));
        assert!(matches!(parse_spec("[surface]\nmode = symbolic\nb = 1\n"), Err(CliError::Input(_))));
    }

    #[test]
    fn empty_run_section_means_no_commands() {
        let spec = parse_spec("[surface]\nb = 1\nc = 1\nmu = 0\nnu = 0\n[run]\n").unwrap();
        assert_eq!(spec.commands, Some(vec![]));
    }
}
