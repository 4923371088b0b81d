//! Report sections and their text rendering.
//!
//! Field order in these structs is the key order of the JSON output.

use std::fmt::Write as _;

use serde::Serialize;

use projflag::connection::curvature;
use projflag::expr::Matrix;
use projflag::forms::{derived_flag, Distribution, VectorField};
use projflag::projective::{
    bar_connection, derived_reduction, growth_dictionary, hat_distribution, integrability_residuals,
    invariants, m6_distribution, rank4_connection, CanonicalSystem,
};
use projflag::{Error, Expr, Result};

use crate::input::SurfaceSpec;

/// Enough derivations for every flag on a 6-dimensional chart.
const FLAG_STEPS: usize = 6;

pub const NOTE_WITNESS: &str =
    "witness fields are scaled so that the first nonzero coefficient has a monic numerator";
pub const NOTE_CURVATURE: &str =
    "curvature entries are dx^dy coefficients; row i, column j is the entry acting on fiber j in equation i";
pub const NOTE_CERTIFICATE: &str =
    "ranks hold wherever every certificate polynomial is nonzero";

#[derive(Serialize, Debug, Default)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub mode: &'static str,
    pub params: Vec<String>,
    pub functions: Vec<String>,
    pub coefficients: Coefficients,
    pub canonicalized: bool,
    pub commands: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckReport>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub classify: Option<ClassifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantsOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureSection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<&'static str>,
}

#[derive(Serialize, Debug, Default)]
pub struct Coefficients {
    pub b: String,
    pub c: String,
    pub mu: String,
    pub nu: String,
}

#[derive(Serialize, Debug)]
pub struct CheckReport {
    pub residuals: Vec<String>,
    pub zero: Vec<bool>,
    pub status: &'static str,
}

#[derive(Serialize, Debug)]
pub struct ClassifyReport {
    pub classification: &'static str,
    pub bar_growth: Vec<usize>,
    pub label: String,
    pub prediction: Vec<usize>,
    pub prediction_holds: bool,
    pub curvature_class: &'static str,
    pub curvature_test_agrees: bool,
    pub applicable: bool,
    pub flat_ruled: bool,
    pub witness: Option<String>,
    pub step23_excluded: bool,
    pub bar_certificate: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct InvariantsOut {
    pub phi: String,
    pub cubic: Vec<String>,
    pub fubini: String,
    pub ell: Vec<String>,
    pub r: Vec<String>,
    pub gaussian_curvature: Option<String>,
    pub integrability: Vec<String>,
    pub applicability: Option<Vec<String>>,
    pub apolar: bool,
}

#[derive(Serialize, Debug, Default)]
pub struct GrowthSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m5: Option<GrowthOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m6: Option<GrowthOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m6hat: Option<GrowthOut>,
}

#[derive(Serialize, Debug)]
pub struct GrowthOut {
    pub chart: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<String>,
    pub growth: String,
    pub ranks: Vec<usize>,
    pub certificate: Vec<String>,
    pub flag: Vec<Vec<String>>,
}

#[derive(Serialize, Debug, Default)]
pub struct CurvatureSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b3: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e4: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Space {
    M5,
    M6,
    M6hat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Bundle {
    B3,
    E4,
}

impl Report {
    /// Metadata only.
    pub fn new(spec: &SurfaceSpec, commands: Vec<String>) -> Self {
        let s = &spec.system;
        let p = |e: &Expr| s.table().print(e);
        Report {
            tool: env!("CARGO_BIN_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            mode: spec.mode.name(),
            params: spec.parameters.clone(),
            functions: spec.functions.clone(),
            coefficients: Coefficients { b: p(&s.b), c: p(&s.c), mu: p(&s.mu), nu: p(&s.nu) },
            canonicalized: spec.canonicalized,
            commands,
            ..Default::default()
        }
    }

    fn note(&mut self, n: &'static str) {
        if !self.notes.contains(&n) {
            self.notes.push(n);
        }
    }

    /// Whether every assertion carried by the computed sections holds.
    pub fn assertions_hold(&self) -> bool {
        self.check.as_ref().is_none_or(|c| c.status == "PASS")
            && self.classify.as_ref().is_none_or(|c| c.prediction_holds)
            && self.invariants.as_ref().is_none_or(|i| i.apolar)
    }

    pub fn run_check(&mut self, s: &CanonicalSystem) {
        let res = integrability_residuals(s);
        let zero: Vec<bool> = res.iter().map(Expr::is_zero).collect();
        self.check = Some(CheckReport {
            residuals: res.iter().map(|e| s.table().print(e)).collect(),
            status: if zero.iter().all(|&z| z) { "PASS" } else { "FAIL" },
            zero,
        });
    }

    pub fn run_classify(&mut self, s: &CanonicalSystem) -> Result<()> {
        let d = growth_dictionary(s)?;
        let c = &d.classification;
        if d.witness().is_some() {
            self.note(NOTE_WITNESS);
        }
        self.classify = Some(ClassifyReport {
            classification: c.stratum.name(),
            bar_growth: d.ranks().to_vec(),
            label: c.label(),
            prediction: c.prediction.clone(),
            prediction_holds: d.prediction_holds,
            curvature_class: d.growth.class.label(),
            curvature_test_agrees: d.growth.curvature_test_agrees,
            applicable: c.applicable,
            flat_ruled: c.flat_ruled,
            witness: d.witness().map(monic).transpose()?.map(|w| w.print()),
            step23_excluded: d.step23_excluded,
            bar_certificate: d.growth.growth.certificate.iter().map(|p| s.table().print_poly(p)).collect(),
        });
        self.note(NOTE_CERTIFICATE);
        Ok(())
    }

    /// With `gaussian_curvature` set, `bc = 0` is an error instead of a
    /// null entry.
    pub fn run_invariants(&mut self, s: &CanonicalSystem, gaussian_curvature: bool) -> Result<()> {
        let inv = invariants(s)?;
        if gaussian_curvature && inv.gaussian_curvature.is_none() {
            return Err(Error::Precondition("Gaussian curvature needs bc != 0".into()));
        }
        let p = |e: &Expr| s.table().print(e);
        let ps = |es: &[Expr]| es.iter().map(p).collect::<Vec<_>>();
        self.invariants = Some(InvariantsOut {
            phi: p(&inv.phi),
            cubic: ps(&inv.cubic),
            fubini: p(&inv.fubini),
            ell: ps(&inv.ell),
            r: ps(&inv.r),
            gaussian_curvature: inv.gaussian_curvature.as_ref().map(p),
            integrability: ps(&inv.integrability),
            applicability: inv.applicability.as_ref().map(|a| ps(a)),
            apolar: inv.apolar,
        });
        Ok(())
    }

    pub fn run_growth(&mut self, s: &CanonicalSystem, space: Space, s0: &Expr) -> Result<()> {
        let t = s.table();
        let (d, s0_text) = match space {
            Space::M5 => (derived_reduction(s, s0)?, Some(t.print(s0))),
            Space::M6 => (m6_distribution(s)?, None),
            Space::M6hat => (hat_distribution(s, s0)?, Some(t.print(s0))),
        };
        let out = growth_out(&d, s0_text)?;
        let section = self.growth.get_or_insert_with(Default::default);
        match space {
            Space::M5 => section.m5 = Some(out),
            Space::M6 => section.m6 = Some(out),
            Space::M6hat => section.m6hat = Some(out),
        }
        self.note(NOTE_CERTIFICATE);
        Ok(())
    }

    pub fn run_curvature(&mut self, s: &CanonicalSystem, bundle: Bundle) -> Result<()> {
        let m = match bundle {
            Bundle::B3 => curvature(&bar_connection(s)?).components(),
            Bundle::E4 => curvature(&rank4_connection(s)?).components(),
        };
        let rows = print_matrix(s, &m);
        let section = self.curvature.get_or_insert_with(Default::default);
        match bundle {
            Bundle::B3 => section.b3 = Some(rows),
            Bundle::E4 => section.e4 = Some(rows),
        }
        self.note(NOTE_CURVATURE);
        Ok(())
    }

    /// Runs one `[run]` command; `growth` and `curvature` cover every space
    /// and bundle.
    pub fn run_command(&mut self, s: &CanonicalSystem, cmd: &str, s0: &Expr) -> Result<()> {
        match cmd {
            "check" => self.run_check(s),
            "invariants" => self.run_invariants(s, false)?,
            "classify" => self.run_classify(s)?,
            "growth" => {
                for space in [Space::M5, Space::M6, Space::M6hat] {
                    self.run_growth(s, space, s0)?;
                }
            }
            "curvature" => {
                self.run_curvature(s, Bundle::B3)?;
                self.run_curvature(s, Bundle::E4)?;
            }
            other => return Err(Error::Precondition(format!("unknown command `{other}`"))),
        }
        Ok(())
    }
}

fn growth_out(d: &Distribution, s0: Option<String>) -> Result<GrowthOut> {
    let t = d.chart().table();
    let (flag, g) = derived_flag(d, FLAG_STEPS)?;
    Ok(GrowthOut {
        chart: d.chart().coords().iter().map(|&v| t.name(v)).collect(),
        s0,
        growth: g.text(),
        ranks: g.ranks.clone(),
        certificate: g.certificate.iter().map(|p| t.print_poly(p)).collect(),
        flag: flag.iter().map(|l| l.fields().iter().map(VectorField::print).collect()).collect(),
    })
}

fn print_matrix(s: &CanonicalSystem, m: &Matrix<projflag::Rational>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(|e| s.table().print(e)).collect()).collect()
}

/// Scales `v` so the first nonzero coefficient has a monic numerator.
pub fn monic(v: &VectorField) -> Result<VectorField> {
    let Some(a) = v.coeffs().iter().find(|a| !a.is_zero()) else {
        return Ok(v.clone());
    };
    let unit = Expr::constant(a.num().leading_coeff()) / Expr::constant(a.den().leading_coeff());
    Ok(v.scale(&unit.inv()?))
}

pub fn m6_ranks(s: &CanonicalSystem) -> Result<Vec<usize>> {
    Ok(derived_flag(&m6_distribution(s)?, FLAG_STEPS)?.1.ranks)
}

fn list(out: &mut String, key: &str, v: &[String]) {
    let _ = writeln!(out, "{key}: [{}]", v.join(", "));
}

fn ranks(r: &[usize]) -> String {
    let parts: Vec<String> = r.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

/// Human-readable rendering of whatever sections are present.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "surface ({}): b = {}, c = {}, mu = {}, nu = {}", r.mode, r.coefficients.b, r.coefficients.c, r.coefficients.mu, r.coefficients.nu);
    if !r.params.is_empty() {
        let _ = writeln!(w, "parameters: {}", r.params.join(", "));
    }
    if r.canonicalized {
        let _ = writeln!(w, "(brought to canonical form from the [precanonical] block)");
    }
    if let Some(c) = &r.check {
        for (i, res) in c.residuals.iter().enumerate() {
            let _ = writeln!(w, "residual {}: {res}", i + 1);
        }
        let _ = writeln!(w, "status: {}", c.status);
    }
    if let Some(c) = &r.classify {
        let _ = writeln!(w, "classification: {}", c.label);
        let _ = writeln!(w, "bar growth: {}", ranks(&c.bar_growth));
        let _ = writeln!(w, "prediction: {} ({})", ranks(&c.prediction), if c.prediction_holds { "holds" } else { "FAILS" });
        let _ = writeln!(w, "curvature test: {} ({})", c.curvature_class, if c.curvature_test_agrees { "agrees" } else { "differs" });
        let _ = writeln!(w, "applicable: {}", c.applicable);
        if let Some(x) = &c.witness {
            let _ = writeln!(w, "witness: {x}");
        }
        let _ = writeln!(w, "step (2,3) excluded: {}", c.step23_excluded);
        list(w, "certificate", &c.bar_certificate);
    }
    if let Some(i) = &r.invariants {
        let _ = writeln!(w, "phi = {}*h", i.phi);
        list(w, "cubic (Phi_111, Phi_222)", &i.cubic);
        let _ = writeln!(w, "fubini: {}", i.fubini);
        list(w, "ell (11, 12, 22)", &i.ell);
        list(w, "r", &i.r);
        let _ = writeln!(w, "gaussian curvature: {}", i.gaussian_curvature.as_deref().unwrap_or("undefined (bc = 0)"));
        list(w, "integrability", &i.integrability);
        match &i.applicability {
            Some(a) => list(w, "applicability", a),
            None => {
                let _ = writeln!(w, "applicability: undefined (bc = 0)");
            }
        }
        let _ = writeln!(w, "apolar: {}", i.apolar);
    }
    if let Some(g) = &r.growth {
        for (name, o) in [("m5", &g.m5), ("m6", &g.m6), ("m6hat", &g.m6hat)] {
            let Some(o) = o else { continue };
            let at = o.s0.as_ref().map(|s| format!(" at s = {s}")).unwrap_or_default();
            let _ = writeln!(w, "{name} ({}){at}: growth {}", o.chart.join(","), o.growth);
            list(w, "certificate", &o.certificate);
            for (k, level) in o.flag.iter().enumerate() {
                let _ = writeln!(w, "level {k} (rank {}):", level.len());
                for f in level {
                    let _ = writeln!(w, "  {f}");
                }
            }
        }
    }
    if let Some(c) = &r.curvature {
        for (name, m) in [("b3", &c.b3), ("e4", &c.e4)] {
            let Some(m) = m else { continue };
            let _ = writeln!(w, "curvature {name}:");
            for row in m {
                let _ = writeln!(w, "  [{}]", row.join(", "));
            }
        }
    }
    for n in &r.notes {
        let _ = writeln!(w, "note: {n}");
    }
    out
}
