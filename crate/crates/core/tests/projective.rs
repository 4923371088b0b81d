use projflag::connection::{curvature, gauge_transform, horizontal_distribution};
use projflag::expr::Matrix;
use projflag::forms::{
    annihilator, cauchy_characteristics, derived_codistribution, derived_flag, same_coframe_span,
    same_span, Distribution, VectorField,
};
use projflag::projective::*;
use projflag::{Deps, Error, Expr, SymbolTable};

fn sys(b: &str, c: &str, mu: &str, nu: &str) -> CanonicalSystem {
    let t = SymbolTable::new();
    CanonicalSystem::parse(&t, b, c, mu, nu).unwrap()
}

fn entry(name: &str) -> CanonicalSystem {
    catalog_entry(name).unwrap().unwrap().system
}

fn symbolic() -> CanonicalSystem {
    CanonicalSystem::symbolic(&SymbolTable::new()).unwrap()
}

fn p(s: &CanonicalSystem, e: &Expr) -> String {
    s.table().print(e)
}

fn e(s: &CanonicalSystem, src: &str) -> Expr {
    s.table().parse(src).unwrap()
}

#[test]
fn residuals_of_examples() {
    let ex = entry("example-234");
    assert!(integrability_residuals(&ex).iter().all(Expr::is_zero));

    let t = SymbolTable::new();
    t.function("mu", Deps::XY).unwrap();
    t.function("nu", Deps::XY).unwrap();
    let q = CanonicalSystem::parse(&t, "0", "0", "mu", "nu").unwrap();
    let r = integrability_residuals(&q);
    let got: Vec<String> = r.iter().map(|x| p(&q, x)).collect();
    assert_eq!(got, ["-mu_yy + nu_xx", "2*nu_x", "-2*mu_y"]);

    let t = SymbolTable::new();
    for n in ["a", "m0", "n0"] {
        t.parameter(n).unwrap();
    }
    let s = CanonicalSystem::parse(&t, "1", "1", "a*x + m0", "a*y + n0").unwrap();
    assert!(integrability_residuals(&s).iter().all(Expr::is_zero));
}

#[test]
fn invariants_symbolic() {
    let s = symbolic();
    let inv = invariants(&s).unwrap();
    assert_eq!(p(&s, &inv.phi), "8*b*c");
    assert_eq!(inv.fubini, inv.phi);
    let cubic: Vec<String> = inv.cubic.iter().map(|x| p(&s, x)).collect();
    assert_eq!(cubic, ["-2*b", "-2*c"]);
    let ell: Vec<String> = inv.ell.iter().map(|x| p(&s, x)).collect();
    assert_eq!(ell, ["b_y", "b*c", "c_x"]);
    let r: Vec<String> = inv.r.iter().map(|x| p(&s, x)).collect();
    assert_eq!(r, ["-b*nu - mu_y", "-c*mu - nu_x"]);
    assert!(inv.apolar);
}

#[test]
fn ell_is_symmetric_in_the_frame() {
    let s = symbolic();
    let fd = frame_data(&rank4_connection(&s).unwrap()).unwrap();
    assert_eq!(fd.ell[(0, 1)], fd.ell[(1, 0)]);
    assert_eq!(p(&s, &fd.ell[(1, 0)]), "b*c");
}

#[test]
fn invariants_of_examples() {
    let ex = entry("example-234");
    let inv = invariants(&ex).unwrap();
    assert!(inv.gaussian_curvature.unwrap().is_zero());
    assert!(inv.applicability.unwrap().iter().all(Expr::is_zero));
    // The family's own display of φ and Φ differs from the normalized
    // values by the constants 8 and −2.
    let shown_phi = e(&ex, "4*k1/((4*x + k3)*(k1*y + k2))");
    assert_eq!(&inv.phi / &shown_phi, Expr::int(8));
    assert_eq!(&inv.cubic[0] / &ex.b, Expr::int(-2));
    assert_eq!(&inv.cubic[1] / &ex.c, Expr::int(-2));

    let q = entry("quadric");
    let inv = invariants(&q).unwrap();
    assert!(inv.phi.is_zero() && inv.cubic.iter().all(Expr::is_zero));
    assert_eq!(inv.gaussian_curvature, None);

    let s = sys("x + y", "1", "0", "0");
    assert_eq!(gaussian_curvature(&s).unwrap(), e(&s, "1/(8*(x+y)^3)"));
    let a = applicability_residuals(&s).unwrap();
    assert_eq!(a[0], e(&s, "-1/(x+y)^2"));
}

#[test]
fn bc_zero_rejected_for_curvature_and_residuals() {
    let s = sys("x", "0", "0", "0");
    assert!(matches!(gaussian_curvature(&s), Err(Error::Precondition(_))));
    assert!(matches!(applicability_residuals(&s), Err(Error::Precondition(_))));
    let u = sys("1", "1", "0", "0");
    assert!(applicability_residuals(&u).unwrap().iter().all(Expr::is_zero));
}

#[test]
fn classification_examples() {
    let q = classify(&entry("quadric")).unwrap();
    assert_eq!(q.stratum, Stratum::Quadric);
    assert_eq!(q.prediction, [2]);
    let r = classify(&entry("ruled")).unwrap();
    assert_eq!(r.stratum, Stratum::Ruled { c_vanishes: true });
    assert_eq!(r.prediction, [2, 3, 4]);
    let ex = classify(&entry("example-234")).unwrap();
    assert_eq!(ex.stratum, Stratum::VeryGeneral);
    assert!(ex.applicable);
    assert_eq!(ex.prediction, [2, 3, 4]);
    assert!(ex.witness.is_some());
    let b0 = classify(&sys("0", "y", "0", "0")).unwrap();
    assert_eq!(b0.stratum, Stratum::Ruled { c_vanishes: false });
}

#[test]
fn rank4_rows() {
    let s = symbolic();
    let w = rank4_connection(&s).unwrap();
    assert_eq!(p(&s, &w.part(0)[(3, 0)]), "b*nu + mu_y");
    assert_eq!(p(&s, &w.part(1)[(3, 1)]), "c_x + nu");
    let q = rank4_connection(&entry("quadric")).unwrap();
    for j in 0..4 {
        assert!(q.part(0)[(3, j)].is_zero() && q.part(1)[(3, j)].is_zero());
    }
    assert!(flatness_equivalence(&s).unwrap());
}

#[test]
fn rank4_curvature_is_the_residuals() {
    let s = symbolic();
    let r = curvature(&rank4_connection(&s).unwrap());
    let res = integrability_residuals(&s);
    for j in 0..3 {
        assert_eq!(r.matrix()[(3, j)], res[j]);
    }
    assert!(curvature(&rank4_connection(&entry("example-234")).unwrap()).is_zero());
}

#[test]
fn bar_curvature_matches_display() {
    let s = symbolic();
    let comps = curvature(&bar_connection(&s).unwrap()).components();
    let shown = [
        ["0", "-(b*nu + mu_y)", "c*mu + nu_x"],
        ["0", "-b*c", "c_x + nu"],
        ["0", "-(b_y + mu)", "b*c"],
    ];
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(comps[(i, j)], e(&s, shown[i][j]), "entry ({i},{j})");
        }
    }
    assert!(curvature(&bar_connection(&entry("quadric")).unwrap()).is_zero());
    assert!(curvature(&bar_connection(&entry("flat-ruled")).unwrap()).is_zero());
}

#[test]
fn reduction_is_horizontal_distribution() {
    for entry in catalog().unwrap() {
        let s = &entry.system;
        let h = horizontal_distribution(&bar_connection(s).unwrap()).unwrap();
        assert_eq!(h, derived_reduction(s, &Expr::zero()).unwrap(), "{}", entry.name);
    }
}

#[test]
fn unit_bc_bracket_and_certificate() {
    let s = entry("unit-bc");
    let d = derived_reduction(&s, &Expr::zero()).unwrap();
    let [x, y] = [&d.fields()[0], &d.fields()[1]];
    assert_eq!(x.lie_bracket(y).unwrap().print(), "-p*d/dp + q*d/dq");
    let (_, g) = derived_flag(&d, 4).unwrap();
    assert_eq!(g.ranks, [2, 3, 5]);
    let certs: Vec<String> = g.certificate.iter().map(|c| s.table().print_poly(c)).collect();
    assert!(certs.iter().any(|c| c == "2*p^3 - 2*q^3"), "{certs:?}");
}

#[test]
fn m6_structure() {
    for s in [symbolic(), entry("quadric")] {
        let d = m6_distribution(&s).unwrap();
        let (flag, g) = derived_flag(&d, 4).unwrap();
        assert_eq!(g.ranks, [3, 5, 6]);
        assert!(same_coframe_span(&annihilator(&d), &m6_forms(&s).unwrap()).unwrap());
        assert!(cauchy_characteristics(&d).unwrap().is_zero());
        let ds = Distribution::new(vec![VectorField::coordinate(&s.m6_chart().unwrap(), 5)]).unwrap();
        assert!(same_span(&cauchy_characteristics(&flag[1]).unwrap(), &ds).unwrap());
    }
}

#[test]
fn derived_system_identity() {
    let s = symbolic();
    let mut all = m6_forms(&s).unwrap();
    all.push(omega_s(&s).unwrap());
    let derived = derived_codistribution(&all).unwrap();
    assert!(same_coframe_span(&derived, &m6_forms(&s).unwrap()).unwrap());
}

#[test]
fn hat_distribution_growth_and_characteristics() {
    let s = symbolic();
    let hat = hat_distribution(&s, &Expr::zero()).unwrap();
    let (_, g) = derived_flag(&hat, 4).unwrap();
    assert_eq!(g.ranks, [3, 4, 6]);
    let ds = Distribution::new(vec![VectorField::coordinate(&s.m6_chart().unwrap(), 5)]).unwrap();
    assert!(same_span(&cauchy_characteristics(&hat).unwrap(), &ds).unwrap());
}

#[test]
fn reduction_independent_of_level() {
    let ex = entry("example-234");
    let ranks: Vec<Vec<usize>> = [0, 1, 7]
        .iter()
        .map(|&k| derived_flag(&derived_reduction(&ex, &Expr::int(k)).unwrap(), 4).unwrap().1.ranks)
        .collect();
    assert_eq!(ranks, [vec![2, 3, 4], vec![2, 3, 4], vec![2, 3, 4]]);
    let bad = e(&ex, "x");
    assert!(matches!(derived_reduction(&ex, &bad), Err(Error::Precondition(_))));
    assert!(derived_reduction(&ex, &e(&ex, "k1 + 3")).is_ok());
}

#[test]
fn dictionary_on_examples() {
    let ex = entry("example-234");
    let d = growth_dictionary(&ex).unwrap();
    assert_eq!(d.ranks(), [2, 3, 4]);
    assert!(d.prediction_holds && d.step23_excluded);
    assert_eq!(d.witness().unwrap().print(), "(4*x + k3)*d/dx + (y*k1^2 + k1*k2)*d/dy");

    let s = symbolic();
    let d = growth_dictionary(&s).unwrap();
    assert_eq!(d.ranks(), [2, 3, 5]);
    assert!(d.step23_excluded);

    let fr = growth_dictionary(&entry("flat-ruled")).unwrap();
    assert_eq!(fr.ranks(), [2]);
    assert_eq!(
        fr.classification.label(),
        "Ruled(c=0), intersection of two linear complexes"
    );
}

#[test]
fn canonicalize_examples() {
    let t = SymbolTable::new();
    let e = |s: &str| t.parse(s).unwrap();
    let id = PreCanonicalSystem::new(&t, e("0"), e("0"), e("x"), e("y"), e("1"), e("2"), e("0")).unwrap();
    assert_eq!(canonicalize(&id).unwrap(), CanonicalSystem::parse(&t, "x", "y", "1", "2").unwrap());

    let pre = PreCanonicalSystem::new(&t, e("y"), e("x"), e("0"), e("0"), e("0"), e("0"), e("x*y")).unwrap();
    let c = canonicalize(&pre).unwrap();
    assert_eq!(t.print(&c.mu), "1/4*y^2");
    assert_eq!(t.print(&c.nu), "1/4*x^2");

    let bad = PreCanonicalSystem::new(&t, e("x"), e("0"), e("0"), e("0"), e("0"), e("0"), e("x*y"));
    assert!(matches!(bad, Err(Error::Precondition(_))));
}

/// Writes `z = e^{θ/2} w`; every derivative of `z` is `e^{θ/2}` times an
/// expression in the jets of `w` and `θ`, obtained with `D(u) = u' + θ'/2·u`.
#[test]
fn canonicalize_matches_substitution() {
    let t = SymbolTable::new();
    for f in ["w", "theta", "b", "c", "mu", "nu"] {
        t.function(f, Deps::XY).unwrap();
    }
    let e = |s: &str| t.parse(s).unwrap();
    let half = e("1/2");
    let th = e("theta");
    let dx = |u: &Expr| u.diff(t.x()) + &th.diff(t.x()) * &half * u;
    let dy = |u: &Expr| u.diff(t.y()) + &th.diff(t.y()) * &half * u;
    let w = e("w");
    let (zx, zy) = (dx(&w), dy(&w));
    let (zxx, zyy) = (dx(&zx), dy(&zy));
    let (alpha, delta) = (th.diff(t.x()), th.diff(t.y()));
    let (b, c, mu, nu) = (e("b"), e("c"), e("mu"), e("nu"));
    let eq1 = &zxx - &(&alpha * &zx) - &b * &zy - &mu * &w;
    let eq2 = &zyy - &(&delta * &zy) - &c * &zx - &nu * &w;
    let pre = PreCanonicalSystem::new(&t, alpha, delta, b.clone(), c.clone(), mu, nu, th.clone()).unwrap();
    let can = canonicalize(&pre).unwrap();
    assert_eq!(eq1, e("w_xx") - &b * &e("w_y") - &can.mu * &w);
    assert_eq!(eq2, e("w_yy") - &c * &e("w_x") - &can.nu * &w);
}

#[test]
fn canonicalize_keeps_invariants_of_b_and_c() {
    let t = SymbolTable::new();
    let e = |s: &str| t.parse(s).unwrap();
    let pre = PreCanonicalSystem::new(&t, e("2*x"), e("0"), e("1"), e("x"), e("0"), e("0"), e("x^2")).unwrap();
    let a = invariants(&canonicalize(&pre).unwrap()).unwrap();
    let b = invariants(&CanonicalSystem::parse(&t, "1", "x", "0", "0").unwrap()).unwrap();
    assert_eq!((a.phi, a.cubic, a.fubini), (b.phi, b.cubic, b.fubini));
}

#[test]
fn h_extraction() {
    let t = SymbolTable::new();
    let e = |s: &str| t.parse(s).unwrap();
    let gs = |l: &str, m: &str| {
        GeneralSystem::new(&t, e(l), e(m), e("0"), e("1"), e("0"), e("1"), e("0"), e("0")).unwrap()
    };
    let h = extract_h(&gs("0", "0")).unwrap();
    assert!(h.asymptotic);
    assert_eq!(h.h, Matrix::from_rows(vec![vec![e("0"), e("1")], vec![e("1"), e("0")]]));
    assert!(h.certificate.is_empty());
    assert!(matches!(extract_h(&gs("1", "1")), Err(Error::Precondition(_))));
    t.function("l", Deps::XY).unwrap();
    t.function("m", Deps::XY).unwrap();
    let h = extract_h(&gs("l", "m")).unwrap();
    assert!(!h.asymptotic);
    assert_eq!(h.determinant, e("l*m - 1"));
    assert_eq!(h.certificate, vec![e("l*m - 1")]);
}

#[test]
fn general_system_reduces_to_canonical() {
    let s = symbolic();
    let t = s.table();
    let z = Expr::zero;
    let g = GeneralSystem::new(t, z(), z(), z(), s.b.clone(), s.mu.clone(), s.c.clone(), z(), s.nu.clone()).unwrap();
    assert_eq!(g.connection().unwrap(), rank4_connection(&s).unwrap().with_group(projflag::connection::StructureGroup::Parabolic));
}

#[test]
fn wilczynski_examples() {
    let u = entry("unit-bc");
    assert!(wilczynski_covariance_check(&u, &Expr::one()).unwrap());
    assert!(wilczynski_covariance_check(&u, &e(&u, "x^2 + 1")).unwrap());
    assert!(matches!(
        wilczynski_covariance_check(&u, &Expr::zero()),
        Err(Error::Precondition(_))
    ));
    let s = symbolic();
    assert!(wilczynski_covariance_check(&s, &e(&s, "x*y - 3*y^2 + 2")).unwrap());
}

#[test]
fn ruled_family() {
    let t = SymbolTable::new();
    let z = Expr::zero();
    let q = ruled_canonical(&t, &z, &z, &z, &z).unwrap();
    assert_eq!(classify(&q).unwrap().stratum, Stratum::Quadric);
    for f in ["alpha", "beta", "gamma", "delta"] {
        t.function(f, Deps::X).unwrap();
    }
    let e = |s: &str| t.parse(s).unwrap();
    let (a, b, g, d) = (e("alpha"), e("beta"), e("gamma"), e("delta"));
    let r = ruled_canonical(&t, &a, &b, &g, &d).unwrap();
    assert!(integrability_residuals(&r).iter().all(Expr::is_zero));
    let qm = ruled_ode_matrix(&t, &a, &b, &g, &d).unwrap();
    assert_eq!(qm, Matrix::from_rows(vec![vec![e("delta"), e("gamma")], vec![e("-alpha"), e("beta + delta")]]));
    assert!(matches!(ruled_canonical(&t, &e("y"), &z, &z, &z), Err(Error::Precondition(_))));
    let flat = ruled_canonical(&t, &z, &b, &g, &-&b).unwrap();
    assert!(curvature(&bar_connection(&flat).unwrap()).is_zero());
}

#[test]
fn catalog_is_sound() {
    let all = catalog().unwrap();
    assert_eq!(all.len(), 5);
    for entry in &all {
        let d = growth_dictionary(&entry.system).unwrap();
        assert_eq!(d.ranks(), entry.growth.as_slice(), "{}", entry.name);
        assert!(d.prediction_holds, "{}", entry.name);
        assert_eq!(d.classification.stratum, entry.stratum, "{}", entry.name);
    }
    assert!(catalog_entry("nope").unwrap().is_none());
}

#[test]
fn scale_and_boost_gauges_keep_growth() {
    for entry in catalog().unwrap() {
        let s = &entry.system;
        let bar = bar_connection(s).unwrap();
        let g = Matrix::diagonal(vec![e(s, "x + 2"), e(s, "y^2 + 1"), e(s, "1/(y^2 + 1)")]);
        let gb = gauge_transform(&bar, &g).unwrap();
        let before = derived_flag(&horizontal_distribution(&bar).unwrap(), 4).unwrap().1.ranks;
        let after = derived_flag(&horizontal_distribution(&gb).unwrap(), 4).unwrap().1.ranks;
        assert_eq!(before, after, "{}", entry.name);
    }
}
