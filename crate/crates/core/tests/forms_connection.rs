use projflag::connection::{
    classify_growth, covariant_curvature_derivatives, curvature, gauge_transform,
    horizontal_distribution, GrowthClass,
};
use projflag::expr::Matrix;
use projflag::forms::{
    annihilator, derived_codistribution, derived_flag, generic_rank, same_coframe_span, Chart,
    Form, VectorField,
};
use projflag::projective::{bar_connection, catalog_entry, m6_distribution, CanonicalSystem};
use projflag::{Expr, SymbolTable};

fn entry(name: &str) -> CanonicalSystem {
    catalog_entry(name).unwrap().unwrap().system
}

fn e(s: &CanonicalSystem, src: &str) -> Expr {
    s.table().parse(src).unwrap()
}

#[test]
fn parse_and_evaluate_family_coefficient() {
    let t = SymbolTable::new();
    for k in ["k1", "k2", "k3"] {
        t.parameter(k).unwrap();
    }
    let b = t.parse("4*k1*(k1*y+k2)/(4*x+k3)^2").unwrap();
    let q = projflag::q;
    let at = [("x", q(1, 1)), ("y", q(1, 1)), ("k1", q(1, 1)), ("k2", q(0, 1)), ("k3", q(0, 1))];
    assert_eq!(t.eval_at(&b, &at).unwrap(), q(1, 4));
    assert_eq!(t.parse("x/x").unwrap(), Expr::one());
    let dx = t.differentiate(&t.parse("y/(4*x^2)").unwrap(), "x").unwrap();
    assert_eq!(dx, t.parse("-y/(2*x^3)").unwrap());
}

#[test]
fn generic_rank_of_the_unit_bc_tower() {
    let s = entry("unit-bc");
    let d = horizontal_distribution(&bar_connection(&s).unwrap()).unwrap();
    let (x, y) = (&d.fields()[0], &d.fields()[1]);
    let xy = x.lie_bracket(y).unwrap();
    let fields = vec![
        x.clone(),
        y.clone(),
        xy.clone(),
        x.lie_bracket(&xy).unwrap(),
        y.lie_bracket(&xy).unwrap(),
    ];
    let g = generic_rank(&fields).unwrap();
    assert_eq!(g.rank, 5);
    let certs: Vec<String> = g.certificate.iter().map(|c| s.table().print_poly(c)).collect();
    assert!(certs.contains(&"2*p^3 - 2*q^3".to_string()), "{certs:?}");

    let c = Chart::new(s.table(), &["x", "y"]).unwrap();
    let (dx, dy) = (VectorField::<projflag::Rational>::coordinate(&c, 0), VectorField::coordinate(&c, 1));
    let g = generic_rank(&[dx.clone(), dy.clone(), dx.add(&dy).unwrap()]).unwrap();
    assert_eq!((g.rank, g.certificate.len()), (2, 0));
    assert_eq!(generic_rank(m6_distribution(&s).unwrap().fields()).unwrap().rank, 3);
}

#[test]
fn annihilator_of_reduction_is_reduced_connection_forms() {
    for name in ["unit-bc", "example-234", "quadric"] {
        let s = entry(name);
        let bar = bar_connection(&s).unwrap();
        let d = horizontal_distribution(&bar).unwrap();
        let m5 = s.m5_chart().unwrap();
        let forms = vec![
            Form::from_terms(&m5, &[("z", e(&s, "1")), ("x", e(&s, "-p")), ("y", e(&s, "-q"))]).unwrap(),
            Form::from_terms(&m5, &[("p", e(&s, "1")), ("x", -s.r())]).unwrap(),
            Form::from_terms(&m5, &[("q", e(&s, "1")), ("y", -s.t())]).unwrap(),
        ];
        assert!(same_coframe_span(&annihilator(&d), &forms).unwrap(), "{name}");
        assert!(same_coframe_span(&bar.connection_forms().unwrap(), &forms).unwrap(), "{name}");
    }
}

#[test]
fn derived_codistribution_examples() {
    let t = SymbolTable::new();
    let c = Chart::new(&t, &["x", "y", "z"]).unwrap();
    let dz: Vec<Form> = vec![Form::coordinate(&c, 2)];
    assert!(same_coframe_span(&derived_codistribution(&dz).unwrap(), &dz).unwrap());

    let q = entry("quadric");
    let ann = annihilator(&horizontal_distribution(&bar_connection(&q).unwrap()).unwrap());
    assert_eq!(derived_codistribution(&ann).unwrap().len(), 3);
}

#[test]
fn family_witness_kills_curvature_derivatives() {
    let s = entry("example-234");
    let bar = bar_connection(&s).unwrap();
    let (d1, d2) = covariant_curvature_derivatives(&bar).unwrap();
    let f1 = e(&s, "4*x + k3");
    let f2 = e(&s, "k1*(k1*y + k2)");
    let combo = d1.matrix().scale(&f1).add_ref(&d2.matrix().scale(&f2));
    assert!(combo.is_zero());
    let cls = classify_growth(&bar).unwrap();
    assert!(matches!(cls.class, GrowthClass::Step234 { witness: Some(_) }));
    assert!(cls.curvature_test_agrees);
}

#[test]
fn ruled_curvature_is_constant_along_rulings() {
    let s = entry("ruled");
    let (_, d2) = covariant_curvature_derivatives(&bar_connection(&s).unwrap()).unwrap();
    assert!(d2.is_zero());
}

#[test]
fn constant_and_rational_gauges_on_bar_connection() {
    let s = entry("unit-bc");
    let bar = bar_connection(&s).unwrap();
    let g = Matrix::diagonal(vec![e(&s, "3"), e(&s, "1"), e(&s, "1/3")]);
    let r = curvature(&bar);
    let want = g.mul_ref(r.matrix()).mul_ref(&g.inverse().unwrap());
    assert_eq!(curvature(&gauge_transform(&bar, &g).unwrap()).matrix(), &want);

    let u = Matrix::diagonal(vec![e(&s, "x^2 + y"), e(&s, "1"), e(&s, "1/(x^2 + y)")]);
    let gb = gauge_transform(&bar, &u).unwrap();
    let before = derived_flag(&horizontal_distribution(&bar).unwrap(), 4).unwrap().1.ranks;
    let after = derived_flag(&horizontal_distribution(&gb).unwrap(), 4).unwrap().1.ranks;
    assert_eq!(before, after);
}

#[test]
fn stabilized_flag_is_a_fixed_point() {
    let s = entry("unit-bc");
    let (flag, g) = derived_flag(&horizontal_distribution(&bar_connection(&s).unwrap()).unwrap(), 4).unwrap();
    assert!(g.ranks.windows(2).all(|w| w[0] < w[1]));
    let last = flag.last().unwrap();
    let (_, again) = derived_flag(last, 4).unwrap();
    assert_eq!(again.ranks, [5]);
}
