use super::*;
use crate::expr::{Deps, SymbolTable};
use crate::forms::{annihilator, same_coframe_span, same_span};

fn base() -> (SymbolTable, Chart) {
    let t = SymbolTable::new();
    let c = Chart::new(&t, &["x", "y"]).unwrap();
    (t, c)
}

fn mat(t: &SymbolTable, rows: &[&[&str]]) -> Matrix {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| t.parse(s).unwrap()).collect())
            .collect(),
    )
}

/// A rank-3 connection whose 18 entries are unrelated jets.
fn generic(t: &SymbolTable, c: &Chart) -> Connection {
    let mut parts = Vec::new();
    for d in ["u", "v"] {
        let mut rows = Vec::new();
        for i in 0..3 {
            let mut row = Vec::new();
            for j in 0..3 {
                let name = format!("{d}{i}{j}");
                t.function(&name, Deps::XY).unwrap();
                row.push(t.parse(&name).unwrap());
            }
            rows.push(row);
        }
        parts.push(Matrix::from_rows(rows));
    }
    let dy = parts.pop().unwrap();
    let dx = parts.pop().unwrap();
    Connection::new(c, &["e1", "e2", "e3"], dx, dy).unwrap()
}

#[test]
fn zero_connection_is_flat_and_integrable() {
    let (t, c) = base();
    let z = Connection::<Rational>::zero(&c, &["z", "p", "q"]).unwrap();
    let h = horizontal_distribution(&z).unwrap();
    let total = z.total_chart().unwrap();
    let want = Distribution::new(vec![
        VectorField::coordinate(&total, 0),
        VectorField::coordinate(&total, 1),
    ])
    .unwrap();
    assert_eq!(h, want);
    assert!(curvature(&z).is_zero());
    let (d1, d2) = covariant_curvature_derivatives(&z).unwrap();
    assert!(d1.is_zero() && d2.is_zero());
    assert_eq!(classify_growth(&z).unwrap().class, GrowthClass::Integrable);
    assert_eq!(t.print(&curvature(&z).matrix()[(0, 0)]), "0");
}

#[test]
fn construction_errors() {
    let (t, c) = base();
    t.fiber("p").unwrap();
    let bad = mat(&t, &[&["p", "0"], &["0", "0"]]);
    let zero = Matrix::zeros(2, 2);
    assert!(matches!(
        Connection::new(&c, &["a", "b"], bad, zero.clone()),
        Err(Error::Precondition(_))
    ));
    assert_eq!(
        Connection::new(&c, &["a", "b", "d"], zero.clone(), zero.clone()),
        Err(Error::RankMismatch { expected: 3, found: 2 })
    );
    let xyz = Chart::new(&t, &["x", "y", "p"]).unwrap();
    assert!(Connection::new(&xyz, &["a", "b"], zero.clone(), zero).is_err());
    let two = Connection::<Rational>::zero(&c, &["a", "b"]).unwrap();
    assert_eq!(
        classify_growth(&two),
        Err(Error::RankMismatch { expected: 3, found: 2 })
    );
}

#[test]
fn horizontal_fields_dual_to_connection_forms() {
    let (t, c) = base();
    let g = generic(&t, &c);
    let h = horizontal_distribution(&g).unwrap();
    let forms = g.connection_forms().unwrap();
    for w in &forms {
        for f in h.fields() {
            assert!(w.pair(f).unwrap().is_zero());
        }
    }
    assert!(same_coframe_span(&annihilator(&h), &forms).unwrap());
}

#[test]
fn bracket_of_lifts_is_vertical_curvature() {
    let (t, c) = base();
    let g = generic(&t, &c);
    let [x1, x2] = g.horizontal_fields().unwrap();
    let x3 = x1.lie_bracket(&x2).unwrap();
    let n = vertical_matrix(&g, &x3).unwrap();
    assert_eq!(&n, curvature(&g).matrix());
}

#[test]
fn bracket_route_matches_matrix_formula() {
    let (t, c) = base();
    let g = generic(&t, &c);
    let (d1, d2) = covariant_curvature_derivatives(&g).unwrap();
    assert_eq!(d1, covariant_derivative_formula(&g, 0));
    assert_eq!(d2, covariant_derivative_formula(&g, 1));
}

#[test]
fn gauge_identity_and_conjugation() {
    let (t, c) = base();
    let g = generic(&t, &c);
    let id = Matrix::identity(3);
    assert_eq!(gauge_transform(&g, &id).unwrap(), g);
    let h = mat(&t, &[&["1", "x", "0"], &["0", "1", "y^2"], &["x*y", "0", "1"]]);
    let gg = gauge_transform(&g, &h).unwrap();
    let hinv = h.inverse().unwrap();
    let want = h.mul_ref(curvature(&g).matrix()).mul_ref(&hinv);
    assert_eq!(curvature(&gg).matrix(), &want);
    let singular = mat(&t, &[&["x", "y", "0"], &["x", "y", "0"], &["0", "0", "1"]]);
    assert_eq!(gauge_transform(&g, &singular), Err(Error::SingularGauge));
}

#[test]
fn gauge_keeps_horizontal_growth() {
    let (t, c) = base();
    let b = mat(&t, &[&["0", "1", "0"], &["0", "0", "1"], &["0", "0", "0"]]);
    let bar = Connection::new(
        &c,
        &["z", "p", "q"],
        b,
        mat(&t, &[&["0", "0", "1"], &["0", "0", "0"], &["0", "1", "0"]]),
    )
    .unwrap();
    let g = Matrix::diagonal(vec![t.parse("x+1").unwrap(), t.parse("1").unwrap(), t.parse("1/(x+1)").unwrap()]);
    let before = classify_growth(&bar).unwrap();
    let after = classify_growth(&gauge_transform(&bar, &g).unwrap()).unwrap();
    assert_eq!(before.growth.ranks, after.growth.ranks);
    let h1 = horizontal_distribution(&bar).unwrap();
    assert!(same_span(&h1, &h1.normalized()).unwrap());
}

#[test]
fn euclidean_fields_and_codazzi() {
    let (t, c) = base();
    for f in ["l", "m", "n"] {
        t.function(f, Deps::XY).unwrap();
    }
    let names = [["g111", "g112", "g122"], ["g211", "g212", "g222"]];
    for row in &names {
        for n in row {
            t.function(n, Deps::XY).unwrap();
        }
    }
    let gamma = Christoffel::from_fn(|i, j, k| t.parse(names[i][j + k]).unwrap());
    let e = |s: &str| t.parse(s).unwrap();
    let conn = euclidean_connection(&c, &gamma, &e("l"), &e("m"), &e("n")).unwrap();
    let [x, y] = conn.horizontal_fields().unwrap();
    assert_eq!(
        x.print(),
        "d/dx + p*d/dsigma + (sigma*l + p*g111 + q*g211)*d/dp + (sigma*m + p*g112 + q*g212)*d/dq"
    );
    assert_eq!(
        y.print(),
        "d/dy + q*d/dsigma + (sigma*m + p*g112 + q*g212)*d/dp + (sigma*n + p*g122 + q*g222)*d/dq"
    );
    // The (1,0) and (2,0) entries are the Codazzi combinations.
    let r = curvature(&conn);
    let codazzi1 = e("m_x - l_y + l*g112 + m*(g212 - g111) - n*g211");
    let codazzi2 = e("n_x - m_y + l*g122 + m*(g222 - g112) - n*g212");
    assert_eq!(r.matrix()[(1, 0)], codazzi1);
    assert_eq!(r.matrix()[(2, 0)], codazzi2);
    let plane = euclidean_connection(&c, &Christoffel::zero(), &e("0"), &e("0"), &e("0")).unwrap();
    assert!(curvature(&plane).is_zero());
}

#[test]
fn euclidean_unit_data_is_234_without_witness() {
    // ∇_x R and ∇_y R are independent, but every horizontal and vertical
    // field preserves sigma^2 - p^2 - q^2, so the flag stops at rank 4.
    let (t, c) = base();
    let e = |s: &str| t.parse(s).unwrap();
    let conn = euclidean_connection(&c, &Christoffel::zero(), &e("1"), &e("0"), &e("1")).unwrap();
    assert!(!curvature(&conn).is_zero());
    let cls = classify_growth(&conn).unwrap();
    assert_eq!(cls.class, GrowthClass::Step234 { witness: None });
    assert_eq!(cls.growth.ranks, vec![2, 3, 4]);
    let [x1, _] = conn.horizontal_fields().unwrap();
    assert!(x1.apply(&e("sigma^2 - p^2 - q^2")).is_zero());
    assert!(!cls.curvature_test_agrees);
    let (d1, d2) = cls.derivatives.unwrap();
    assert_eq!(witness_kernel(&d1, &d2), None);
}

#[test]
fn unit_bc_connection_is_235() {
    let (t, c) = base();
    let bar = Connection::new(
        &c,
        &["z", "p", "q"],
        mat(&t, &[&["0", "1", "0"], &["0", "0", "1"], &["0", "0", "0"]]),
        mat(&t, &[&["0", "0", "1"], &["0", "0", "0"], &["0", "1", "0"]]),
    )
    .unwrap();
    let cls = classify_growth(&bar).unwrap();
    assert_eq!(cls.class, GrowthClass::Step235);
    assert!(cls.curvature_test_agrees);
}
