//! Matrices over the fraction field and fraction-free generic rank.

use std::ops::{Index, IndexMut};

use super::gcd::{gcd, lcm};
use super::poly::Poly;
use super::ratfn::RatFn;
use crate::scalar::{Field, Rational};

/// A dense matrix of rational functions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<F: Field = Rational> {
    rows: usize,
    cols: usize,
    data: Vec<RatFn<F>>,
}

impl<F: Field> Index<(usize, usize)> for Matrix<F> {
    type Output = RatFn<F>;
    fn index(&self, (i, j): (usize, usize)) -> &RatFn<F> {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RatFn<F> {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![RatFn::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = RatFn::one();
        }
        m
    }

    pub fn diagonal(entries: Vec<RatFn<F>>) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: Vec<Vec<RatFn<F>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> RatFn<F>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[RatFn<F>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<RatFn<F>> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<RatFn<F>>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[RatFn<F>] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map(&self, f: impl Fn(&RatFn<F>) -> RatFn<F>) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatFn::is_zero)
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = RatFn::zero();
            for k in 0..self.cols {
                let (a, b) = (&self[(i, k)], &other[(k, j)]);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add_ref(&a.mul_ref(b));
                }
            }
            acc
        })
    }

    pub fn scale(&self, s: &RatFn<F>) -> Self {
        self.map(|e| e.mul_ref(s))
    }

    /// Reduced row echelon form over the fraction field and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul_ref(&inv);
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        m[(i, j)] = m[(i, j)].sub_ref(&f.mul_ref(&m[(r, j)]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel over the fraction field.
    pub fn kernel(&self) -> Vec<Vec<RatFn<F>>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![RatFn::zero(); self.cols];
            v[free] = RatFn::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = r[(i, free)].neg_ref();
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> RatFn<F> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = RatFn::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return RatFn::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg_ref();
            }
            let piv = m[(c, c)].clone();
            det = det.mul_ref(&piv);
            let inv = piv.inv().expect("pivot is nonzero");
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].mul_ref(&inv);
                for j in c..m.cols {
                    if !m[(c, j)].is_zero() {
                        m[(i, j)] = m[(i, j)].sub_ref(&f.mul_ref(&m[(c, j)]));
                    }
                }
            }
        }
        det
    }

    /// The inverse, or `None` when the determinant vanishes identically.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                RatFn::one()
            } else {
                RatFn::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }
}

/// Generic rank of a list of vectors, with the polynomials whose
/// nonvanishing guarantees the rank at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericRank<F: Field = Rational> {
    pub rank: usize,
    /// Indices of the greedy (first independent) subset of the input.
    pub pivots: Vec<usize>,
    pub certificate: Vec<Poly<F>>,
}

fn push_certificate<F: Field>(cert: &mut Vec<Poly<F>>, p: &Poly<F>) {
    if p.is_constant() {
        return;
    }
    let p = p.sign_normalized();
    if !cert.contains(&p) {
        cert.push(p);
    }
}

fn column_content<F: Field>(col: &[Poly<F>]) -> Poly<F> {
    let mut nonzero: Vec<&Poly<F>> = col.iter().filter(|e| !e.is_zero()).collect();
    nonzero.sort_by_key(|e| e.len());
    let mut g = match nonzero.first() {
        Some(e) => (*e).clone(),
        None => return Poly::one(),
    };
    for e in &nonzero[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd(&g, e);
    }
    g
}

/// Fraction-free (Bareiss) elimination on the matrix whose columns are
/// `vectors`. Each vector is first cleared of denominators; the cleared
/// denominators and every non-constant pivot enter the certificate.
pub fn generic_rank<F: Field>(vectors: &[Vec<RatFn<F>>]) -> GenericRank<F> {
    let m = vectors.len();
    let n = vectors.first().map_or(0, Vec::len);
    let mut certificate = Vec::new();
    let mut cols: Vec<Vec<Poly<F>>> = Vec::with_capacity(m);
    for v in vectors {
        assert_eq!(v.len(), n, "vectors of different lengths");
        let mut l = Poly::one();
        for e in v {
            if !e.den().is_one() {
                l = lcm(&l, e.den());
            }
        }
        push_certificate(&mut certificate, &l);
        let mut col: Vec<Poly<F>> = v
            .iter()
            .map(|e| {
                if l.is_one() {
                    e.num().clone()
                } else {
                    let k = l.div_exact(e.den()).expect("lcm is a multiple");
                    e.num().mul_ref(&k)
                }
            })
            .collect();
        // A common factor of the column only shrinks the eliminants; its
        // zeros still matter, so it joins the certificate.
        let content = column_content(&col);
        if !content.is_constant() {
            push_certificate(&mut certificate, &content);
            for e in col.iter_mut().filter(|e| !e.is_zero()) {
                *e = e.div_exact(&content).expect("content divides");
            }
        }
        cols.push(col);
    }
    // A column proportional to an earlier one by a constant never pivots;
    // zeroing it skips its share of the elimination.
    let mut seen: Vec<Vec<Poly<F>>> = Vec::new();
    for col in cols.iter_mut() {
        let Some(first) = col.iter().find(|e| !e.is_zero()) else {
            continue;
        };
        let unit = first.normalizing_unit();
        let key: Vec<Poly<F>> = col.iter().map(|e| e.scale(&unit)).collect();
        if seen.contains(&key) {
            col.iter_mut().for_each(|e| *e = Poly::zero());
        } else {
            seen.push(key);
        }
    }
    // a[i][j]: row i = coordinate, column j = vector.
    let mut a: Vec<Vec<Poly<F>>> = (0..n)
        .map(|i| (0..m).map(|j| cols[j][i].clone()).collect())
        .collect();
    let mut prev = Poly::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..m {
        if r == n {
            break;
        }
        // The row choice does not change which columns pivot; small pivots
        // keep the Bareiss entries small.
        let Some(p) = (r..n).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| a[i][c].len()) else {
            continue;
        };
        a.swap(p, r);
        let piv = a[r][c].clone();
        for i in r + 1..n {
            let lead = a[i][c].clone();
            for j in c + 1..m {
                let t = piv.mul_ref(&a[i][j]).sub_ref(&lead.mul_ref(&a[r][j]));
                a[i][j] = if prev.is_one() {
                    t
                } else {
                    t.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
            a[i][c] = Poly::zero();
        }
        push_certificate(&mut certificate, &piv);
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    GenericRank {
        rank: r,
        pivots,
        certificate,
    }
}

/// Rescales a vector by a rational function so that its entries are
/// polynomials without common factor and integer content, the first nonzero
/// entry having a positive leading coefficient. Zero vectors are returned
/// unchanged.
pub fn primitive_vector<F: Field>(v: &[RatFn<F>]) -> Vec<RatFn<F>> {
    let mut l = Poly::one();
    for e in v.iter().filter(|e| !e.is_zero()) {
        l = lcm(&l, e.den());
    }
    let nums: Vec<Poly<F>> = v
        .iter()
        .map(|e| {
            if e.is_zero() {
                Poly::zero()
            } else {
                e.num().mul_ref(&l.div_exact(e.den()).expect("lcm is a multiple"))
            }
        })
        .collect();
    let mut g = Poly::zero();
    for n in nums.iter().filter(|n| !n.is_zero()) {
        g = if g.is_zero() { n.clone() } else { gcd(&g, n) };
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let out: Vec<Poly<F>> = nums
        .iter()
        .map(|n| n.div_exact(&g).expect("gcd divides"))
        .collect();
    let u = F::normalizing_unit(out.iter().flat_map(|p| p.terms().iter().map(|t| &t.1)));
    out.iter()
        .map(|p| RatFn::new(p.scale(&u), Poly::one()).expect("nonzero denominator"))
        .collect()
}

/// Constants `c` with `target = Σ c_i basis_i`, if they exist.
pub fn solve_rational_combination<F: Field>(
    target: &RatFn<F>,
    basis: &[RatFn<F>],
) -> Option<Vec<F>> {
    let mut l = target.den().clone();
    for b in basis {
        l = lcm(&l, b.den());
    }
    let clear = |e: &RatFn<F>| -> Poly<F> {
        e.num()
            .mul_ref(&l.div_exact(e.den()).expect("lcm is a multiple"))
    };
    let t = clear(target);
    let bs: Vec<Poly<F>> = basis.iter().map(clear).collect();
    let mut monos: Vec<_> = t.terms().iter().map(|x| x.0.clone()).collect();
    for b in &bs {
        monos.extend(b.terms().iter().map(|x| x.0.clone()));
    }
    monos.sort();
    monos.dedup();
    let coeff = |p: &Poly<F>, m| {
        p.terms()
            .iter()
            .find(|x| &x.0 == m)
            .map_or_else(F::zero, |x| x.1.clone())
    };
    let a: Vec<Vec<F>> = monos
        .iter()
        .map(|m| bs.iter().map(|b| coeff(b, m)).collect())
        .collect();
    let rhs: Vec<F> = monos.iter().map(|m| coeff(&t, m)).collect();
    solve_linear(a, rhs, basis.len())
}

/// One solution of `a x = b` over `F`, free variables set to zero.
pub fn solve_linear<F: Field>(mut a: Vec<Vec<F>>, mut b: Vec<F>, nvars: usize) -> Option<Vec<F>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nvars {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        b.swap(p, r);
        let inv = F::one() / a[r][c].clone();
        for j in c..nvars {
            a[r][j] = a[r][j].clone() * &inv;
        }
        b[r] = b[r].clone() * &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..nvars {
                    let t = f.clone() * &a[r][j];
                    a[i][j] = a[i][j].clone() - t;
                }
                let t = f * &b[r];
                b[i] = b[i].clone() - t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![F::zero(); nvars];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}
