use super::{Chart, Form, VectorField};
use crate::error::{Error, Result};
use crate::expr::{self, GenericRank, Matrix, Poly, RatFn};
use crate::scalar::{Field, Rational};

/// The span of a list of vector fields on one chart. The list may be empty
/// only for the zero distribution.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Distribution<F: Field = Rational> {
    chart: Chart,
    fields: Vec<VectorField<F>>,
}

/// Ranks of a derived flag and the polynomials whose nonvanishing makes
/// those ranks hold at a point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GrowthVector<F: Field = Rational> {
    pub ranks: Vec<usize>,
    pub certificate: Vec<Poly<F>>,
}

impl<F: Field> GrowthVector<F> {
    /// Whether the final rank fills the chart.
    pub fn is_bracket_generating(&self, dim: usize) -> bool {
        self.ranks.last() == Some(&dim)
    }

    /// Text such as `(2,3,5)`.
    pub fn text(&self) -> String {
        let parts: Vec<String> = self.ranks.iter().map(usize::to_string).collect();
        format!("({})", parts.join(","))
    }
}

impl<F: Field> Distribution<F> {
    pub fn new(fields: Vec<VectorField<F>>) -> Result<Self> {
        let Some(first) = fields.first() else {
            return Err(Error::EmptyInput);
        };
        let chart = first.chart().clone();
        if fields.iter().any(|f| *f.chart() != chart) {
            return Err(Error::ChartMismatch);
        }
        Ok(Distribution { chart, fields })
    }

    pub fn zero(chart: &Chart) -> Self {
        Distribution {
            chart: chart.clone(),
            fields: Vec::new(),
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn fields(&self) -> &[VectorField<F>] {
        &self.fields
    }

    pub fn is_zero(&self) -> bool {
        self.fields.iter().all(VectorField::is_zero)
    }

    /// Coefficient matrix, one row per spanning field.
    pub fn matrix(&self) -> Matrix<F> {
        Matrix::from_fn(self.fields.len(), self.chart.dim(), |i, j| {
            self.fields[i].coeff(j).clone()
        })
    }

    pub fn rank(&self) -> usize {
        if self.fields.is_empty() {
            0
        } else {
            generic_rank(&self.fields).expect("nonempty").rank
        }
    }

    /// The greedy independent subset of the spanning fields.
    pub fn basis(&self) -> Self {
        if self.fields.is_empty() {
            return self.clone();
        }
        let r = generic_rank(&self.fields).expect("nonempty");
        Distribution {
            chart: self.chart.clone(),
            fields: r.pivots.iter().map(|&i| self.fields[i].clone()).collect(),
        }
    }

    /// Whether `v` lies in the span over the fraction field.
    pub fn contains(&self, v: &VectorField<F>) -> Result<bool> {
        if *v.chart() != self.chart {
            return Err(Error::ChartMismatch);
        }
        if v.is_zero() {
            return Ok(true);
        }
        let mut all = self.fields.clone();
        all.push(v.clone());
        Ok(generic_rank(&all)?.rank == self.rank())
    }

    /// A canonical spanning set: the nonzero rows of the reduced echelon form.
    pub fn normalized(&self) -> Self {
        if self.fields.is_empty() {
            return self.clone();
        }
        let (r, pivots) = self.matrix().rref();
        let fields = (0..pivots.len())
            .map(|i| VectorField::new(&self.chart, r.row(i).to_vec()).expect("row length"))
            .collect();
        Distribution {
            chart: self.chart.clone(),
            fields,
        }
    }
}

/// Whether two distributions have the same span over the fraction field.
pub fn same_span<F: Field>(a: &Distribution<F>, b: &Distribution<F>) -> Result<bool> {
    if a.chart != b.chart {
        return Err(Error::ChartMismatch);
    }
    Ok(a.normalized().fields == b.normalized().fields)
}

/// Rank over the fraction field with its genericity certificate.
pub fn generic_rank<F: Field>(fields: &[VectorField<F>]) -> Result<GenericRank<F>> {
    let Some(first) = fields.first() else {
        return Err(Error::EmptyInput);
    };
    if fields.iter().any(|f| f.chart() != first.chart()) {
        return Err(Error::ChartMismatch);
    }
    let vectors: Vec<Vec<RatFn<F>>> = fields.iter().map(|f| f.coeffs().to_vec()).collect();
    Ok(expr::generic_rank(&vectors))
}

fn merge<F: Field>(into: &mut Vec<Poly<F>>, from: Vec<Poly<F>>) {
    for p in from {
        if !into.contains(&p) {
            into.push(p);
        }
    }
}

/// The derived flag `Δ ⊆ Δ' ⊆ Δ'' ⊆ …` up to `max_steps` derivations.
///
/// Each step adds the pairwise brackets of the current basis and keeps the
/// greedy independent subset, so earlier fields are never replaced.
pub fn derived_flag<F: Field>(
    d: &Distribution<F>,
    max_steps: usize,
) -> Result<(Vec<Distribution<F>>, GrowthVector<F>)> {
    if max_steps == 0 {
        return Err(Error::Precondition("derived flag needs at least one step".into()));
    }
    let dim = d.chart.dim();
    let mut certificate = Vec::new();
    let mut current = if d.fields.is_empty() {
        d.clone()
    } else {
        let r = generic_rank(&d.fields)?;
        merge(&mut certificate, r.certificate);
        Distribution {
            chart: d.chart.clone(),
            fields: r.pivots.iter().map(|&i| d.fields[i].clone()).collect(),
        }
    };
    let mut ranks = vec![current.fields.len()];
    let mut flag = vec![current.clone()];
    for _ in 0..max_steps {
        let rank = current.fields.len();
        if rank == dim || rank == 0 {
            break;
        }
        let mut candidates = current.fields.clone();
        for i in 0..rank {
            for j in i + 1..rank {
                let b = current.fields[i].lie_bracket(&current.fields[j])?;
                if !b.is_zero() {
                    candidates.push(b);
                }
            }
        }
        let r = generic_rank(&candidates)?;
        if r.rank == rank {
            break;
        }
        merge(&mut certificate, r.certificate);
        current = Distribution {
            chart: d.chart.clone(),
            fields: r.pivots.iter().map(|&i| candidates[i].clone()).collect(),
        };
        ranks.push(r.rank);
        flag.push(current.clone());
    }
    Ok((flag, GrowthVector { ranks, certificate }))
}

/// Fraction-field basis of the 1-forms annihilating `d`.
pub fn annihilator<F: Field>(d: &Distribution<F>) -> Vec<Form<F>> {
    let n = d.chart.dim();
    if d.fields.is_empty() {
        return (0..n).map(|i| Form::coordinate(&d.chart, i)).collect();
    }
    d.matrix()
        .kernel()
        .into_iter()
        .map(|v| Form::one_form(&d.chart, v).expect("kernel vector length"))
        .collect()
}

/// Vector fields annihilated by every form in `forms`.
fn kernel_fields<F: Field>(chart: &Chart, forms: &[Form<F>]) -> Vec<VectorField<F>> {
    if forms.is_empty() {
        return (0..chart.dim()).map(|i| VectorField::coordinate(chart, i)).collect();
    }
    let m = Matrix::from_fn(forms.len(), chart.dim(), |i, j| forms[i].coeff(j).clone());
    m.kernel()
        .into_iter()
        .map(|v| VectorField::new(chart, v).expect("kernel vector length"))
        .collect()
}

/// Cauchy characteristics: the fields `V ∈ Δ` with `[V, Δ] ⊆ Δ`.
///
/// Writing `V = Σ fⁱ Xᵢ`, the condition `Σ fⁱ [Xᵢ, Xⱼ] ≡ 0 mod Δ` is linear
/// over functions, so the answer is a fraction-field kernel. The result is
/// returned in reduced echelon form.
pub fn cauchy_characteristics<F: Field>(d: &Distribution<F>) -> Result<Distribution<F>> {
    let basis = d.basis();
    let r = basis.fields.len();
    if r == 0 {
        return Ok(Distribution::zero(&d.chart));
    }
    let ann = annihilator(&basis);
    let mut rows = Vec::new();
    let mut brackets = vec![vec![None; r]; r];
    for j in 0..r {
        for theta in &ann {
            let mut row = Vec::with_capacity(r);
            for i in 0..r {
                if brackets[i][j].is_none() {
                    let b = basis.fields[i].lie_bracket(&basis.fields[j])?;
                    brackets[j][i] = Some(b.neg());
                    brackets[i][j] = Some(b);
                }
                let b = brackets[i][j].as_ref().expect("filled above");
                row.push(theta.pair(b)?);
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Ok(basis.normalized());
    }
    let kernel = Matrix::from_rows(rows).kernel();
    if kernel.is_empty() {
        return Ok(Distribution::zero(&d.chart));
    }
    let mut fields = Vec::new();
    for f in kernel {
        let mut v = VectorField::zero(&d.chart);
        for (fi, x) in f.iter().zip(&basis.fields) {
            if !fi.is_zero() {
                v = v.add(&x.scale(fi))?;
            }
        }
        fields.push(v);
    }
    Ok(Distribution {
        chart: d.chart.clone(),
        fields,
    }
    .normalized())
}

/// The derived system `{θ ∈ span Ω : dθ ≡ 0 mod Ω}` of independent 1-forms,
/// returned in reduced echelon form.
pub fn derived_codistribution<F: Field>(omega: &[Form<F>]) -> Result<Vec<Form<F>>> {
    let Some(first) = omega.first() else {
        return Ok(Vec::new());
    };
    let chart = first.chart().clone();
    if omega.iter().any(|w| *w.chart() != chart || w.degree() != 1) {
        return Err(Error::Precondition("derived system needs 1-forms on one chart".into()));
    }
    let v = kernel_fields(&chart, omega);
    let dw: Vec<Form<F>> = omega.iter().map(Form::d).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            let row: Vec<RatFn<F>> = dw
                .iter()
                .map(|t| t.eval2(&v[a], &v[b]))
                .collect::<Result<_>>()?;
            if row.iter().any(|e| !e.is_zero()) {
                rows.push(row);
            }
        }
    }
    let combos = if rows.is_empty() {
        Matrix::<F>::identity(omega.len()).to_rows()
    } else {
        Matrix::from_rows(rows).kernel()
    };
    let mut out = Vec::new();
    for g in combos {
        let mut theta = Form::zero(&chart, 1)?;
        for (gi, w) in g.iter().zip(omega) {
            if !gi.is_zero() {
                theta = theta.add(&w.scale(gi))?;
            }
        }
        out.push(theta);
    }
    Ok(normalize_forms(&chart, &out))
}

/// Reduced echelon form of a list of 1-forms (zero forms dropped).
pub(crate) fn normalize_forms<F: Field>(chart: &Chart, forms: &[Form<F>]) -> Vec<Form<F>> {
    if forms.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_fn(forms.len(), chart.dim(), |i, j| forms[i].coeff(j).clone());
    let (r, pivots) = m.rref();
    (0..pivots.len())
        .map(|i| Form::one_form(chart, r.row(i).to_vec()).expect("row length"))
        .collect()
}

/// Whether two lists of 1-forms span the same codistribution.
pub fn same_coframe_span<F: Field>(a: &[Form<F>], b: &[Form<F>]) -> Result<bool> {
    let chart = match (a.first(), b.first()) {
        (None, None) => return Ok(true),
        (Some(w), _) | (None, Some(w)) => w.chart().clone(),
    };
    if a.iter().chain(b).any(|w| *w.chart() != chart) {
        return Err(Error::ChartMismatch);
    }
    Ok(normalize_forms(&chart, a) == normalize_forms(&chart, b))
}
