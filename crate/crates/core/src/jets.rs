//! The jet map from a linear system to first-order data on a smooth variety,
//! its rank at a point, and the fiber and incidence dimension counts built
//! from those ranks.
//!
//! At a point `x` with `x_i != 0` every member `h` of a degree-`a` system is
//! read as the function `h / x_i^a` in the affine coordinates
//! `y_j = x_j / x_i`. Its image in `O_x / M_x^2` is the value at `x` together
//! with the gradient restricted to the tangent space of `X`, so the jet
//! matrix has one row per basis member and `d + 1` columns.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Matrix, Scalar};
use crate::linsys::LinearSystem;
use crate::poly::{Homogeneity, MultiPoly};
use crate::proj::ProjPoint;

/// A smooth complete intersection `X` in `P^n`: `n - d` homogeneous
/// generators and the declared dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietySpec {
    n: usize,
    dim: usize,
    label: String,
    generators: Vec<MultiPoly>,
    field: Field,
}

impl VarietySpec {
    pub fn new(
        n: usize,
        dim: usize,
        label: impl Into<String>,
        field: Field,
        generators: Vec<MultiPoly>,
    ) -> Result<Self> {
        if dim > n {
            return Err(Error::InvalidVariety(format!("dimension {dim} exceeds n = {n}")));
        }
        if generators.len() != n - dim {
            return Err(Error::InvalidVariety(format!(
                "{} generators for codimension {}",
                generators.len(),
                n - dim
            )));
        }
        for g in &generators {
            if g.nvars() != n + 1 {
                return Err(Error::InvalidVariety(format!(
                    "generator {g} has {} variables, expected {}",
                    g.nvars(),
                    n + 1
                )));
            }
            if g.field() != field {
                return Err(Error::DomainMismatch(field, g.field()));
            }
            if !matches!(g.homogeneous_degree(), Homogeneity::Homogeneous(d) if d >= 1) {
                return Err(Error::InvalidVariety(format!(
                    "generator {g} is not a nonconstant form"
                )));
            }
        }
        Ok(VarietySpec {
            n,
            dim,
            label: label.into(),
            generators,
            field,
        })
    }

    pub fn projective_space(n: usize, field: Field) -> Self {
        VarietySpec {
            n,
            dim: n,
            label: format!("P^{n}"),
            generators: Vec::new(),
            field,
        }
    }

    /// A hypersurface given by one form.
    pub fn hypersurface(label: impl Into<String>, form: MultiPoly) -> Result<Self> {
        let n = form
            .nvars()
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidVariety("no variables".into()))?;
        let field = form.field();
        VarietySpec::new(n, n.saturating_sub(1), label, field, vec![form])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn codim(&self) -> usize {
        self.n - self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn contains(&self, x: &ProjPoint) -> Result<bool> {
        self.check_point(x)?;
        for g in &self.generators {
            if !g.eval(x.coords())?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_point(&self, x: &ProjPoint) -> Result<()> {
        if x.field() != self.field {
            return Err(Error::DomainMismatch(self.field, x.field()));
        }
        if x.ambient_dim() != self.n {
            return Err(Error::Shape(format!("point {x} is not in P^{}", self.n)));
        }
        Ok(())
    }

    /// Jacobian of the generators in the affine chart `x_chart = 1`: one row
    /// per generator, columns `j != chart` in increasing order.
    pub fn chart_jacobian(&self, x: &ProjPoint, chart: usize) -> Result<Matrix> {
        chart_jacobian(&self.generators, x, chart, self.field)
    }

    pub fn reduce_mod(&self, p: u64) -> Result<VarietySpec> {
        let field = Field::prime(p)?;
        VarietySpec::new(
            self.n,
            self.dim,
            self.label.clone(),
            field,
            self.generators
                .iter()
                .map(|g| g.reduce_mod(p))
                .collect::<Result<_>>()?,
        )
    }

    /// The variety `s X`, cut out by `g(s^-1 x)`.
    pub fn moved_by(&self, s: &Matrix) -> Result<VarietySpec> {
        let t = s.inverse()?;
        VarietySpec::new(
            self.n,
            self.dim,
            self.label.clone(),
            self.field,
            self.generators
                .iter()
                .map(|g| g.linear_change(&t))
                .collect::<Result<_>>()?,
        )
    }

    pub fn from_json(text: &str, field: Field) -> Result<Self> {
        let file: VarietyFile = serde_json::from_str(text)?;
        file.into_spec(field)
    }

    pub fn load(path: &Path, field: Field) -> Result<Self> {
        VarietySpec::from_json(&std::fs::read_to_string(path)?, field)
    }

    pub fn to_file(&self) -> VarietyFile {
        VarietyFile {
            n: self.n,
            dim: self.dim,
            label: self.label.clone(),
            generators: self.generators.iter().map(ToString::to_string).collect(),
        }
    }
}

/// On-disk variety: `{ "n": 3, "dim": 2, "label": "...", "generators": ["x0*x3 - x1*x2"] }`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VarietyFile {
    pub n: usize,
    pub dim: usize,
    pub label: String,
    pub generators: Vec<String>,
}

impl VarietyFile {
    pub fn into_spec(self, field: Field) -> Result<VarietySpec> {
        let generators = self
            .generators
            .iter()
            .map(|g| MultiPoly::parse(g, self.n + 1, field))
            .collect::<Result<_>>()?;
        VarietySpec::new(self.n, self.dim, self.label, field, generators)
    }
}

pub(crate) fn chart_jacobian(
    forms: &[MultiPoly],
    x: &ProjPoint,
    chart: usize,
    field: Field,
) -> Result<Matrix> {
    let y = x.in_chart(chart)?;
    let n = y.len() - 1;
    let mut rows = Vec::with_capacity(forms.len());
    for g in forms {
        let mut row = Vec::with_capacity(n);
        for j in (0..=n).filter(|&j| j != chart) {
            // d(g / x_chart^a)/dy_j at x_chart = 1 equals dg/dx_j there
            row.push(g.partial(j)?.eval(&y)?);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(Matrix::zeros(field, 0, n));
    }
    Matrix::from_rows(field, rows)
}

/// Tangent space of `X` at `x` in the default chart.
pub fn tangent_basis(x_spec: &VarietySpec, x: &ProjPoint) -> Result<Vec<Vec<Scalar>>> {
    tangent_basis_in_chart(x_spec, x, x.chart())
}

/// `d` vectors spanning the kernel of the chart Jacobian of `X` at `x`.
/// Fails if `x` is off `X` or the Jacobian rank is not `n - d`.
pub fn tangent_basis_in_chart(
    variety: &VarietySpec,
    x: &ProjPoint,
    chart: usize,
) -> Result<Vec<Vec<Scalar>>> {
    if !variety.contains(x)? {
        return Err(Error::NotOnVariety(x.to_string()));
    }
    let jac = variety.chart_jacobian(x, chart)?;
    let rank = jac.rank();
    if rank != variety.codim() {
        return Err(Error::SingularVariety {
            point: x.to_string(),
            rank,
            expected: variety.codim(),
        });
    }
    if jac.rows() == 0 {
        return Ok(Matrix::identity(variety.field(), variety.n()).row_vecs());
    }
    Ok(jac.kernel_basis())
}

/// Rows: `(value, gradient . t_1, ..., gradient . t_d)` of `h / x_chart^a`
/// at `x` for each basis member `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetMatrix {
    pub matrix: Matrix,
    pub chart: usize,
    pub at_point: ProjPoint,
}

impl JetMatrix {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn constant_column_is_zero(&self) -> bool {
        (0..self.matrix.rows()).all(|i| self.matrix.get(i, 0).is_zero())
    }
}

pub fn xi_matrix(l: &LinearSystem, variety: &VarietySpec, x: &ProjPoint) -> Result<JetMatrix> {
    xi_matrix_in_chart(l, variety, x, x.chart())
}

pub fn xi_matrix_in_chart(
    l: &LinearSystem,
    variety: &VarietySpec,
    x: &ProjPoint,
    chart: usize,
) -> Result<JetMatrix> {
    if l.n() != variety.n() {
        return Err(Error::Shape(format!(
            "system in P^{} and variety in P^{}",
            l.n(),
            variety.n()
        )));
    }
    if l.field() != variety.field() {
        return Err(Error::DomainMismatch(l.field(), variety.field()));
    }
    let tangents = tangent_basis_in_chart(variety, x, chart)?;
    let mut y = x.in_chart(chart)?;
    y.remove(chart);
    let field = variety.field();
    let cols = variety.dim() + 1;
    let mut data = Vec::with_capacity(l.basis().len() * cols);
    for h in l.basis() {
        let f = h.dehomogenize(chart)?;
        data.push(f.eval(&y)?);
        let grad: Vec<Scalar> = (0..f.nvars())
            .map(|j| f.partial(j)?.eval(&y))
            .collect::<Result<_>>()?;
        for t in &tangents {
            data.push(
                grad.iter()
                    .zip(t)
                    .fold(field.zero(), |acc, (g, v)| acc + g * v),
            );
        }
    }
    Ok(JetMatrix {
        matrix: Matrix::new(field, l.basis().len(), cols, data)?,
        chart,
        at_point: x.clone(),
    })
}

pub fn xi_rank(l: &LinearSystem, variety: &VarietySpec, x: &ProjPoint) -> Result<usize> {
    Ok(xi_matrix(l, variety, x)?.rank())
}

/// Projective dimension of the members whose jet at `x` vanishes:
/// `projective_dim(L) - rank`. A value of `-1` means no such member.
pub fn fiber_dimension(l: &LinearSystem, variety: &VarietySpec, x: &ProjPoint) -> Result<i64> {
    let rank = xi_rank(l, variety, x)?;
    Ok(l.vector_dim() as i64 - 1 - rank as i64)
}

/// Jet data of one sampled point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointJet {
    pub point: Vec<String>,
    pub is_base_point: bool,
    pub rank: usize,
    pub fiber_dim: i64,
    pub constant_column_zero: bool,
}

/// Sampled estimate of the incidence variety of singular sections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceDimension {
    pub dim_s: i64,
    pub dim_v: i64,
    pub margin: i64,
    /// Non-base points whose jet rank fell below `d + 1`.
    pub fiber_jumps: Vec<Vec<String>>,
    /// Base points whose jet rank is not `d` or whose constant column is
    /// nonzero.
    pub base_anomalies: Vec<Vec<String>>,
    pub points: Vec<PointJet>,
}

pub fn point_jet(l: &LinearSystem, variety: &VarietySpec, x: &ProjPoint) -> Result<PointJet> {
    let jet = xi_matrix(l, variety, x)?;
    let rank = jet.rank();
    Ok(PointJet {
        point: x.to_strings(),
        is_base_point: l.basepoints().contains(x),
        rank,
        fiber_dim: l.vector_dim() as i64 - 1 - rank as i64,
        constant_column_zero: jet.constant_column_is_zero(),
    })
}

/// `dim S` is the largest `fiber_dim + dim(stratum)` over the sample, where
/// the stratum of a base point is the point itself (dimension 0) and every
/// other point moves in `X` (dimension `d`).
pub fn incidence_dimension(
    l: &LinearSystem,
    variety: &VarietySpec,
    sample: &[ProjPoint],
) -> Result<IncidenceDimension> {
    if sample.is_empty() {
        return Err(Error::InvalidConfig("empty point sample".into()));
    }
    let dim_v = l.dimension()?.projective_dim as i64;
    let d = variety.dim();
    let points = sample
        .iter()
        .map(|x| point_jet(l, variety, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(points, dim_v, d))
}

pub(crate) fn summarize(points: Vec<PointJet>, dim_v: i64, d: usize) -> IncidenceDimension {
    let dim_s = points
        .iter()
        .map(|pj| pj.fiber_dim + if pj.is_base_point { 0 } else { d as i64 })
        .max()
        .unwrap_or(-1);
    let fiber_jumps = points
        .iter()
        .filter(|pj| !pj.is_base_point && pj.rank != d + 1)
        .map(|pj| pj.point.clone())
        .collect();
    let base_anomalies = points
        .iter()
        .filter(|pj| pj.is_base_point && (pj.rank != d || !pj.constant_column_zero))
        .map(|pj| pj.point.clone())
        .collect();
    IncidenceDimension {
        dim_s,
        dim_v,
        margin: dim_v - dim_s,
        fiber_jumps,
        base_anomalies,
        points,
    }
}
