//! Projective points, the general-position predicate, hyperplanes avoiding a
//! point set, and the coordinate change that moves `P0` to `(1, 0, ..., 0)`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Matrix, Scalar};

/// A point of `P^n`, stored with its first nonzero coordinate equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let field = coords.first().ok_or(Error::ZeroPoint)?.field();
        if let Some(bad) = coords.iter().find(|c| c.field() != field) {
            return Err(Error::DomainMismatch(field, bad.field()));
        }
        let lead = coords.iter().find(|c| !c.is_zero()).ok_or(Error::ZeroPoint)?;
        let inv = lead.inv()?;
        Ok(ProjPoint {
            coords: coords.iter().map(|c| c * &inv).collect(),
        })
    }

    pub fn from_i64(field: Field, coords: &[i64]) -> Result<Self> {
        ProjPoint::new(coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn parse(field: Field, coords: &[impl AsRef<str>]) -> Result<Self> {
        ProjPoint::new(
            coords
                .iter()
                .map(|s| field.parse_scalar(s.as_ref()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    /// Ambient dimension `n` of the `P^n` the point lives in.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Lowest index with a nonzero coordinate; the default affine chart.
    pub fn chart(&self) -> usize {
        self.coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("projective point has a nonzero coordinate")
    }

    /// Representative with `x_chart = 1`.
    pub fn in_chart(&self, chart: usize) -> Result<Vec<Scalar>> {
        let c = self.coords.get(chart).ok_or(Error::IndexOutOfRange {
            index: chart,
            nvars: self.coords.len(),
        })?;
        if c.is_zero() {
            return Err(Error::NotOnVariety(format!("{self} in chart {chart}")));
        }
        let inv = c.inv()?;
        Ok(self.coords.iter().map(|x| x * &inv).collect())
    }

    /// Image under the linear map `v -> t v`.
    pub fn transform(&self, t: &Matrix) -> Result<ProjPoint> {
        ProjPoint::new(t.mul_vec(&self.coords)?)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(":"))
    }
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .fold(a[0].field().zero(), |acc, (x, y)| acc + x * y)
}

/// `q` distinct points of `P^n` over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    n: usize,
    field: Field,
    points: Vec<ProjPoint>,
}

impl PointConfig {
    /// Accepts up to `n + 2` distinct points; general-position claims are
    /// only made for `q <= n + 1`.
    pub fn new(n: usize, field: Field, points: Vec<ProjPoint>) -> Result<Self> {
        if points.len() > n + 2 {
            return Err(Error::InvalidConfig(format!(
                "{} points exceed the n + 2 = {} accepted in P^{n}",
                points.len(),
                n + 2
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if p.ambient_dim() != n {
                return Err(Error::InvalidConfig(format!("point {p} is not in P^{n}")));
            }
            if p.field() != field {
                return Err(Error::DomainMismatch(field, p.field()));
            }
            if points[..i].contains(p) {
                return Err(Error::InvalidConfig(format!("point {p} repeated")));
            }
        }
        Ok(PointConfig { n, field, points })
    }

    pub fn empty(n: usize, field: Field) -> Self {
        PointConfig {
            n,
            field,
            points: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        self.points.contains(x)
    }

    /// Linear independence in the literal sense: for `q < n + 1` all
    /// coordinate vectors are independent; for `q = n + 1` every `n` of them
    /// are.
    pub fn general_position(&self) -> Result<bool> {
        let q = self.points.len();
        if q > self.n + 1 {
            return Err(Error::InvalidConfig(format!(
                "general position is defined for at most n + 1 = {} points, got {q}",
                self.n + 1
            )));
        }
        let rank_of = |idx: &[usize]| -> Result<usize> {
            let rows = idx.iter().map(|&i| self.points[i].coords().to_vec()).collect();
            Ok(Matrix::from_rows(self.field, rows)?.rank())
        };
        if q < self.n + 1 {
            let all: Vec<usize> = (0..q).collect();
            return Ok(q == 0 || rank_of(&all)? == q);
        }
        for skip in 0..q {
            let subset: Vec<usize> = (0..q).filter(|&i| i != skip).collect();
            if rank_of(&subset)? != self.n {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coefficients `c` of a hyperplane `sum c_i x_i = 0` containing none of
    /// the points, found by a deterministic lexicographic search over small
    /// nonnegative integer vectors with entries in `[0, q]`.
    pub fn avoiding_hyperplane(&self) -> Result<Vec<Scalar>> {
        let q = self.points.len();
        let width = self.n + 1;
        let bound = match self.field {
            Field::Rational => q as u64,
            Field::Prime(p) => (q as u64).min(p - 1),
        };
        let exhaustive = matches!(self.field, Field::Prime(p) if (q as u64) >= p);
        let bound = if exhaustive { self.field.characteristic() - 1 } else { bound.max(1) };
        let mut digits = vec![0u64; width];
        loop {
            // advance odometer, last coordinate fastest
            let mut k = width;
            loop {
                if k == 0 {
                    return Err(Error::HyperplaneNotFound(self.field));
                }
                k -= 1;
                if digits[k] < bound {
                    digits[k] += 1;
                    break;
                }
                digits[k] = 0;
            }
            let c: Vec<Scalar> = digits.iter().map(|&d| self.field.from_u64(d)).collect();
            if self.points.iter().all(|p| !dot(&c, p.coords()).is_zero()) {
                return Ok(c);
            }
        }
    }

    /// Invertible `T` with `T P0 ~ (1, 0, ..., 0)` and every `P_s` off the
    /// new hyperplane `X0 = 0`.
    ///
    /// Row 0 is the avoiding hyperplane scaled so `X0(P0) = 1`. Rows `1..n`
    /// span the annihilator of `P0`; row `s < q` is taken to annihilate `P_s`
    /// as well when that keeps the rows independent, and the remaining rows
    /// are completed greedily from the canonical annihilator basis.
    pub fn normalize_coordinates(&self) -> Result<Matrix> {
        if self.points.is_empty() {
            return Err(Error::InvalidConfig("no points to normalize".into()));
        }
        if !self.general_position()? {
            return Err(Error::InvalidConfig("points are not in general position".into()));
        }
        let f = self.field;
        let p0 = self.points[0].coords();
        let c = self.avoiding_hyperplane()?;
        let scale = dot(&c, p0).inv()?;
        let mut rows = vec![c.iter().map(|x| x * &scale).collect::<Vec<_>>()];

        let rank_with = |rows: &[Vec<Scalar>], v: &[Scalar]| -> Result<usize> {
            let mut all = rows.to_vec();
            all.push(v.to_vec());
            Ok(Matrix::from_rows(f, all)?.rank())
        };
        for ps in &self.points[1..] {
            let pair = Matrix::from_rows(f, vec![p0.to_vec(), ps.coords().to_vec()])?;
            for v in pair.kernel_basis() {
                if rank_with(&rows, &v)? == rows.len() + 1 {
                    rows.push(v);
                    break;
                }
            }
        }
        let annihilator = Matrix::from_rows(f, vec![p0.to_vec()])?.kernel_basis();
        for v in annihilator {
            if rows.len() == self.n + 1 {
                break;
            }
            if rank_with(&rows, &v)? == rows.len() + 1 {
                rows.push(v);
            }
        }
        let t = Matrix::from_rows(f, rows)?;
        if t.rows() != self.n + 1 || t.det()?.is_zero() {
            return Err(Error::InvalidTransform);
        }
        Ok(t)
    }

    pub fn transform(&self, t: &Matrix) -> Result<PointConfig> {
        PointConfig::new(
            self.n,
            self.field,
            self.points
                .iter()
                .map(|p| p.transform(t))
                .collect::<Result<_>>()?,
        )
    }

    pub fn from_json(text: &str, field_override: Option<Field>) -> Result<Self> {
        let file: PointsFile = serde_json::from_str(text)?;
        file.into_config(field_override)
    }

    pub fn load(path: &Path, field_override: Option<Field>) -> Result<Self> {
        PointConfig::from_json(&std::fs::read_to_string(path)?, field_override)
    }

    pub fn to_file(&self) -> PointsFile {
        PointsFile {
            n: self.n,
            field: self.field,
            points: self.points.iter().map(ProjPoint::to_strings).collect(),
        }
    }
}

/// On-disk form of a point configuration:
/// `{ "n": 3, "field": "Q" | {"p": 101}, "points": [["1","0","0","0"], ...] }`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PointsFile {
    pub n: usize,
    pub field: Field,
    pub points: Vec<Vec<String>>,
}

impl PointsFile {
    pub fn into_config(self, field_override: Option<Field>) -> Result<PointConfig> {
        let field = field_override.unwrap_or(self.field);
        let points = self
            .points
            .iter()
            .map(|coords| {
                if coords.len() != self.n + 1 {
                    return Err(Error::InvalidConfig(format!(
                        "point with {} coordinates in P^{}",
                        coords.len(),
                        self.n
                    )));
                }
                ProjPoint::parse(field, coords)
            })
            .collect::<Result<_>>()?;
        PointConfig::new(self.n, field, points)
    }
}
