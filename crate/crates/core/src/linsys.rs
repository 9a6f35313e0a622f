//! Linear systems of degree-`a` forms vanishing at prescribed points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Matrix, Scalar};
use crate::poly::{Homogeneity, Monomial, MultiPoly};
use crate::proj::PointConfig;

/// Default height bound for random rational coefficients.
pub const DEFAULT_COEFF_BOUND: i64 = 10;

/// All `C(n + a, n)` monomials of degree `a` in `x0..xn`, in canonical
/// (descending graded reverse-lexicographic) order.
pub fn monomial_basis(n: usize, a: u32) -> Vec<Monomial> {
    Monomial::all_of_degree(n + 1, a)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemDimension {
    pub vector_dim: usize,
    pub projective_dim: usize,
}

/// The vector space of degree-`a` forms vanishing at every base point.
///
/// The basis is kept as the reduced row echelon form of its coefficient
/// vectors over the monomial list, so two systems span the same space
/// exactly when their `coefficients` agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    n: usize,
    degree: u32,
    basepoints: PointConfig,
    monomials: Vec<Monomial>,
    coefficients: Matrix,
    basis: Vec<MultiPoly>,
    condition_rank: usize,
}

impl LinearSystem {
    /// Kernel of the `q x C(n + a, n)` matrix of monomial values at the base
    /// points.
    pub fn vanishing(cfg: &PointConfig, a: u32) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidDegree("degree must be at least 1".into()));
        }
        let n = cfg.n();
        let field = cfg.field();
        let monomials = monomial_basis(n, a);
        let conditions = evaluation_matrix(cfg, &monomials)?;
        let condition_rank = conditions.rank();
        let kernel = if cfg.is_empty() {
            Matrix::identity(field, monomials.len()).row_vecs()
        } else {
            conditions.kernel_basis()
        };
        let coefficients = canonical_rows(field, monomials.len(), kernel)?;
        let basis = rows_to_polys(field, n, &monomials, &coefficients)?;
        Ok(LinearSystem {
            n,
            degree: a,
            basepoints: cfg.clone(),
            monomials,
            coefficients,
            basis,
            condition_rank,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.basepoints.field()
    }

    pub fn basepoints(&self) -> &PointConfig {
        &self.basepoints
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    /// Basis coefficient vectors (reduced row echelon form).
    pub fn coefficients(&self) -> &Matrix {
        &self.coefficients
    }

    /// Rank of the point-evaluation conditions imposed on degree-`a` forms.
    pub fn condition_rank(&self) -> usize {
        self.condition_rank
    }

    pub fn evaluation_matrix(&self) -> Result<Matrix> {
        evaluation_matrix(&self.basepoints, &self.monomials)
    }

    pub fn vector_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dimension(&self) -> Result<SystemDimension> {
        if self.basis.is_empty() {
            return Err(Error::EmptySystem);
        }
        Ok(SystemDimension {
            vector_dim: self.basis.len(),
            projective_dim: self.basis.len() - 1,
        })
    }

    /// `sum coeffs[k] * basis[k]`.
    pub fn combination(&self, coeffs: &[Scalar]) -> Result<MultiPoly> {
        if coeffs.len() != self.basis.len() {
            return Err(Error::Shape(format!(
                "{} coefficients for a basis of size {}",
                coeffs.len(),
                self.basis.len()
            )));
        }
        let field = self.field();
        let mut flat = vec![field.zero(); self.monomials.len()];
        for (k, c) in coeffs.iter().enumerate() {
            if c.field() != field {
                return Err(Error::DomainMismatch(field, c.field()));
            }
            if c.is_zero() {
                continue;
            }
            for (slot, b) in flat.iter_mut().zip(self.coefficients.row(k)) {
                if !b.is_zero() {
                    *slot = &*slot + &(c * b);
                }
            }
        }
        MultiPoly::from_coefficients(field, self.n + 1, &self.monomials, &flat)
    }

    /// Random nonzero member: uniform coefficients over `F_p`, integers in
    /// `[-10, 10]` over `Q`. Deterministic in `seed`.
    pub fn random_member(&self, seed: u64) -> Result<MultiPoly> {
        self.random_member_bounded(seed, DEFAULT_COEFF_BOUND)
    }

    pub fn random_member_bounded(&self, seed: u64, bound: i64) -> Result<MultiPoly> {
        if self.basis.is_empty() {
            return Err(Error::EmptySystem);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = random_coefficients(&mut rng, self.field(), self.basis.len(), bound);
        self.combination(&coeffs)
    }

    /// Whether `h` lies in the span of the basis.
    pub fn contains(&self, h: &MultiPoly) -> Result<bool> {
        if h.field() != self.field() {
            return Err(Error::DomainMismatch(self.field(), h.field()));
        }
        match h.homogeneous_degree() {
            Homogeneity::Zero => return Ok(true),
            Homogeneity::Homogeneous(d) if d == self.degree && h.nvars() == self.n + 1 => {}
            _ => return Ok(false),
        }
        let v = h.coordinates(&self.monomials)?;
        let stacked = self
            .coefficients
            .vstack(&Matrix::from_rows(self.field(), vec![v])?)?;
        Ok(stacked.rank() == self.basis.len())
    }

    /// The full vanishing system in degree `a_new` at the same points,
    /// after checking that `x_i^(a_new - a) * h` lies in it for every basis
    /// member `h` and every variable `x_i`.
    pub fn lift_degree(&self, a_new: u32) -> Result<LinearSystem> {
        if a_new <= self.degree {
            return Err(Error::InvalidDegree(format!(
                "lift target {a_new} must exceed the current degree {}",
                self.degree
            )));
        }
        let lifted = LinearSystem::vanishing(&self.basepoints, a_new)?;
        let shift = a_new - self.degree;
        for h in &self.basis {
            for i in 0..=self.n {
                let mut e = vec![0; self.n + 1];
                e[i] = shift;
                let g = h.shift(&Monomial::new(e));
                if !lifted.contains(&g)? {
                    return Err(Error::ContainmentViolated(g.to_string()));
                }
            }
        }
        Ok(lifted)
    }

    /// The system through the moved points `s P`: every member `h` becomes
    /// `h(s^-1 x)`.
    pub fn moved_by(&self, s: &Matrix) -> Result<LinearSystem> {
        let field = self.field();
        let t = s.inverse()?;
        let points_to = self.basepoints.transform(s)?;
        let rows = self
            .basis
            .iter()
            .map(|h| h.linear_change(&t)?.coordinates(&self.monomials))
            .collect::<Result<Vec<_>>>()?;
        let coefficients = canonical_rows(field, self.monomials.len(), rows)?;
        let basis = rows_to_polys(field, self.n, &self.monomials, &coefficients)?;
        Ok(LinearSystem {
            n: self.n,
            degree: self.degree,
            basepoints: points_to,
            monomials: self.monomials.clone(),
            coefficients,
            basis,
            condition_rank: self.condition_rank,
        })
    }

    /// Same span, compared through the canonical echelon coefficients.
    pub fn same_span(&self, other: &LinearSystem) -> bool {
        self.monomials == other.monomials && self.coefficients == other.coefficients
    }
}

pub(crate) fn random_coefficients(
    rng: &mut impl Rng,
    field: Field,
    len: usize,
    bound: i64,
) -> Vec<Scalar> {
    loop {
        let coeffs: Vec<Scalar> = (0..len)
            .map(|_| match field {
                Field::Prime(p) => field.from_u64(rng.gen_range(0..p)),
                Field::Rational => field.from_i64(rng.gen_range(-bound..=bound)),
            })
            .collect();
        if coeffs.iter().any(|c| !c.is_zero()) {
            return coeffs;
        }
    }
}

fn evaluation_matrix(cfg: &PointConfig, monomials: &[Monomial]) -> Result<Matrix> {
    let field = cfg.field();
    let nvars = cfg.n() + 1;
    let rows: Vec<Vec<Scalar>> = cfg
        .points()
        .iter()
        .map(|p| {
            monomials
                .iter()
                .map(|m| {
                    MultiPoly::from_terms(field, nvars, [(m.exponents().to_vec(), field.one())])
                        .and_then(|mono| mono.eval(p.coords()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(field, 0, monomials.len()));
    }
    Matrix::from_rows(field, rows)
}

fn canonical_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
    if rows.is_empty() {
        return Ok(Matrix::zeros(field, 0, cols));
    }
    let rref = Matrix::from_rows(field, rows)?.rref();
    let keep = rref.pivots.len();
    let data = (0..keep).flat_map(|i| rref.matrix.row(i).to_vec()).collect();
    Matrix::new(field, keep, cols, data)
}

fn rows_to_polys(
    field: Field,
    n: usize,
    monomials: &[Monomial],
    coefficients: &Matrix,
) -> Result<Vec<MultiPoly>> {
    (0..coefficients.rows())
        .map(|i| MultiPoly::from_coefficients(field, n + 1, monomials, coefficients.row(i)))
        .collect()
}

/// JSON payload of the `linsys` command.
#[derive(Clone, Debug, Serialize)]
pub struct LinsysSummary {
    pub vector_dim: usize,
    pub projective_dim: usize,
    pub basis: Vec<String>,
}

impl From<&LinearSystem> for LinsysSummary {
    fn from(l: &LinearSystem) -> Self {
        let v = l.vector_dim();
        LinsysSummary {
            vector_dim: v,
            projective_dim: v.saturating_sub(1),
            basis: l.basis().iter().map(ToString::to_string).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::EulerVerdict;
    use crate::proj::ProjPoint;

    fn q() -> Field {
        Field::Rational
    }

    fn cfg(n: usize, pts: &[&[i64]]) -> PointConfig {
        PointConfig::new(
            n,
            q(),
            pts.iter().map(|c| ProjPoint::from_i64(q(), c).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn monomial_counts() {
        let m = monomial_basis(1, 2);
        let printed: Vec<String> = m.iter().map(ToString::to_string).collect();
        assert_eq!(printed, ["x0^2", "x0*x1", "x1^2"]);
        assert_eq!(monomial_basis(3, 2).len(), 10);
        assert_eq!(monomial_basis(4, 3).len(), 35);
    }

    #[test]
    fn quadrics_through_one_point_in_p3() {
        let l = LinearSystem::vanishing(&cfg(3, &[&[1, 0, 0, 0]]), 2).unwrap();
        // (n^2 + 3n) / 2 with n = 3
        assert_eq!(l.vector_dim(), 9);
        for h in l.basis() {
            assert_eq!(h.homogeneous_degree(), Homogeneity::Homogeneous(2));
            assert_eq!(h.euler_check().unwrap(), EulerVerdict::Holds);
            assert!(h.eval(l.basepoints().points()[0].coords()).unwrap().is_zero());
        }
    }

    #[test]
    fn empty_point_set_gives_all_forms() {
        let l = LinearSystem::vanishing(&PointConfig::empty(3, q()), 2).unwrap();
        assert_eq!(l.vector_dim(), 10);
        assert_eq!(l.condition_rank(), 0);
    }

    #[test]
    fn three_points_in_p3() {
        let l = LinearSystem::vanishing(
            &cfg(3, &[&[1, 0, 0, 0], &[1, 2, -1, 3], &[0, 1, 1, 5]]),
            2,
        )
        .unwrap();
        assert_eq!(l.vector_dim(), 7);
    }

    #[test]
    fn dimensions() {
        let l = LinearSystem::vanishing(&cfg(3, &[&[1, 0, 0, 0], &[0, 0, 0, 1]]), 2).unwrap();
        assert_eq!(l.dimension().unwrap().projective_dim, 7);
        let l = LinearSystem::vanishing(&cfg(2, &[&[1, 1, 1]]), 2).unwrap();
        assert_eq!(l.dimension().unwrap().vector_dim, 5);
    }

    #[test]
    fn empty_system_is_flagged() {
        // no line of P^2 passes through three non-collinear points
        let l = LinearSystem::vanishing(&cfg(2, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), 1).unwrap();
        assert_eq!(l.dimension(), Err(Error::EmptySystem));
        assert_eq!(l.random_member(1), Err(Error::EmptySystem));
    }

    #[test]
    fn singleton_basis_member_is_a_nonzero_multiple() {
        // lines in P^2 through (1:0:0) and (0:1:0): only x2
        let l = LinearSystem::vanishing(&cfg(2, &[&[1, 0, 0], &[0, 1, 0]]), 1).unwrap();
        assert_eq!(l.vector_dim(), 1);
        let h = l.random_member(7).unwrap();
        assert!(!h.is_zero());
        assert!(l.contains(&h).unwrap());
        assert_eq!(h.num_terms(), 1);
    }

    #[test]
    fn random_members_are_reproducible() {
        let l = LinearSystem::vanishing(&cfg(3, &[&[1, 0, 0, 0]]), 2).unwrap();
        assert_eq!(l.random_member(5).unwrap(), l.random_member(5).unwrap());
    }

    #[test]
    fn lift_rejects_non_increasing_degree() {
        let l = LinearSystem::vanishing(&cfg(3, &[&[1, 0, 0, 0]]), 2).unwrap();
        assert!(matches!(l.lift_degree(2), Err(Error::InvalidDegree(_))));
    }

    #[test]
    fn lift_to_cubics() {
        let l = LinearSystem::vanishing(&cfg(3, &[&[1, 0, 0, 0]]), 2).unwrap();
        let w = l.lift_degree(3).unwrap();
        // C(6, 3) - 1
        assert_eq!(w.vector_dim(), 19);
    }

    #[test]
    fn membership() {
        let l = LinearSystem::vanishing(&cfg(2, &[&[1, 0, 0]]), 2).unwrap();
        let inside = MultiPoly::parse("x0*x1 + x2^2", 3, q()).unwrap();
        let outside = MultiPoly::parse("x0^2", 3, q()).unwrap();
        let wrong_degree = MultiPoly::parse("x1", 3, q()).unwrap();
        assert!(l.contains(&inside).unwrap());
        assert!(!l.contains(&outside).unwrap());
        assert!(!l.contains(&wrong_degree).unwrap());
    }
}
