//! Sparse multivariate polynomials over `Q` or `F_p`.

mod monomial;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

pub use monomial::Monomial;

use crate::error::{Error, Result};
use crate::field::{Field, Matrix, Scalar};

/// Result of a homogeneity test.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial, homogeneous of every degree.
    Zero,
    Homogeneous(u32),
    Mixed,
}

/// Outcome of checking Euler's identity `sum x_i dp/dx_i = deg * p`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EulerVerdict {
    Holds,
    Fails,
    /// The characteristic divides the degree, where the identity degenerates.
    Inapplicable,
}

/// A polynomial in `nvars` variables with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: Field, nvars: usize) -> Self {
        MultiPoly {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let mut p = MultiPoly::zero(c.field(), nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::IndexOutOfRange { index: i, nvars });
        }
        let mut p = MultiPoly::zero(field, nvars);
        p.add_term(Monomial::var(nvars, i), field.one());
        Ok(p)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, combining
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(field: Field, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Scalar)>,
    {
        let mut p = MultiPoly::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Shape(format!(
                    "exponent vector of length {} in {nvars} variables",
                    e.len()
                )));
            }
            if c.field() != field {
                return Err(Error::DomainMismatch(field, c.field()));
            }
            p.add_term(Monomial::new(e), c);
        }
        Ok(p)
    }

    /// `sum coeffs[k] * monomials[k]`.
    pub fn from_coefficients(
        field: Field,
        nvars: usize,
        monomials: &[Monomial],
        coeffs: &[Scalar],
    ) -> Result<Self> {
        if monomials.len() != coeffs.len() {
            return Err(Error::Shape("coefficient count differs from monomial count".into()));
        }
        MultiPoly::from_terms(
            field,
            nvars,
            monomials
                .iter()
                .zip(coeffs)
                .map(|(m, c)| (m.exponents().to_vec(), c.clone())),
        )
    }

    pub fn parse(text: &str, nvars: usize, field: Field) -> Result<Self> {
        parse::parse_poly(text, nvars, field)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded reverse-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn homogeneous_degree(&self) -> Homogeneity {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let Some(first) = degrees.next() else {
            return Homogeneity::Zero;
        };
        if degrees.all(|d| d == first) {
            Homogeneity::Homogeneous(first)
        } else {
            Homogeneity::Mixed
        }
    }

    /// Degree of a nonzero homogeneous form; the zero form has no degree and
    /// is reported as non-homogeneous here.
    pub fn form_degree(&self) -> Result<u32> {
        match self.homogeneous_degree() {
            Homogeneity::Homogeneous(d) => Ok(d),
            _ => Err(Error::NotHomogeneous),
        }
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::DomainMismatch(self.field, other.field));
        }
        if self.nvars != other.nvars {
            return Err(Error::Shape(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.scale(&-&self.field.one()))
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<MultiPoly> {
        let mut acc = MultiPoly::constant(self.field.one(), self.nvars);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Panics if `c` is from another field.
    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        assert_eq!(c.field(), self.field, "scalar from a different field");
        let mut out = MultiPoly::zero(self.field, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    /// Multiplies by the monomial `m`.
    pub fn shift(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Result<MultiPoly> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c * &self.field.from_u64(e as u64));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars)
            .map(|i| self.partial(i).expect("index in range"))
            .collect()
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::Shape(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        if let Some(bad) = point.iter().find(|s| s.field() != self.field) {
            return Err(Error::DomainMismatch(self.field, bad.field()));
        }
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// The composition `x -> p(t x)`.
    pub fn linear_change(&self, t: &Matrix) -> Result<MultiPoly> {
        if t.rows() != self.nvars || t.cols() != self.nvars {
            return Err(Error::Shape(format!(
                "{}x{} transform for {} variables",
                t.rows(),
                t.cols(),
                self.nvars
            )));
        }
        if t.field() != self.field {
            return Err(Error::DomainMismatch(self.field, t.field()));
        }
        if t.det()?.is_zero() {
            return Err(Error::InvalidTransform);
        }
        let images: Vec<MultiPoly> = (0..self.nvars)
            .map(|i| {
                MultiPoly::from_terms(
                    self.field,
                    self.nvars,
                    (0..self.nvars).map(|j| (Monomial::var(self.nvars, j).exponents().to_vec(), t.get(i, j).clone())),
                )
            })
            .collect::<Result<_>>()?;
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|_| vec![MultiPoly::constant(self.field.one(), self.nvars)])
            .collect();
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(c.clone(), self.nvars);
            for (i, &e) in m.exponents().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().expect("nonempty").mul(&images[i])?;
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[i][e as usize])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// `p / x_chart^a` written in the affine coordinates `y_j = x_j / x_chart`
    /// for `j != chart`, in increasing `j`.
    pub fn dehomogenize(&self, chart: usize) -> Result<MultiPoly> {
        if chart >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: chart,
                nvars: self.nvars,
            });
        }
        if self.homogeneous_degree() == Homogeneity::Mixed {
            return Err(Error::NotHomogeneous);
        }
        let n = self.nvars - 1;
        let mut out = MultiPoly::zero(self.field, n);
        for (m, c) in &self.terms {
            let mut e = m.exponents().to_vec();
            e.remove(chart);
            out.add_term(Monomial::new(e), c.clone());
        }
        Ok(out)
    }

    /// Inverse of [`MultiPoly::dehomogenize`]: reinserts `x_chart` to make a
    /// form of the given degree.
    pub fn homogenize(&self, chart: usize, degree: u32) -> Result<MultiPoly> {
        if chart > self.nvars {
            return Err(Error::IndexOutOfRange {
                index: chart,
                nvars: self.nvars + 1,
            });
        }
        if self.total_degree().is_some_and(|d| d > degree) {
            return Err(Error::InvalidDegree(format!(
                "cannot homogenize a polynomial of degree {:?} to degree {degree}",
                self.total_degree()
            )));
        }
        let mut out = MultiPoly::zero(self.field, self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = m.exponents().to_vec();
            e.insert(chart, degree - m.degree());
            out.add_term(Monomial::new(e), c.clone());
        }
        Ok(out)
    }

    /// Checks `sum x_i dp/dx_i = a p` for a homogeneous `p` of degree `a`.
    pub fn euler_check(&self) -> Result<EulerVerdict> {
        let a = match self.homogeneous_degree() {
            Homogeneity::Zero => return Ok(EulerVerdict::Holds),
            Homogeneity::Mixed => return Err(Error::NotHomogeneous),
            Homogeneity::Homogeneous(a) => a,
        };
        if let Field::Prime(p) = self.field {
            if (a as u64).is_multiple_of(p) {
                return Ok(EulerVerdict::Inapplicable);
            }
        }
        let mut lhs = MultiPoly::zero(self.field, self.nvars);
        for i in 0..self.nvars {
            lhs = lhs.add(&self.partial(i)?.shift(&Monomial::var(self.nvars, i)))?;
        }
        let rhs = self.scale(&self.field.from_u64(a as u64));
        Ok(if lhs == rhs {
            EulerVerdict::Holds
        } else {
            EulerVerdict::Fails
        })
    }

    /// Reduction into `F_p`. Rational coefficients are first scaled by the
    /// lcm of their denominators; primes dividing it are rejected.
    pub fn reduce_mod(&self, p: u64) -> Result<MultiPoly> {
        let target = Field::prime(p)?;
        match self.field {
            Field::Prime(q) if q == p => return Ok(self.clone()),
            Field::Prime(_) => return Err(Error::DomainMismatch(self.field, target)),
            Field::Rational => {}
        }
        let lcm = self.terms.values().fold(BigInt::one(), |acc, c| {
            acc.lcm(c.as_rational().expect("rational polynomial").denom())
        });
        if (&lcm % BigInt::from(p)) == BigInt::from(0) {
            return Err(Error::BadReduction { p });
        }
        let mut out = MultiPoly::zero(target, self.nvars);
        for (m, c) in &self.terms {
            let r = c.as_rational().expect("rational polynomial");
            let scaled = r.numer() * (&lcm / r.denom());
            out.add_term(m.clone(), target.from_bigint(&scaled));
        }
        Ok(out)
    }

    /// Coefficient vector with respect to an ordered monomial list.
    /// Fails if a term falls outside the list.
    pub fn coordinates(&self, monomials: &[Monomial]) -> Result<Vec<Scalar>> {
        let coords: Vec<Scalar> = monomials.iter().map(|m| self.coefficient(m)).collect();
        let covered = monomials.iter().filter(|m| self.terms.contains_key(m)).count();
        if covered != self.terms.len() {
            return Err(Error::Shape("polynomial has terms outside the monomial list".into()));
        }
        Ok(coords)
    }
}

impl fmt::Display for MultiPoly {
    /// Prints in the input grammar, largest term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let magnitude = if negative { -c } else { c.clone() };
            let is_const = m.degree() == 0;
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if is_const {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() && !(k == 0 && negative) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{magnitude}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn parse(s: &str, n: usize) -> MultiPoly {
        MultiPoly::parse(s, n, q()).unwrap()
    }

    #[test]
    fn partials() {
        let p = parse("x0*x1", 3);
        assert_eq!(p.partial(0).unwrap(), parse("x1", 3));
        assert!(parse("x1^2", 3).partial(0).unwrap().is_zero());
        assert!(matches!(p.partial(3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn partials_of_a_quadric_through_e0_give_the_linear_system() {
        // h = sum_j a0j x0 xj + sum_{i<=j} aij xi xj with symbolic a's made
        // concrete: a01=1, a02=2, a03=3, a11=4, a12=5, a13=6, a22=7, a23=8, a33=9
        let h = parse(
            "x0*x1 + 2*x0*x2 + 3*x0*x3 + 4*x1^2 + 5*x1*x2 + 6*x1*x3 + 7*x2^2 + 8*x2*x3 + 9*x3^2",
            4,
        );
        assert_eq!(h.partial(0).unwrap(), parse("x1 + 2*x2 + 3*x3", 4));
        assert_eq!(h.partial(1).unwrap(), parse("x0 + 8*x1 + 5*x2 + 6*x3", 4));
        assert_eq!(h.partial(2).unwrap(), parse("2*x0 + 5*x1 + 14*x2 + 8*x3", 4));
        assert_eq!(h.partial(3).unwrap(), parse("3*x0 + 6*x1 + 8*x2 + 18*x3", 4));
    }

    #[test]
    fn evaluation() {
        let pt = |v: &[i64]| v.iter().map(|&x| q().from_i64(x)).collect::<Vec<_>>();
        assert!(parse("x0*x1", 3).eval(&pt(&[1, 0, 1])).unwrap().is_zero());
        assert_eq!(
            parse("x0^2 + x1^2", 3).eval(&pt(&[1, 2, 0])).unwrap(),
            q().from_i64(5)
        );
        let f = Field::prime(5).unwrap();
        let err = parse("x0", 1).eval(&[f.one()]).unwrap_err();
        assert_eq!(err, Error::DomainMismatch(q(), f));
    }

    #[test]
    fn homogeneity() {
        assert_eq!(
            parse("x0*x1 + x2^2", 3).homogeneous_degree(),
            Homogeneity::Homogeneous(2)
        );
        assert_eq!(parse("x0 + x1^2", 3).homogeneous_degree(), Homogeneity::Mixed);
        assert_eq!(MultiPoly::zero(q(), 3).homogeneous_degree(), Homogeneity::Zero);
    }

    #[test]
    fn identity_change_is_noop() {
        let p = parse("x0^2 - 3*x1*x2 + x2^2", 3);
        assert_eq!(p.linear_change(&Matrix::identity(q(), 3)).unwrap(), p);
    }

    #[test]
    fn singular_change_rejected() {
        let p = parse("x0*x1", 2);
        let t = Matrix::from_i64(q(), &[&[1, 1], &[2, 2]]).unwrap();
        assert_eq!(p.linear_change(&t), Err(Error::InvalidTransform));
    }

    #[test]
    fn linear_change_substitutes() {
        // p = x0*x1, t = [[1,1],[0,1]]: p(t x) = (x0 + x1) x1
        let p = parse("x0*x1", 2);
        let t = Matrix::from_i64(q(), &[&[1, 1], &[0, 1]]).unwrap();
        assert_eq!(p.linear_change(&t).unwrap(), parse("x0*x1 + x1^2", 2));
    }

    #[test]
    fn dehomogenize_charts() {
        assert_eq!(parse("x0*x1", 3).dehomogenize(0).unwrap(), parse("x0", 2));
        // h through e0 in chart 0 has no constant term
        let h = parse("x0*x1 + 2*x0*x2 + 3*x1^2 + x1*x2", 3);
        assert_eq!(
            h.dehomogenize(0).unwrap(),
            parse("x0 + 2*x1 + 3*x0^2 + x0*x1", 2)
        );
        assert_eq!(
            parse("x0 + x1^2", 2).dehomogenize(0),
            Err(Error::NotHomogeneous)
        );
    }

    #[test]
    fn homogenize_inverts_dehomogenize() {
        let p = parse("x1^3 + 2*x0*x1*x2 - x2^3", 3);
        for chart in 0..3 {
            let back = p.dehomogenize(chart).unwrap().homogenize(chart, 3).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn euler_identity() {
        assert_eq!(
            parse("x0^2*x1 - 7/3*x1^3 + x0*x1*x2", 3).euler_check().unwrap(),
            EulerVerdict::Holds
        );
        let f3 = Field::prime(3).unwrap();
        let cubic = MultiPoly::parse("x0^3 + x1^2*x2", 3, f3).unwrap();
        assert_eq!(cubic.euler_check().unwrap(), EulerVerdict::Inapplicable);
        let quad = MultiPoly::parse("x0^2 + x1*x2", 3, f3).unwrap();
        assert_eq!(quad.euler_check().unwrap(), EulerVerdict::Holds);
        assert_eq!(parse("x0 + x1^2", 2).euler_check(), Err(Error::NotHomogeneous));
    }

    #[test]
    fn reduction_clears_denominators() {
        let p = parse("1/2*x0^2 + 1/3*x1^2", 2);
        let r = p.reduce_mod(7).unwrap();
        assert_eq!(r, MultiPoly::parse("3*x0^2 + 2*x1^2", 2, Field::Prime(7)).unwrap());
        assert_eq!(p.reduce_mod(3), Err(Error::BadReduction { p: 3 }));
    }

    #[test]
    fn printing() {
        assert_eq!(parse("x2^2 + x0*x1", 3).to_string(), "x0*x1 + x2^2");
        assert_eq!(parse("-1*x0^2 + 0*x1", 2).to_string(), "-1*x0^2");
        assert_eq!(parse("x0^2 - 3*x1*x2", 3).to_string(), "x0^2 - 3*x1*x2");
        assert_eq!(parse("-3/4 + x0", 1).to_string(), "x0 - 3/4");
        assert_eq!(MultiPoly::zero(q(), 2).to_string(), "0");
    }
}
