use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{inv_mod, mul_mod, Field, Scalar};
use crate::error::{Error, Result};

/// Dense matrix over a single exact field, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(Error::DomainMismatch(field, bad.field()));
        }
        Ok(Matrix {
            rows,
            cols,
            field,
            data,
        })
    }

    /// Rows must all have the same length; an empty row list gives a
    /// `0 x cols` matrix only through [`Matrix::zeros`].
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let n = rows.len();
        Matrix::new(field, n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    /// Panics if `value` is from another field.
    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert_eq!(value.field(), self.field, "matrix entry from a different field");
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            data,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::DomainMismatch(self.field, other.field));
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * other.get(k, j);
                }
                out.data[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        if let Some(bad) = v.iter().find(|s| s.field() != self.field) {
            return Err(Error::DomainMismatch(self.field, bad.field()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::DomainMismatch(self.field, other.field));
        }
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::Shape("column counts differ".into()));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix::new(self.field, self.rows + other.rows, cols, data)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape(format!("inverse of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut data = Vec::with_capacity(2 * n * n);
        for i in 0..n {
            data.extend(self.row(i).iter().cloned());
            data.extend((0..n).map(|j| if i == j { self.field.one() } else { self.field.zero() }));
        }
        let aug = Matrix::new(self.field, n, 2 * n, data)?;
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return Err(Error::InvalidTransform);
        }
        let mut out = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, matrix.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.eliminate(false).pivots.len()
    }

    /// Exact determinant: fraction-free (Bareiss) elimination over `Q`,
    /// plain Gaussian elimination over `F_p`.
    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Ok(self.field.one());
        }
        let e = self.eliminate(false);
        if e.pivots.len() < self.rows {
            return Ok(self.field.zero());
        }
        Ok(e.det.expect("full-rank elimination records the determinant"))
    }

    pub fn rref(&self) -> Rref {
        let e = self.eliminate(true);
        Rref {
            matrix: e.reduced.expect("Gauss-Jordan pass requested"),
            pivots: e.pivots,
        }
    }

    /// Basis of the right kernel, one vector per free column (ascending).
    /// Vector `k` has a 1 in its free column and 0 in every other free
    /// column, so the basis is canonical for the kernel.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = -matrix.get(r, f);
                }
                v
            })
            .collect()
    }

    fn eliminate(&self, reduce_above: bool) -> Elimination {
        match self.field {
            Field::Rational => self.eliminate_rational(reduce_above),
            Field::Prime(p) => self.eliminate_mod(p, reduce_above),
        }
    }

    fn eliminate_rational(&self, reduce_above: bool) -> Elimination {
        // Scale each row to integers; rank and row space are unchanged and
        // the determinant picks up the product of the scale factors.
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row.iter().fold(BigInt::one(), |acc, s| {
                    acc.lcm(s.as_rational().expect("rational matrix").denom())
                });
                scale *= &lcm;
                row.iter()
                    .map(|s| {
                        let r = s.as_rational().expect("rational matrix");
                        r.numer() * (&lcm / r.denom())
                    })
                    .collect()
            })
            .collect();
        let (pivots, last, sign) = bareiss(&mut a, self.cols, reduce_above);
        let det = (pivots.len() == self.rows && self.is_square()).then(|| {
            let d = BigRational::new(if sign { -last.clone() } else { last.clone() }, scale);
            Scalar::Rational(d)
        });
        let reduced = reduce_above.then(|| {
            let mut m = Matrix::zeros(self.field, self.rows, self.cols);
            for (r, row) in a.iter().enumerate().take(pivots.len()) {
                for (j, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        m.data[r * self.cols + j] =
                            Scalar::Rational(BigRational::new(v.clone(), last.clone()));
                    }
                }
            }
            m
        });
        Elimination {
            pivots,
            det,
            reduced,
        }
    }

    fn eliminate_mod(&self, p: u64, reduce_above: bool) -> Elimination {
        let mut a: Vec<Vec<u64>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|s| s.residue().expect("F_p matrix")).collect())
            .collect();
        let (pivots, det) = gauss_mod(&mut a, self.cols, p, reduce_above);
        let reduced = reduce_above.then(|| {
            let mut m = Matrix::zeros(self.field, self.rows, self.cols);
            for (r, row) in a.iter().enumerate().take(pivots.len()) {
                for (j, &v) in row.iter().enumerate() {
                    m.data[r * self.cols + j] = Scalar::Mod { value: v, p };
                }
            }
            m
        });
        let det = (pivots.len() == self.rows && self.is_square()).then_some(Scalar::Mod { value: det, p });
        Elimination {
            pivots,
            det,
            reduced,
        }
    }
}

struct Elimination {
    pivots: Vec<usize>,
    det: Option<Scalar>,
    reduced: Option<Matrix>,
}

/// Fraction-free elimination on an integer matrix. Returns the pivot
/// columns, the last pivot (the determinant of the pivot minor) and whether
/// an odd number of row swaps happened.
///
/// With `reduce_above` every other row is reduced as well (fraction-free
/// Gauss-Jordan); afterwards each pivot row carries the last pivot on its
/// pivot and all entries are minors of the input, so every division by the
/// previous pivot is exact.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize, reduce_above: bool) -> (Vec<usize>, BigInt, bool) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swapped = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if i != r {
            a.swap(i, r);
            swapped = !swapped;
        }
        let pivot_row = a[r].clone();
        let piv = pivot_row[c].clone();
        let targets: Box<dyn Iterator<Item = usize>> = if reduce_above {
            Box::new((0..rows).filter(|&i| i != r))
        } else {
            Box::new(r + 1..rows)
        };
        for i in targets {
            let factor = a[i][c].clone();
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let num = &piv * &a[i][j] - &factor * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact fraction-free division");
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    (pivots, prev, swapped)
}

/// Gaussian elimination over `F_p` on raw residues. Returns the pivot
/// columns and, when every row holds a pivot, the determinant of the
/// pivoted square part. With `reduce_above` the result is in reduced row
/// echelon form.
pub(crate) fn gauss_mod(
    a: &mut [Vec<u64>],
    cols: usize,
    p: u64,
    reduce_above: bool,
) -> (Vec<usize>, u64) {
    let rows = a.len();
    let mut det = 1u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        if i != r {
            a.swap(i, r);
            det = (p - det) % p;
        }
        let piv = a[r][c];
        det = mul_mod(det, piv, p);
        let inv = inv_mod(piv, p);
        for v in a[r].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let pivot_row = a[r].clone();
        let start = if reduce_above { 0 } else { r + 1 };
        for i in start..rows {
            if i == r || a[i][c] == 0 {
                continue;
            }
            let factor = a[i][c];
            for (x, &y) in a[i].iter_mut().zip(&pivot_row) {
                *x = (*x + p - mul_mod(factor, y, p)) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, det)
}

/// Rank of a residue matrix; used on hot enumeration paths.
pub fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    gauss_mod(&mut rows, cols, p, false).0.len()
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
