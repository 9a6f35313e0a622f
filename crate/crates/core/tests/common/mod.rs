//! Seeded generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use bertini::linsys::monomial_basis;
use bertini::{Field, Matrix, MultiPoly, PointConfig, ProjPoint, Scalar, VarietySpec};
use rand::Rng;

pub fn q() -> Field {
    Field::Rational
}

pub fn fp(p: u64) -> Field {
    Field::prime(p).unwrap()
}

pub fn scalar(rng: &mut impl Rng, field: Field, bound: i64) -> Scalar {
    match field {
        Field::Rational => {
            let num = rng.gen_range(-bound..=bound);
            let den = rng.gen_range(1..=bound.max(1));
            field.ratio(num, den).unwrap()
        }
        Field::Prime(p) => field.from_u64(rng.gen_range(0..p)),
    }
}

pub fn int_scalar(rng: &mut impl Rng, field: Field, bound: i64) -> Scalar {
    field.from_i64(rng.gen_range(-bound..=bound))
}

/// A random form of the given degree; each monomial is present with
/// probability one half.
pub fn random_form(rng: &mut impl Rng, field: Field, nvars: usize, degree: u32) -> MultiPoly {
    let monomials = monomial_basis(nvars - 1, degree);
    let coeffs: Vec<Scalar> = monomials
        .iter()
        .map(|_| {
            if rng.gen_bool(0.5) {
                scalar(rng, field, 9)
            } else {
                field.zero()
            }
        })
        .collect();
    MultiPoly::from_coefficients(field, nvars, &monomials, &coeffs).unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, field: Field, rows: usize, cols: usize) -> Matrix {
    // sparse-ish entries make rank deficiency common
    let data = (0..rows * cols)
        .map(|_| if rng.gen_bool(0.4) { field.zero() } else { int_scalar(rng, field, 4) })
        .collect();
    Matrix::new(field, rows, cols, data).unwrap()
}

pub fn random_invertible(rng: &mut impl Rng, field: Field, n: usize) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| int_scalar(rng, field, 3)).collect();
        let m = Matrix::new(field, n, n, data).unwrap();
        if !m.det().unwrap().is_zero() {
            return m;
        }
    }
}

pub fn random_point(rng: &mut impl Rng, field: Field, n: usize) -> ProjPoint {
    loop {
        let coords = (0..=n).map(|_| int_scalar(rng, field, 5)).collect();
        if let Ok(p) = ProjPoint::new(coords) {
            return p;
        }
    }
}

/// `q` random points in general position.
pub fn general_points(rng: &mut impl Rng, field: Field, n: usize, q: usize) -> PointConfig {
    loop {
        let pts: Vec<ProjPoint> = (0..q).map(|_| random_point(rng, field, n)).collect();
        if let Ok(cfg) = PointConfig::new(n, field, pts) {
            if cfg.general_position().unwrap() {
                return cfg;
            }
        }
    }
}

pub fn quadric(field: Field) -> VarietySpec {
    VarietySpec::hypersurface(
        "smooth quadric surface",
        MultiPoly::parse("x0*x3 - x1*x2", 4, field).unwrap(),
    )
    .unwrap()
}

/// `(1:0:0:0)` and `(0:0:0:1)`: on the quadric, independent, and not on a
/// common line of it.
pub fn quadric_base_points(field: Field) -> PointConfig {
    PointConfig::new(
        3,
        field,
        vec![
            ProjPoint::from_i64(field, &[1, 0, 0, 0]).unwrap(),
            ProjPoint::from_i64(field, &[0, 0, 0, 1]).unwrap(),
        ],
    )
    .unwrap()
}

/// A point of the quadric from the product parametrization
/// `(s0 t0 : s0 t1 : s1 t0 : s1 t1)`.
pub fn quadric_point(rng: &mut impl Rng, field: Field) -> ProjPoint {
    loop {
        let s: Vec<Scalar> = (0..2).map(|_| int_scalar(rng, field, 6)).collect();
        let t: Vec<Scalar> = (0..2).map(|_| int_scalar(rng, field, 6)).collect();
        let coords = vec![&s[0] * &t[0], &s[0] * &t[1], &s[1] * &t[0], &s[1] * &t[1]];
        if let Ok(p) = ProjPoint::new(coords) {
            return p;
        }
    }
}
