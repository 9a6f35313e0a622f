//! Singularity detection: quadric discriminants, brute-force singular loci
//! over prime fields, the Jacobian criterion for `X ∩ H`, and tangency of
//! hyperplanes.
//!
//! Everything here that enumerates points works over `F_p` on raw residues.
//! Points are normalized so the first nonzero coordinate is 1, which makes
//! that coordinate the affine chart used by the Jacobian criterion.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{mul_mod, rank_mod, Field, Matrix, Scalar};
use crate::jets::{chart_jacobian, tangent_basis_in_chart, VarietySpec};
use crate::poly::{Homogeneity, MultiPoly};
use crate::proj::ProjPoint;

/// Default limit on the number of points of `P^n(F_p)` an enumeration may
/// visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000_000;

/// The symmetric matrix `A` of a quadric `h`, with `A_ii = 2 a_ii` and
/// `A_ij = A_ji = a_ij`, so that `grad h = A x`.
pub fn quadric_matrix(h: &MultiPoly) -> Result<Matrix> {
    check_quadric(h)?;
    let field = h.field();
    let n1 = h.nvars();
    let mut a = Matrix::zeros(field, n1, n1);
    for (m, c) in h.terms() {
        let idx: Vec<usize> = m
            .exponents()
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            a.set(i, i, c + c);
        } else {
            a.set(i, j, c.clone());
            a.set(j, i, c.clone());
        }
    }
    Ok(a)
}

fn check_quadric(h: &MultiPoly) -> Result<()> {
    match h.homogeneous_degree() {
        Homogeneity::Homogeneous(2) => {}
        Homogeneity::Homogeneous(d) => return Err(Error::WrongDegree { expected: 2, got: d }),
        _ => return Err(Error::NotHomogeneous),
    }
    if h.field().characteristic() == 2 {
        return Err(Error::CharacteristicDividesDegree { p: 2, degree: 2 });
    }
    Ok(())
}

/// `det A = 0`.
pub fn quadric_is_singular(h: &MultiPoly) -> Result<bool> {
    Ok(quadric_matrix(h)?.det()?.is_zero())
}

/// Number of points of `P^n(F_p)`.
pub fn projective_point_count(n: usize, p: u64) -> u128 {
    let p = p as u128;
    (0..=n as u32).map(|k| p.pow(k)).sum()
}

fn check_cap(n: usize, p: u64, cap: u128) -> Result<()> {
    let points = projective_point_count(n, p);
    if points > cap {
        return Err(Error::EnumerationCap { points, cap });
    }
    Ok(())
}

/// All normalized points of `P^n(F_p)` satisfying `pred`, in lexicographic
/// order of their residue vectors.
pub fn projective_points_where<F>(n: usize, p: u64, pred: F) -> Vec<Vec<u64>>
where
    F: Fn(&[u64]) -> bool + Sync,
{
    // one task per (leading index, value of the next coordinate)
    let mut tasks = Vec::new();
    for lead in 0..=n {
        if lead == n {
            tasks.push((lead, 0));
        } else {
            tasks.extend((0..p).map(|v| (lead, v)));
        }
    }
    let mut found: Vec<Vec<u64>> = tasks
        .par_iter()
        .flat_map_iter(|&(lead, first)| {
            let mut out = Vec::new();
            let mut x = vec![0u64; n + 1];
            x[lead] = 1;
            if lead < n {
                x[lead + 1] = first;
            }
            let free = (lead + 2).min(n + 1);
            loop {
                if pred(&x) {
                    out.push(x.clone());
                }
                // odometer over coordinates free..=n, last one fastest
                let mut k = n + 1;
                loop {
                    if k == free {
                        return out.into_iter();
                    }
                    k -= 1;
                    x[k] += 1;
                    if x[k] < p {
                        break;
                    }
                    x[k] = 0;
                }
            }
        })
        .collect();
    found.sort_unstable();
    found
}

/// A form over `F_p` compiled for fast evaluation on residues.
#[derive(Clone, Debug)]
pub struct FpPoly {
    p: u64,
    terms: Vec<(u64, Vec<u32>)>,
}

impl FpPoly {
    pub fn compile(h: &MultiPoly) -> Result<Self> {
        let Field::Prime(p) = h.field() else {
            return Err(Error::DomainMismatch(Field::Prime(0), h.field()));
        };
        Ok(FpPoly {
            p,
            terms: h
                .terms()
                .map(|(m, c)| (c.residue().expect("residue"), m.exponents().to_vec()))
                .collect(),
        })
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (&xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = mul_mod(t, xi, p);
                }
            }
            acc += t;
            if acc >= p {
                acc -= p;
            }
        }
        acc
    }
}

fn compiled_gradient(h: &MultiPoly) -> Result<Vec<FpPoly>> {
    h.gradient().iter().map(FpPoly::compile).collect()
}

fn residues_to_point(field: Field, x: &[u64]) -> ProjPoint {
    ProjPoint::new(x.iter().map(|&v| field.from_u64(v)).collect()).expect("nonzero point")
}

fn residue_strings(x: &[u64]) -> Vec<String> {
    x.iter().map(ToString::to_string).collect()
}

fn as_prime_field(field: Field) -> Result<u64> {
    match field {
        Field::Prime(p) => Ok(p),
        Field::Rational => Err(Error::DomainMismatch(Field::Prime(0), field)),
    }
}

/// Points of `P^n(F_p)` where every partial of `h` vanishes. With `p` prime
/// to `deg h` these are exactly the singular points of `{h = 0}`.
pub fn singular_points_bruteforce(h: &MultiPoly, p: u64) -> Result<Vec<ProjPoint>> {
    singular_points_bruteforce_capped(h, p, DEFAULT_ENUMERATION_CAP)
}

pub fn singular_points_bruteforce_capped(
    h: &MultiPoly,
    p: u64,
    cap: u128,
) -> Result<Vec<ProjPoint>> {
    let field = Field::prime(p)?;
    let h = if h.field() == field { h.clone() } else { h.reduce_mod(p)? };
    let degree = h.form_degree()?;
    if (degree as u64).is_multiple_of(p) {
        return Err(Error::CharacteristicDividesDegree { p, degree });
    }
    let n = h.nvars() - 1;
    check_cap(n, p, cap)?;
    let grad = compiled_gradient(&h)?;
    Ok(projective_points_where(n, p, |x| grad.iter().all(|g| g.eval(x) == 0))
        .iter()
        .map(|x| residues_to_point(field, x))
        .collect())
}

/// Rank at `x` of the chart Jacobian of the generators of `X` together with
/// `h`. The section `X ∩ {h = 0}` is smooth at `x` iff this is `n - d + 1`.
pub fn jacobian_rank_at(variety: &VarietySpec, h: &MultiPoly, x: &ProjPoint) -> Result<usize> {
    if h.field() != variety.field() {
        return Err(Error::DomainMismatch(variety.field(), h.field()));
    }
    if !variety.contains(x)? || !h.eval(x.coords())?.is_zero() {
        return Err(Error::NotOnVariety(format!("{x} is not on X ∩ {{{h} = 0}}")));
    }
    let mut forms = variety.generators().to_vec();
    forms.push(h.clone());
    Ok(chart_jacobian(&forms, x, x.chart(), variety.field())?.rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SmoothAtRationalPoints,
    Singular,
    Inapplicable,
}

/// Outcome of a smoothness check over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub verdict: Verdict,
    pub points_checked: u64,
    /// Points of `X ∩ H` where the Jacobian rank drops, sorted.
    pub singular_points: Vec<Vec<String>>,
    pub field: Field,
    pub runtime_ms: u64,
    pub form: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variety: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// For an inapplicable verdict caused by `X` itself being singular mod
    /// `p`, the offending point of `X`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl SingularityReport {
    pub fn is_singular(&self) -> bool {
        self.verdict == Verdict::Singular
    }
}

/// The rational points of a variety over `F_p`, enumerated once and reused
/// across many hypersurface checks.
#[derive(Clone, Debug)]
pub struct VarietyPoints {
    variety: VarietySpec,
    p: u64,
    /// `None` for the whole of `P^n`.
    points: Option<Vec<Vec<u64>>>,
    grads: Vec<Vec<FpPoly>>,
    degenerate: Option<Vec<u64>>,
}

impl VarietyPoints {
    /// Reduces `X` mod `p` if needed, enumerates its points and checks the
    /// Jacobian of `X` at each of them.
    pub fn enumerate(variety: &VarietySpec, p: u64, cap: u128) -> Result<Self> {
        let variety = if variety.field() == Field::Prime(p) {
            variety.clone()
        } else {
            variety.reduce_mod(p)?
        };
        let n = variety.n();
        check_cap(n, p, cap)?;
        let gens: Vec<FpPoly> = variety
            .generators()
            .iter()
            .map(FpPoly::compile)
            .collect::<Result<_>>()?;
        let grads: Vec<Vec<FpPoly>> = variety
            .generators()
            .iter()
            .map(compiled_gradient)
            .collect::<Result<_>>()?;
        let (points, degenerate) = if gens.is_empty() {
            (None, None)
        } else {
            let pts = projective_points_where(n, p, |x| gens.iter().all(|g| g.eval(x) == 0));
            let codim = variety.codim();
            let degenerate = pts
                .iter()
                .find(|x| jacobian_rows_rank(&grads, None, x, p) < codim)
                .cloned();
            (Some(pts), degenerate)
        };
        Ok(VarietyPoints {
            variety,
            p,
            points,
            grads,
            degenerate,
        })
    }

    pub fn variety(&self) -> &VarietySpec {
        &self.variety
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of rational points of `X`.
    pub fn len(&self) -> u128 {
        match &self.points {
            Some(pts) => pts.len() as u128,
            None => projective_point_count(self.variety.n(), self.p),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The points of `X`; `None` when `X` is all of `P^n`.
    pub fn points(&self) -> Option<&[Vec<u64>]> {
        self.points.as_deref()
    }

    /// A point where `X` mod `p` fails the Jacobian criterion, if any.
    pub fn degenerate_point(&self) -> Option<&[u64]> {
        self.degenerate.as_deref()
    }

    /// Checks `X ∩ {h = 0}` at every rational point. `h` may be over `Q`, in
    /// which case it is reduced mod `p`.
    pub fn check(&self, h: &MultiPoly) -> Result<SingularityReport> {
        let field = Field::Prime(self.p);
        let h = if h.field() == field { h.clone() } else { h.reduce_mod(self.p)? };
        if h.nvars() != self.variety.n() + 1 {
            return Err(Error::Shape(format!(
                "form in {} variables on P^{}",
                h.nvars(),
                self.variety.n()
            )));
        }
        if matches!(h.homogeneous_degree(), Homogeneity::Mixed) {
            return Err(Error::NotHomogeneous);
        }
        let mut report = SingularityReport {
            verdict: Verdict::SmoothAtRationalPoints,
            points_checked: 0,
            singular_points: Vec::new(),
            field,
            runtime_ms: 0,
            form: h.to_string(),
            variety: Some(self.variety.label().to_string()),
            reason: None,
            witness: None,
        };
        if let Some(x) = &self.degenerate {
            report.verdict = Verdict::Inapplicable;
            report.reason = Some(format!("X is singular mod {}", self.p));
            report.witness = Some(residue_strings(x));
            return Ok(report);
        }
        let fh = FpPoly::compile(&h)?;
        let gh = compiled_gradient(&h)?;
        let p = self.p;
        let codim = self.variety.codim();
        // None off H, otherwise whether the rank drops
        let test = |x: &[u64]| -> Option<bool> {
            (fh.eval(x) == 0).then(|| jacobian_rows_rank(&self.grads, Some(&gh), x, p) < codim + 1)
        };
        let hits: Vec<Vec<u64>>;
        let checked: u64;
        match &self.points {
            Some(pts) => {
                let results: Vec<(usize, bool)> = pts
                    .par_iter()
                    .enumerate()
                    .filter_map(|(i, x)| test(x).map(|bad| (i, bad)))
                    .collect();
                checked = results.len() as u64;
                if !pts.is_empty() && checked == pts.len() as u64 {
                    report.verdict = Verdict::Inapplicable;
                    report.points_checked = checked;
                    report.reason = Some("h vanishes on every rational point of X".into());
                    return Ok(report);
                }
                hits = results
                    .into_iter()
                    .filter(|&(_, bad)| bad)
                    .map(|(i, _)| pts[i].clone())
                    .collect();
            }
            None => {
                if h.is_zero() {
                    report.verdict = Verdict::Inapplicable;
                    report.reason = Some("h is the zero form".into());
                    return Ok(report);
                }
                let on_h = projective_points_where(self.variety.n(), p, |x| fh.eval(x) == 0);
                checked = on_h.len() as u64;
                hits = on_h
                    .into_iter()
                    .filter(|x| jacobian_rows_rank(&self.grads, Some(&gh), x, p) < codim + 1)
                    .collect();
            }
        }
        report.points_checked = checked;
        report.singular_points = hits.iter().map(|x| residue_strings(x)).collect();
        if !hits.is_empty() {
            report.verdict = Verdict::Singular;
        }
        Ok(report)
    }
}

/// Rank of the chart Jacobian at a normalized residue point; the chart is
/// the first nonzero coordinate, which equals 1.
fn jacobian_rows_rank(
    grads: &[Vec<FpPoly>],
    extra: Option<&Vec<FpPoly>>,
    x: &[u64],
    p: u64,
) -> usize {
    let chart = x.iter().position(|&v| v != 0).expect("nonzero point");
    let rows: Vec<Vec<u64>> = grads
        .iter()
        .chain(extra)
        .map(|grad| {
            grad.iter()
                .enumerate()
                .filter(|&(k, _)| k != chart)
                .map(|(_, g)| g.eval(x))
                .collect()
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    rank_mod(rows, p)
}

/// Enumerates the rational points of `X ∩ {h = 0}` over `F_p` and applies the
/// Jacobian criterion at each. A clean verdict only speaks for rational
/// points.
pub fn smooth_intersection_check(
    variety: &VarietySpec,
    h: &MultiPoly,
    p: u64,
) -> Result<SingularityReport> {
    smooth_intersection_check_capped(variety, h, p, DEFAULT_ENUMERATION_CAP, false)
}

pub fn smooth_intersection_check_capped(
    variety: &VarietySpec,
    h: &MultiPoly,
    p: u64,
    cap: u128,
    timing: bool,
) -> Result<SingularityReport> {
    let start = Instant::now();
    let mut report = VarietyPoints::enumerate(variety, p, cap)?.check(h)?;
    if timing {
        report.runtime_ms = start.elapsed().as_millis() as u64;
    }
    Ok(report)
}

/// Coefficients of a hyperplane tangent to `X` at `x`: the gradient of the
/// first generator at `x`.
pub fn tangent_hyperplane(variety: &VarietySpec, x: &ProjPoint) -> Result<Vec<Scalar>> {
    // validates smoothness at x
    tangent_basis_in_chart(variety, x, x.chart())?;
    let g = variety
        .generators()
        .first()
        .ok_or_else(|| Error::InvalidVariety("projective space has no tangent hyperplanes".into()))?;
    g.gradient().iter().map(|d| d.eval(x.coords())).collect()
}

/// Whether the hyperplane `c . x = 0` passes through `x` and contains the
/// tangent space of `X` there.
pub fn tangent_hyperplane_test(variety: &VarietySpec, c: &[Scalar], x: &ProjPoint) -> Result<bool> {
    if c.len() != variety.n() + 1 {
        return Err(Error::Shape(format!(
            "{} hyperplane coefficients in P^{}",
            c.len(),
            variety.n()
        )));
    }
    let field = variety.field();
    let dot = |u: &[Scalar], v: &[Scalar]| {
        u.iter().zip(v).fold(field.zero(), |acc, (a, b)| acc + a * b)
    };
    let chart = x.chart();
    let tangents = tangent_basis_in_chart(variety, x, chart)?;
    if !dot(c, x.coords()).is_zero() {
        return Ok(false);
    }
    let linear: Vec<Scalar> = c
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != chart)
        .map(|(_, v)| v.clone())
        .collect();
    Ok(tangents.iter().all(|t| dot(&linear, t).is_zero()))
}

/// The linear form `c . x`.
pub fn hyperplane_form(field: Field, c: &[Scalar]) -> Result<MultiPoly> {
    let n1 = c.len();
    MultiPoly::from_terms(
        field,
        n1,
        c.iter().enumerate().map(|(i, v)| {
            let mut e = vec![0; n1];
            e[i] = 1;
            (e, v.clone())
        }),
    )
}

/// Whether an `F_p` point given as residues re-fails the Jacobian criterion
/// for `X ∩ {h = 0}`. Used to audit reported witnesses.
pub fn recheck_witness(variety: &VarietySpec, h: &MultiPoly, witness: &[String]) -> Result<bool> {
    let p = as_prime_field(h.field())?;
    let field = Field::prime(p)?;
    let variety = if variety.field() == field { variety.clone() } else { variety.reduce_mod(p)? };
    let x = ProjPoint::parse(field, witness)?;
    Ok(jacobian_rank_at(&variety, h, &x)? < variety.codim() + 1)
}
