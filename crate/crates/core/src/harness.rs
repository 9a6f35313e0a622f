//! Experiment orchestration: Monte Carlo smoothness sampling, jet-rank
//! surveys, discriminant densities, and their JSON / CSV reports.
//!
//! Trial `t` of a run seeded with `s` draws from its own generator seeded
//! with `mix(s) ^ t` (see [`trial_seed`]), so results do not depend on how
//! trials are scheduled.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::jets::{point_jet, summarize, xi_matrix, PointJet, VarietyFile, VarietySpec};
use crate::linsys::{random_coefficients, LinearSystem, DEFAULT_COEFF_BOUND};
use crate::poly::MultiPoly;
use crate::proj::{PointConfig, PointsFile, ProjPoint};
use crate::smoothness::{
    projective_point_count, projective_points_where, quadric_is_singular,
    singular_points_bruteforce_capped, smooth_intersection_check_capped, SingularityReport,
    VarietyPoints, Verdict, DEFAULT_ENUMERATION_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    BertiniSample,
    JetSurvey,
    DiscDensity,
    Linsys,
    CheckMember,
}

/// How `bertini-sample` draws its members.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemberMode {
    /// Uniform random member of the system.
    #[default]
    Random,
    /// A random member whose jet vanishes at a seeded rational point of `X`,
    /// so the section is singular there.
    Tangent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub max_singular_fraction: f64,
    pub monotone_slack: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            max_singular_fraction: 0.10,
            monotone_slack: 0.02,
        }
    }
}

fn default_degree() -> u32 {
    2
}

fn default_trials() -> usize {
    1
}

fn default_cap() -> u64 {
    DEFAULT_ENUMERATION_CAP as u64
}

fn default_bound() -> i64 {
    DEFAULT_COEFF_BOUND
}

/// Everything that determines a run. Reports echo it verbatim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variety: Option<VarietyFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<PointsFile>,
    /// Ambient dimension when neither points nor a variety fix it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default = "default_degree")]
    pub degree: u32,
    pub field: Field,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(default)]
    pub member_mode: MemberMode,
    #[serde(default)]
    pub exhaustive: bool,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default = "default_cap")]
    pub enumeration_cap: u64,
    #[serde(default = "default_bound")]
    pub coeff_bound: i64,
    #[serde(default)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, field: Field) -> Self {
        ExperimentConfig {
            experiment,
            variety: None,
            points: None,
            n: None,
            degree: default_degree(),
            field,
            trials: default_trials(),
            seed: 0,
            form: None,
            member_mode: MemberMode::Random,
            exhaustive: false,
            thresholds: Thresholds::default(),
            enumeration_cap: default_cap(),
            coeff_bound: default_bound(),
            timing: false,
        }
    }

    pub fn with_variety(mut self, v: &VarietySpec) -> Self {
        self.variety = Some(v.to_file());
        self
    }

    pub fn with_points(mut self, cfg: &PointConfig) -> Self {
        self.points = Some(cfg.to_file());
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        ExperimentConfig::from_json(&std::fs::read_to_string(path)?)
    }

    /// Checks the constraints every runner relies on.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.degree == 0 {
            return Err(Error::InvalidDegree("degree must be at least 1".into()));
        }
        if self.coeff_bound < 1 {
            return bad("coeff_bound must be at least 1");
        }
        match self.experiment {
            ExperimentKind::BertiniSample => {
                self.prime()?;
                if self.variety.is_none() || self.points.is_none() {
                    return bad("bertini-sample needs a variety and a point file");
                }
            }
            ExperimentKind::JetSurvey => {
                if self.variety.is_none() || self.points.is_none() {
                    return bad("jet-survey needs a variety and a point file");
                }
            }
            ExperimentKind::DiscDensity => {
                if self.degree != 2 {
                    return Err(Error::WrongDegree { expected: 2, got: self.degree });
                }
                if self.form.is_none() {
                    self.prime()?;
                }
            }
            ExperimentKind::Linsys => {
                self.ambient_dim()?;
            }
            ExperimentKind::CheckMember => {
                self.prime()?;
                if self.variety.is_none() || self.form.is_none() {
                    return bad("check-member needs a variety and a form");
                }
            }
        }
        self.ambient_dim()?;
        Ok(())
    }

    fn prime(&self) -> Result<u64> {
        match self.field {
            Field::Prime(p) => Ok(p),
            Field::Rational => Err(Error::Config(format!(
                "{:?} runs over a prime field",
                self.experiment
            ))),
        }
    }

    fn cap(&self) -> u128 {
        self.enumeration_cap as u128
    }

    /// `n` from the point file, the variety, the explicit `n`, or the
    /// highest variable index of the form, in that order; they must agree.
    pub fn ambient_dim(&self) -> Result<usize> {
        let candidates = [
            self.points.as_ref().map(|p| p.n),
            self.variety.as_ref().map(|v| v.n),
            self.n,
        ];
        let mut found: Option<usize> = None;
        for c in candidates.into_iter().flatten() {
            match found {
                Some(n) if n != c => {
                    return Err(Error::Config(format!("conflicting ambient dimensions {n} and {c}")))
                }
                _ => found = Some(c),
            }
        }
        if let Some(n) = found {
            return Ok(n);
        }
        if let Some(form) = &self.form {
            return Ok(max_variable_index(form).unwrap_or(0));
        }
        Err(Error::Config("cannot determine the ambient dimension".into()))
    }

    fn variety_spec(&self) -> Result<VarietySpec> {
        let file = self
            .variety
            .clone()
            .ok_or_else(|| Error::Config("no variety given".into()))?;
        let spec = file.into_spec(Field::Rational)?;
        match self.field {
            Field::Rational => Ok(spec),
            Field::Prime(p) => spec.reduce_mod(p),
        }
    }

    fn point_config(&self) -> Result<PointConfig> {
        match &self.points {
            Some(file) => file.clone().into_config(Some(self.field)),
            None => Ok(PointConfig::empty(self.ambient_dim()?, self.field)),
        }
    }

    fn parse_form(&self, text: &str) -> Result<MultiPoly> {
        let nvars = self.ambient_dim()? + 1;
        let h = MultiPoly::parse(text, nvars, Field::Rational)?;
        match self.field {
            Field::Rational => Ok(h),
            Field::Prime(p) => h.reduce_mod(p),
        }
    }
}

/// Seed of trial `t`. The run seed is scrambled first so that nearby run
/// seeds do not share most of their trial seeds.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    // SplitMix64 finalizer
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (z ^ (z >> 31)) ^ t as u64
}

/// Highest `k` with `xk` occurring in `text`.
pub fn max_variable_index(text: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut best = None;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(k) = text[start..j].parse::<usize>() {
                best = best.max(Some(k));
            }
            i = j.max(i + 1);
        } else {
            i += 1;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BertiniTrial {
    pub trial: usize,
    pub seed: u64,
    pub member: String,
    pub verdict: Verdict,
    pub points_checked: u64,
    pub singular_points: Vec<Vec<String>>,
    /// The point a tangent-mode member was built to be singular at.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constructed_point: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JetTrial {
    pub trial: usize,
    #[serde(flatten)]
    pub jet: PointJet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscTrial {
    pub trial: usize,
    pub member: String,
    pub det_zero: bool,
    /// Whether brute force found a rational singular point, when run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bruteforce_singular: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisTrial {
    pub index: usize,
    pub form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum TrialRecord {
    Bertini(BertiniTrial),
    Jet(JetTrial),
    Disc(DiscTrial),
    Basis(BasisTrial),
    Member(SingularityReport),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Aggregates {
    Bertini {
        trials: usize,
        singular: usize,
        inapplicable: usize,
        singular_fraction: f64,
        max_singular_fraction: f64,
        within_threshold: bool,
    },
    Jet {
        samples: usize,
        rank_histogram: BTreeMap<usize, usize>,
        generic_fiber_dim: Option<i64>,
        base_fiber_dim: Option<i64>,
        dim_s: i64,
        dim_v: i64,
        margin: i64,
        stratification_holds: bool,
        fiber_jumps: Vec<Vec<String>>,
        base_anomalies: Vec<Vec<String>>,
    },
    Disc {
        members: usize,
        singular: usize,
        singular_fraction: f64,
        exhaustive: bool,
        bruteforce_checked: usize,
        mismatches: Vec<String>,
    },
    Linsys {
        vector_dim: usize,
        projective_dim: i64,
        condition_rank: usize,
    },
    Member {
        verdict: Verdict,
        points_checked: u64,
        singular: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRecord>,
    pub aggregates: Aggregates,
    pub runtime_ms: u64,
}

impl ExperimentReport {
    pub fn singular_fraction(&self) -> Option<f64> {
        match self.aggregates {
            Aggregates::Bertini { singular_fraction, .. }
            | Aggregates::Disc { singular_fraction, .. } => Some(singular_fraction),
            _ => None,
        }
    }
}

/// Whether the singular fraction at the larger prime is at most the one at
/// the smaller prime plus `slack`.
pub fn fraction_not_worse(smaller_p: &ExperimentReport, larger_p: &ExperimentReport, slack: f64) -> bool {
    match (smaller_p.singular_fraction(), larger_p.singular_fraction()) {
        (Some(a), Some(b)) => b <= a + slack,
        _ => false,
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match cfg.experiment {
        ExperimentKind::BertiniSample => run_bertini_experiment(cfg),
        ExperimentKind::JetSurvey => run_jet_survey(cfg),
        ExperimentKind::DiscDensity => run_disc_density(cfg),
        ExperimentKind::Linsys => run_linsys(cfg),
        ExperimentKind::CheckMember => run_check_member(cfg),
    }
}

fn finish(
    cfg: &ExperimentConfig,
    start: Instant,
    trials: Vec<TrialRecord>,
    aggregates: Aggregates,
) -> ExperimentReport {
    ExperimentReport {
        config: cfg.clone(),
        trials,
        aggregates,
        runtime_ms: if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 },
    }
}

fn kind_mismatch(cfg: &ExperimentConfig, expected: ExperimentKind) -> Result<()> {
    if cfg.experiment != expected {
        return Err(Error::Config(format!(
            "expected a {expected:?} config, got {:?}",
            cfg.experiment
        )));
    }
    cfg.validate()
}

/// Samples random members of the vanishing system and checks each section
/// `X ∩ H` for rational singular points.
pub fn run_bertini_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    kind_mismatch(cfg, ExperimentKind::BertiniSample)?;
    let points = VarietyPoints::enumerate(&cfg.variety_spec()?, cfg.prime()?, cfg.cap())?;
    run_bertini_on(cfg, &points)
}

/// As [`run_bertini_experiment`], reusing an enumeration of `X` over the
/// config's field.
pub fn run_bertini_on(cfg: &ExperimentConfig, points: &VarietyPoints) -> Result<ExperimentReport> {
    kind_mismatch(cfg, ExperimentKind::BertiniSample)?;
    let start = Instant::now();
    let p = cfg.prime()?;
    if points.p() != p || points.variety() != &cfg.variety_spec()? {
        return Err(Error::Config("enumerated variety does not match the config".into()));
    }
    let base = cfg.point_config()?;
    let l = LinearSystem::vanishing(&base, cfg.degree)?;
    if l.basis().is_empty() {
        return Err(Error::EmptySystem);
    }
    let records: Vec<BertiniTrial> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| bertini_trial(cfg, &l, points, t))
        .collect::<Result<_>>()?;
    let singular = records.iter().filter(|r| r.verdict == Verdict::Singular).count();
    let inapplicable = records.iter().filter(|r| r.verdict == Verdict::Inapplicable).count();
    let fraction = singular as f64 / records.len() as f64;
    let aggregates = Aggregates::Bertini {
        trials: records.len(),
        singular,
        inapplicable,
        singular_fraction: fraction,
        max_singular_fraction: cfg.thresholds.max_singular_fraction,
        within_threshold: fraction <= cfg.thresholds.max_singular_fraction,
    };
    Ok(finish(
        cfg,
        start,
        records.into_iter().map(TrialRecord::Bertini).collect(),
        aggregates,
    ))
}

fn bertini_trial(
    cfg: &ExperimentConfig,
    l: &LinearSystem,
    points: &VarietyPoints,
    t: usize,
) -> Result<BertiniTrial> {
    let seed = trial_seed(cfg.seed, t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (member, constructed_point) = match cfg.member_mode {
        MemberMode::Random => {
            let c = random_coefficients(&mut rng, l.field(), l.basis().len(), cfg.coeff_bound);
            (l.combination(&c)?, None)
        }
        MemberMode::Tangent => {
            let x = sample_fp_point(points, l.basepoints(), &mut rng)?;
            (singular_member_at(l, points.variety(), &x, &mut rng, cfg.coeff_bound)?, Some(x.to_strings()))
        }
    };
    let report = points.check(&member)?;
    Ok(BertiniTrial {
        trial: t,
        seed,
        member: member.to_string(),
        verdict: report.verdict,
        points_checked: report.points_checked,
        singular_points: report.singular_points,
        constructed_point,
        reason: report.reason,
    })
}

/// A random member of `l` whose jet at `x` vanishes.
pub fn singular_member_at(
    l: &LinearSystem,
    variety: &VarietySpec,
    x: &ProjPoint,
    rng: &mut impl Rng,
    bound: i64,
) -> Result<MultiPoly> {
    let jet = xi_matrix(l, variety, x)?;
    let kernel = jet.matrix.transpose().kernel_basis();
    if kernel.is_empty() {
        return Err(Error::Config(format!("no member of the system is singular at {x}")));
    }
    let field = l.field();
    let weights = random_coefficients(rng, field, kernel.len(), bound);
    let mut coeffs = vec![field.zero(); l.basis().len()];
    for (w, v) in weights.iter().zip(&kernel) {
        for (c, vi) in coeffs.iter_mut().zip(v) {
            *c = &*c + &(w * vi);
        }
    }
    l.combination(&coeffs)
}

/// A uniformly chosen rational point of `X` that is not a base point.
fn sample_fp_point(
    points: &VarietyPoints,
    base: &PointConfig,
    rng: &mut impl Rng,
) -> Result<ProjPoint> {
    let field = Field::Prime(points.p());
    let to_point = |x: &[u64]| {
        ProjPoint::new(x.iter().map(|&v| field.from_u64(v)).collect())
    };
    match points.points() {
        Some(list) => {
            let candidates: Vec<&Vec<u64>> = list
                .iter()
                .filter(|x| to_point(x).is_ok_and(|pt| !base.contains(&pt)))
                .collect();
            if candidates.is_empty() {
                return Err(Error::Config("X has no rational points besides the base points".into()));
            }
            to_point(candidates[rng.gen_range(0..candidates.len())])
        }
        None => loop {
            let n1 = points.variety().n() + 1;
            let x: Vec<u64> = (0..n1).map(|_| rng.gen_range(0..points.p())).collect();
            if x.iter().all(|&v| v == 0) {
                continue;
            }
            let pt = to_point(&x)?;
            if !base.contains(&pt) {
                return Ok(pt);
            }
        },
    }
}

/// A rational point of `X` over `Q` away from the base points. Works for
/// projective space and for quadric hypersurfaces with a known rational
/// point, by intersecting `X` with random lines through that point.
pub fn sample_rational_point(
    variety: &VarietySpec,
    base: &PointConfig,
    rng: &mut impl Rng,
    bound: i64,
) -> Result<ProjPoint> {
    let field = variety.field();
    let n1 = variety.n() + 1;
    let random_vec = |rng: &mut dyn rand::RngCore| -> Vec<Scalar> {
        (0..n1).map(|_| field.from_i64(rng.gen_range(-bound..=bound))).collect()
    };
    match variety.generators() {
        [] => loop {
            let v = random_vec(rng);
            if let Ok(x) = ProjPoint::new(v) {
                if !base.contains(&x) {
                    return Ok(x);
                }
            }
        },
        [g] if g.form_degree()? == 2 => {
            let anchor = rational_anchor(variety, base)?;
            let grad: Vec<Scalar> = g
                .gradient()
                .iter()
                .map(|d| d.eval(anchor.coords()))
                .collect::<Result<_>>()?;
            for _ in 0..10_000 {
                let v = random_vec(rng);
                let gv = g.eval(&v)?;
                let slope = grad.iter().zip(&v).fold(field.zero(), |acc, (a, b)| acc + a * b);
                if gv.is_zero() || slope.is_zero() {
                    continue;
                }
                // g(anchor + t v) = t (slope + t g(v))
                let t = -slope.checked_div(&gv)?;
                let coords: Vec<Scalar> = anchor
                    .coords()
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| a + &(&t * b))
                    .collect();
                if let Ok(x) = ProjPoint::new(coords) {
                    if !base.contains(&x) {
                        return Ok(x);
                    }
                }
            }
            Err(Error::Config("could not sample a rational point of X".into()))
        }
        _ => Err(Error::Config(
            "rational sampling supports projective space and quadric hypersurfaces; use a prime field".into(),
        )),
    }
}

fn rational_anchor(variety: &VarietySpec, base: &PointConfig) -> Result<ProjPoint> {
    for x in base.points() {
        if variety.contains(x)? {
            return Ok(x.clone());
        }
    }
    // small search box
    let n1 = variety.n() + 1;
    let field = variety.field();
    let mut digits = vec![-2i64; n1];
    loop {
        if let Ok(x) = ProjPoint::new(digits.iter().map(|&v| field.from_i64(v)).collect()) {
            if variety.contains(&x)? {
                return Ok(x);
            }
        }
        let mut k = 0;
        loop {
            if k == n1 {
                return Err(Error::Config("no small rational point on X".into()));
            }
            digits[k] += 1;
            if digits[k] <= 2 {
                break;
            }
            digits[k] = -2;
            k += 1;
        }
    }
}

/// Jet ranks at every base point and at `trials` sampled points of `X`,
/// with the derived fiber and incidence dimensions.
pub fn run_jet_survey(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    kind_mismatch(cfg, ExperimentKind::JetSurvey)?;
    let start = Instant::now();
    let variety = cfg.variety_spec()?;
    let base = cfg.point_config()?;
    let l = LinearSystem::vanishing(&base, cfg.degree)?;
    let dim_v = l.dimension()?.projective_dim as i64;
    let enumerated = match cfg.field {
        Field::Prime(p) => Some(VarietyPoints::enumerate(&variety, p, cfg.cap())?),
        Field::Rational => None,
    };
    let samples: Vec<PointJet> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, t));
            let x = match &enumerated {
                Some(points) => sample_fp_point(points, &base, &mut rng)?,
                None => sample_rational_point(&variety, &base, &mut rng, cfg.coeff_bound)?,
            };
            if !variety.contains(&x)? {
                return Err(Error::NotOnVariety(x.to_string()));
            }
            point_jet(&l, &variety, &x)
        })
        .collect::<Result<_>>()?;
    let mut jets = base
        .points()
        .iter()
        .map(|x| point_jet(&l, &variety, x))
        .collect::<Result<Vec<_>>>()?;
    jets.extend(samples);
    let summary = summarize(jets, dim_v, variety.dim());
    let mut rank_histogram = BTreeMap::new();
    for pj in &summary.points {
        *rank_histogram.entry(pj.rank).or_insert(0) += 1;
    }
    let fiber = |base_side: bool| {
        summary
            .points
            .iter()
            .filter(|pj| pj.is_base_point == base_side)
            .map(|pj| pj.fiber_dim)
            .max()
    };
    let aggregates = Aggregates::Jet {
        samples: summary.points.len(),
        rank_histogram,
        generic_fiber_dim: fiber(false),
        base_fiber_dim: fiber(true),
        dim_s: summary.dim_s,
        dim_v: summary.dim_v,
        margin: summary.margin,
        stratification_holds: summary.fiber_jumps.is_empty() && summary.base_anomalies.is_empty(),
        fiber_jumps: summary.fiber_jumps,
        base_anomalies: summary.base_anomalies,
    };
    let records = summary
        .points
        .into_iter()
        .enumerate()
        .map(|(trial, jet)| TrialRecord::Jet(JetTrial { trial, jet }))
        .collect();
    Ok(finish(cfg, start, records, aggregates))
}

/// Fraction of quadrics in the system with vanishing discriminant. With
/// `exhaustive`, every member up to scalar is visited and cross-checked by
/// brute force; with a `form`, only that quadric is examined.
pub fn run_disc_density(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    kind_mismatch(cfg, ExperimentKind::DiscDensity)?;
    let start = Instant::now();
    let field = cfg.field;
    let members: Vec<MultiPoly> = if let Some(form) = &cfg.form {
        vec![cfg.parse_form(form)?]
    } else {
        let l = LinearSystem::vanishing(&cfg.point_config()?, 2)?;
        if l.basis().is_empty() {
            return Err(Error::EmptySystem);
        }
        let p = cfg.prime()?;
        if cfg.exhaustive {
            let k = l.basis().len();
            let count = projective_point_count(k - 1, p);
            if count > cfg.cap() {
                return Err(Error::EnumerationCap { points: count, cap: cfg.cap() });
            }
            projective_points_where(k - 1, p, |_| true)
                .iter()
                .map(|c| {
                    let coeffs: Vec<Scalar> = c.iter().map(|&v| field.from_u64(v)).collect();
                    l.combination(&coeffs)
                })
                .collect::<Result<_>>()?
        } else {
            (0..cfg.trials)
                .map(|t| l.random_member_bounded(trial_seed(cfg.seed, t), cfg.coeff_bound))
                .collect::<Result<_>>()?
        }
    };
    let bruteforce = field.is_finite() && (cfg.exhaustive || cfg.form.is_some());
    let records: Vec<DiscTrial> = members
        .par_iter()
        .enumerate()
        .map(|(trial, h)| {
            let det_zero = quadric_is_singular(h)?;
            let bruteforce_singular = if bruteforce {
                let p = field.characteristic();
                Some(!singular_points_bruteforce_capped(h, p, cfg.cap())?.is_empty())
            } else {
                None
            };
            Ok(DiscTrial {
                trial,
                member: h.to_string(),
                det_zero,
                bruteforce_singular,
            })
        })
        .collect::<Result<_>>()?;
    let singular = records.iter().filter(|r| r.det_zero).count();
    let aggregates = Aggregates::Disc {
        members: records.len(),
        singular,
        singular_fraction: singular as f64 / records.len() as f64,
        exhaustive: cfg.exhaustive,
        bruteforce_checked: records.iter().filter(|r| r.bruteforce_singular.is_some()).count(),
        mismatches: records
            .iter()
            .filter(|r| r.bruteforce_singular.is_some_and(|b| b != r.det_zero))
            .map(|r| r.member.clone())
            .collect(),
    };
    Ok(finish(
        cfg,
        start,
        records.into_iter().map(TrialRecord::Disc).collect(),
        aggregates,
    ))
}

/// The vanishing system itself, one record per basis member.
pub fn run_linsys(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    kind_mismatch(cfg, ExperimentKind::Linsys)?;
    let start = Instant::now();
    let l = LinearSystem::vanishing(&cfg.point_config()?, cfg.degree)?;
    let records = l
        .basis()
        .iter()
        .enumerate()
        .map(|(index, h)| TrialRecord::Basis(BasisTrial { index, form: h.to_string() }))
        .collect();
    let aggregates = Aggregates::Linsys {
        vector_dim: l.vector_dim(),
        projective_dim: l.vector_dim() as i64 - 1,
        condition_rank: l.condition_rank(),
    };
    Ok(finish(cfg, start, records, aggregates))
}

/// Smoothness of `X ∩ {form = 0}` at the rational points over `F_p`.
pub fn run_check_member(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    kind_mismatch(cfg, ExperimentKind::CheckMember)?;
    let start = Instant::now();
    let variety = cfg.variety_spec()?;
    let h = cfg.parse_form(cfg.form.as_deref().unwrap_or_default())?;
    let report = smooth_intersection_check_capped(&variety, &h, cfg.prime()?, cfg.cap(), cfg.timing)?;
    let aggregates = Aggregates::Member {
        verdict: report.verdict,
        points_checked: report.points_checked,
        singular: report.singular_points.len(),
    };
    Ok(finish(cfg, start, vec![TrialRecord::Member(report)], aggregates))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Format(format!("unknown report format {other:?}"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        })
    }
}

fn join_points(points: &[Vec<String>]) -> String {
    points.iter().map(|x| x.join(":")).collect::<Vec<_>>().join(";")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn verdict_str(v: Verdict) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|s| s.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn csv_header(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::BertiniSample => &[
            "trial",
            "seed",
            "member",
            "verdict",
            "points_checked",
            "singular_points",
            "constructed_point",
        ],
        ExperimentKind::JetSurvey => &[
            "trial",
            "point",
            "is_base_point",
            "rank",
            "fiber_dim",
            "constant_column_zero",
        ],
        ExperimentKind::DiscDensity => &["trial", "member", "det_zero", "bruteforce_singular"],
        ExperimentKind::Linsys => &["index", "form"],
        ExperimentKind::CheckMember => &[
            "form",
            "verdict",
            "points_checked",
            "singular_points",
            "field",
            "witness",
        ],
    }
}

fn csv_row(record: &TrialRecord) -> Vec<String> {
    match record {
        TrialRecord::Bertini(r) => vec![
            r.trial.to_string(),
            r.seed.to_string(),
            r.member.clone(),
            verdict_str(r.verdict),
            r.points_checked.to_string(),
            join_points(&r.singular_points),
            r.constructed_point.as_ref().map(|x| x.join(":")).unwrap_or_default(),
        ],
        TrialRecord::Jet(r) => vec![
            r.trial.to_string(),
            r.jet.point.join(":"),
            r.jet.is_base_point.to_string(),
            r.jet.rank.to_string(),
            r.jet.fiber_dim.to_string(),
            r.jet.constant_column_zero.to_string(),
        ],
        TrialRecord::Disc(r) => vec![
            r.trial.to_string(),
            r.member.clone(),
            r.det_zero.to_string(),
            opt(&r.bruteforce_singular),
        ],
        TrialRecord::Basis(r) => vec![r.index.to_string(), r.form.clone()],
        TrialRecord::Member(r) => vec![
            r.form.clone(),
            verdict_str(r.verdict),
            r.points_checked.to_string(),
            join_points(&r.singular_points),
            r.field.to_string(),
            r.witness.as_ref().map(|x| x.join(":")).unwrap_or_default(),
        ],
    }
}

/// Serializes a report. JSON carries everything; CSV has a header and one
/// row per trial record.
pub fn render_report(report: &ExperimentReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Format(e.to_string());
            w.write_record(csv_header(report.config.experiment)).map_err(csv_err)?;
            for r in &report.trials {
                w.write_record(csv_row(r)).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
        }
    }
}

/// Writes the report to `out`, or to stdout when `out` is `None`.
pub fn emit_report(report: &ExperimentReport, format: ReportFormat, out: Option<&Path>) -> Result<()> {
    let text = render_report(report, format)?;
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
