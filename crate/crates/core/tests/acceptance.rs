//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use bertini::harness::{
    fraction_not_worse, render_report, run_bertini_on, run_experiment, Aggregates,
    ExperimentConfig, ExperimentKind, MemberMode, ReportFormat, TrialRecord,
};
use bertini::jets::{fiber_dimension, xi_matrix, xi_rank};
use bertini::linsys::LinearSystem;
use bertini::poly::EulerVerdict;
use bertini::smoothness::{
    hyperplane_form, projective_points_where, quadric_is_singular, recheck_witness,
    singular_points_bruteforce, smooth_intersection_check, tangent_hyperplane,
    tangent_hyperplane_test, VarietyPoints, Verdict, DEFAULT_ENUMERATION_CAP,
};
use bertini::{Field, MultiPoly, Scalar};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:?}, limit {limit:?}"));
    }
    Ok(took)
}

/// 1. Dimension of the vanishing system through general points.
fn dimension_formulas() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut cases = 0;
    for n in 2..=4usize {
        for a in 2..=3u32 {
            for q_pts in 1..=n + 1 {
                let cfg = general_points(&mut rng, q(), n, q_pts);
                let l = LinearSystem::vanishing(&cfg, a).map_err(|e| e.to_string())?;
                let expected = binomial((n as u64) + a as u64, n as u64) - q_pts as u64;
                ensure!(
                    l.vector_dim() as u64 == expected,
                    "n={n} a={a} q={q_pts}: dim {} expected {expected}",
                    l.vector_dim()
                );
                if n == 3 && a == 2 {
                    // (n^2 + 3n)/2 - (q - 1)
                    let closed = (n * n + 3 * n) / 2 - (q_pts - 1);
                    ensure!(l.vector_dim() == closed, "closed form mismatch at q={q_pts}");
                    if q_pts == 1 {
                        ensure!(l.vector_dim() == 9, "one point in P^3: {}", l.vector_dim());
                    }
                }
                cases += 1;
            }
        }
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!("{cases} configurations, zero tolerance, {took:.2?}"))
}

/// 2. Discriminant against brute force for every plane quadric over F_3, F_5.
fn discriminant_exhaustive() -> Outcome {
    let start = Instant::now();
    let monomials = bertini::linsys::monomial_basis(2, 2);
    let mut summary = Vec::new();
    for p in [3u64, 5] {
        let field = fp(p);
        let mut singular = 0;
        let coeff_vectors = projective_points_where(monomials.len() - 1, p, |_| true);
        for c in &coeff_vectors {
            let coeffs: Vec<Scalar> = c.iter().map(|&v| field.from_u64(v)).collect();
            let h = MultiPoly::from_coefficients(field, 3, &monomials, &coeffs)
                .map_err(|e| e.to_string())?;
            let by_det = quadric_is_singular(&h).map_err(|e| e.to_string())?;
            let by_search = !singular_points_bruteforce(&h, p)
                .map_err(|e| e.to_string())?
                .is_empty();
            ensure!(by_det == by_search, "disagreement over F_{p} on {h}");
            singular += by_det as usize;
        }
        summary.push(format!("F_{p}: {}/{} singular", singular, coeff_vectors.len()));
    }
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!("{}, {took:.2?}", summary.join(", ")))
}

/// 3. Jet ranks on the quadric surface with two base points.
fn jet_stratification() -> Outcome {
    let start = Instant::now();
    let x = quadric(q());
    let base = quadric_base_points(q());
    ensure!(base.general_position().unwrap(), "base points not in general position");
    let l = LinearSystem::vanishing(&base, 2).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut sampled = 0;
    while sampled < 100 {
        let pt = quadric_point(&mut rng, q());
        if base.contains(&pt) {
            continue;
        }
        let rank = xi_rank(&l, &x, &pt).map_err(|e| e.to_string())?;
        ensure!(rank == 3, "rank {rank} at non-base point {pt}");
        let fiber = fiber_dimension(&l, &x, &pt).map_err(|e| e.to_string())?;
        ensure!(fiber == 4, "fiber {fiber} at {pt}");
        sampled += 1;
    }
    for b in base.points() {
        let jet = xi_matrix(&l, &x, b).map_err(|e| e.to_string())?;
        ensure!(jet.rank() == 2, "rank {} at base point {b}", jet.rank());
        ensure!(jet.constant_column_is_zero(), "nonzero constant column at {b}");
        let fiber = fiber_dimension(&l, &x, b).map_err(|e| e.to_string())?;
        ensure!(fiber == 5, "fiber {fiber} at base point {b}");
    }
    // the same numbers through the survey runner
    let mut cfg = ExperimentConfig::new(ExperimentKind::JetSurvey, q())
        .with_variety(&x)
        .with_points(&base);
    cfg.trials = 100;
    cfg.seed = 3;
    let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
    let Aggregates::Jet { dim_s, dim_v, margin, stratification_holds, .. } = report.aggregates else {
        return Err("wrong aggregate kind".into());
    };
    ensure!(
        (dim_s, dim_v, margin) == (6, 7, 1),
        "dim_S {dim_s}, dim_V {dim_v}, margin {margin}"
    );
    ensure!(stratification_holds, "survey saw an unexpected rank");
    let took = within(Duration::from_secs(10), start)?;
    Ok(format!("ranks 3/2, fibers 4/5, dim_S 6, dim_V 7, margin 1, {took:.2?}"))
}

/// 4. `x_i^(a-2) h` stays in the degree-a system.
fn degree_lifting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checks = 0;
    for q_pts in 1..=2 {
        let cfg = general_points(&mut rng, q(), 3, q_pts);
        let l2 = LinearSystem::vanishing(&cfg, 2).map_err(|e| e.to_string())?;
        for a in [3u32, 4] {
            let la = LinearSystem::vanishing(&cfg, a).map_err(|e| e.to_string())?;
            for h in l2.basis() {
                for i in 0..=3 {
                    let xi = MultiPoly::var(q(), 4, i).unwrap().pow(a - 2).unwrap();
                    let g = xi.mul(h).unwrap();
                    ensure!(la.contains(&g).unwrap(), "x{i}^{} * ({h}) not in degree {a}", a - 2);
                    checks += 1;
                }
            }
            l2.lift_degree(a).map_err(|e| e.to_string())?;
        }
    }
    Ok(format!("{checks} memberships"))
}

/// 5. Monte Carlo singular fractions on the quadric surface.
fn monte_carlo_bertini() -> Outcome {
    let start = Instant::now();
    let x = quadric(q());
    let base = quadric_base_points(q());
    let mut fractions = Vec::new();
    let mut reports = std::collections::BTreeMap::new();
    for p in [31u64, 101, 311] {
        let points = VarietyPoints::enumerate(&x, p, DEFAULT_ENUMERATION_CAP)
            .map_err(|e| e.to_string())?;
        for seed in [1u64, 2, 3] {
            let mut cfg = ExperimentConfig::new(ExperimentKind::BertiniSample, fp(p))
                .with_variety(&x)
                .with_points(&base);
            cfg.trials = 500;
            cfg.seed = seed;
            let report = run_bertini_on(&cfg, &points).map_err(|e| e.to_string())?;
            // every singular verdict must carry witnesses that re-fail
            for t in report.trials.iter().take(100) {
                let TrialRecord::Bertini(b) = t else { continue };
                if b.verdict == Verdict::Singular {
                    let h = MultiPoly::parse(&b.member, 4, fp(p)).unwrap();
                    ensure!(
                        recheck_witness(&x, &h, &b.singular_points[0]).unwrap(),
                        "witness of trial {} does not re-fail",
                        b.trial
                    );
                }
            }
            reports.insert((p, seed), report);
        }
    }
    for seed in [1u64, 2, 3] {
        let low = &reports[&(31, seed)];
        let mid = &reports[&(101, seed)];
        let high = &reports[&(311, seed)];
        let f101 = mid.singular_fraction().unwrap();
        ensure!(f101 <= 0.10, "seed {seed}: fraction {f101} at p=101");
        ensure!(
            fraction_not_worse(low, high, 0.02),
            "seed {seed}: p=311 fraction {} vs p=31 fraction {}",
            high.singular_fraction().unwrap(),
            low.singular_fraction().unwrap()
        );
        fractions.push(format!(
            "seed {seed}: {:.3}/{:.3}/{:.3}",
            low.singular_fraction().unwrap(),
            f101,
            high.singular_fraction().unwrap()
        ));
    }
    let took = within(Duration::from_secs(120), start)?;
    Ok(format!("p=31/101/311 fractions {}, {took:.2?}", fractions.join(", ")))
}

/// 6. Tangent hyperplanes are singular exactly at their point of tangency.
fn tangency_witness() -> Outcome {
    let p = 101;
    let field = fp(p);
    let x = quadric(field);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let pt = quadric_point(&mut rng, field);
        let c = tangent_hyperplane(&x, &pt).map_err(|e| e.to_string())?;
        ensure!(tangent_hyperplane_test(&x, &c, &pt).unwrap(), "constructed plane not tangent at {pt}");
        let h = hyperplane_form(field, &c).unwrap();
        let r = smooth_intersection_check(&x, &h, p).map_err(|e| e.to_string())?;
        ensure!(r.verdict == Verdict::Singular, "tangent plane at {pt}: {:?}", r.verdict);
        ensure!(r.singular_points.contains(&pt.to_strings()), "{pt} missing from witnesses");

        // a plane through pt that is not tangent there
        let chart = pt.chart();
        let c = loop {
            let mut c: Vec<Scalar> = (0..4).map(|_| field.from_u64(rng.gen_range(0..p))).collect();
            let dot = c.iter().zip(pt.coords()).fold(field.zero(), |acc, (a, b)| acc + a * b);
            c[chart] = &c[chart] - &dot;
            if !tangent_hyperplane_test(&x, &c, &pt).unwrap() {
                break c;
            }
        };
        let h = hyperplane_form(field, &c).unwrap();
        let r = smooth_intersection_check(&x, &h, p).map_err(|e| e.to_string())?;
        ensure!(
            !r.singular_points.contains(&pt.to_strings()),
            "non-tangent plane flagged singular at {pt}"
        );
    }
    Ok("20 points over F_101, tangent planes singular at the witness, others smooth there".into())
}

/// 7. Euler, rank-nullity, parser round trip, coordinate equivariance.
fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // Euler on 1000 forms
    for k in 0..1000 {
        let field = if k % 2 == 0 { q() } else { fp([5, 7, 101][k % 3]) };
        let nvars = rng.gen_range(1..=4);
        let degree = rng.gen_range(1..=4);
        let h = random_form(&mut rng, field, nvars, degree);
        let verdict = h.euler_check().map_err(|e| e.to_string())?;
        let expected = match field {
            Field::Prime(p) if (degree as u64).is_multiple_of(p) => EulerVerdict::Inapplicable,
            _ => EulerVerdict::Holds,
        };
        ensure!(verdict == expected || h.is_zero(), "Euler on {h}: {verdict:?}");
    }
    // rank-nullity on 500 matrices
    for k in 0..500 {
        let field = if k % 2 == 0 { q() } else { fp(7) };
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let m = random_matrix(&mut rng, field, r, c);
        let kernel = m.kernel_basis();
        ensure!(m.rank() + kernel.len() == c, "rank-nullity fails on\n{m}");
        for v in &kernel {
            ensure!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero), "bad kernel vector");
        }
    }
    // parser round trip on 100 forms
    for k in 0..100 {
        let field = if k % 2 == 0 { q() } else { fp(11) };
        let nvars = rng.gen_range(1..=4);
        let degree = rng.gen_range(1..=3);
        let h = random_form(&mut rng, field, nvars, degree);
        if h.is_zero() {
            continue;
        }
        let back = MultiPoly::parse(&h.to_string(), nvars, field).map_err(|e| e.to_string())?;
        ensure!(back == h, "round trip of {h}");
    }
    // equivariance under 20 invertible changes
    let x = quadric(q());
    let base = quadric_base_points(q());
    let l = LinearSystem::vanishing(&base, 2).unwrap();
    for _ in 0..20 {
        let s = random_invertible(&mut rng, q(), 4);
        let count = rng.gen_range(1..=4);
        let cfg = general_points(&mut rng, q(), 3, count);
        let moved = cfg.transform(&s).unwrap();
        ensure!(
            cfg.general_position().unwrap() == moved.general_position().unwrap(),
            "general position not invariant"
        );
        let direct = LinearSystem::vanishing(&moved, 2).unwrap();
        let carried = LinearSystem::vanishing(&cfg, 2).unwrap().moved_by(&s).unwrap();
        ensure!(direct.same_span(&carried), "vanishing system not equivariant");

        let sx = x.moved_by(&s).unwrap();
        let sl = l.moved_by(&s).unwrap();
        for pt in [quadric_point(&mut rng, q()), base.points()[0].clone()] {
            let spt = pt.transform(&s).unwrap();
            ensure!(sx.contains(&spt).unwrap(), "moved point off the moved quadric");
            ensure!(
                xi_rank(&l, &x, &pt).unwrap() == xi_rank(&sl, &sx, &spt).unwrap(),
                "jet rank not invariant at {pt}"
            );
        }
    }
    Ok("Euler 1000, rank-nullity 500, round trip 100, equivariance 20".into())
}

/// 8. Byte-identical reports for identical config and seed.
fn determinism() -> Outcome {
    let x = quadric(q());
    let base = quadric_base_points(q());
    let mut configs = Vec::new();
    let mut bertini = ExperimentConfig::new(ExperimentKind::BertiniSample, fp(101))
        .with_variety(&x)
        .with_points(&base);
    bertini.trials = 200;
    bertini.seed = 11;
    configs.push(bertini.clone());
    bertini.member_mode = MemberMode::Tangent;
    bertini.trials = 20;
    configs.push(bertini);
    for field in [q(), fp(31)] {
        let mut jets = ExperimentConfig::new(ExperimentKind::JetSurvey, field)
            .with_variety(&x)
            .with_points(&base);
        jets.trials = 30;
        jets.seed = 5;
        configs.push(jets);
    }
    let mut disc = ExperimentConfig::new(ExperimentKind::DiscDensity, fp(5));
    disc.n = Some(2);
    disc.exhaustive = true;
    configs.push(disc);
    let mut sampled = ExperimentConfig::new(ExperimentKind::DiscDensity, fp(101));
    sampled.n = Some(3);
    sampled.trials = 200;
    sampled.seed = 2;
    configs.push(sampled);
    let mut linsys = ExperimentConfig::new(ExperimentKind::Linsys, q()).with_points(&base);
    linsys.degree = 3;
    configs.push(linsys);
    let mut member = ExperimentConfig::new(ExperimentKind::CheckMember, fp(31)).with_variety(&x);
    member.form = Some("x0*x1 + x2^2 - x3^2".into());
    configs.push(member);

    for cfg in &configs {
        for format in [ReportFormat::Json, ReportFormat::Csv] {
            let a = render_report(&run_experiment(cfg).map_err(|e| e.to_string())?, format).unwrap();
            let b = render_report(&run_experiment(cfg).map_err(|e| e.to_string())?, format).unwrap();
            ensure!(a == b, "{:?} report differs between runs ({format})", cfg.experiment);
        }
    }
    Ok(format!("{} experiment configs, JSON and CSV", configs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 dimension formulas", dimension_formulas),
        ("2 discriminant vs brute force", discriminant_exhaustive),
        ("3 jet stratification", jet_stratification),
        ("4 degree lifting", degree_lifting),
        ("5 monte carlo bertini", monte_carlo_bertini),
        ("6 tangency witness", tangency_witness),
        ("7 property suites", property_suites),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = std::panic::catch_unwind(run)
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
