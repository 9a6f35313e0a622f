//! Fraction of random members whose section of the quadric surface is
//! singular at some F_p-point, for growing p.

use bertini::harness::{run_experiment, ExperimentConfig, ExperimentKind};
use bertini::{Field, MultiPoly, PointConfig, ProjPoint, VarietySpec};

fn main() -> bertini::Result<()> {
    let q = Field::Rational;
    let x = VarietySpec::hypersurface("quadric", MultiPoly::parse("x0*x3 - x1*x2", 4, q)?)?;
    let base = PointConfig::new(
        3,
        q,
        vec![ProjPoint::from_i64(q, &[1, 0, 0, 0])?, ProjPoint::from_i64(q, &[0, 0, 0, 1])?],
    )?;
    for p in [11, 31, 101] {
        let mut cfg = ExperimentConfig::new(ExperimentKind::BertiniSample, Field::prime(p)?)
            .with_variety(&x)
            .with_points(&base);
        cfg.trials = 200;
        cfg.seed = 1;
        let report = run_experiment(&cfg)?;
        println!("p = {p:>3}: singular fraction {:.3}", report.singular_fraction().unwrap_or(0.0));
    }
    Ok(())
}
