//! Jet-map ranks on the quadric surface x0*x3 = x1*x2 for quadrics through
//! two of its points.

use bertini::jets::{incidence_dimension, point_jet};
use bertini::linsys::LinearSystem;
use bertini::{Field, MultiPoly, PointConfig, ProjPoint, VarietySpec};

fn main() -> bertini::Result<()> {
    let q = Field::Rational;
    let x = VarietySpec::hypersurface("quadric", MultiPoly::parse("x0*x3 - x1*x2", 4, q)?)?;
    let base = PointConfig::new(
        3,
        q,
        vec![ProjPoint::from_i64(q, &[1, 0, 0, 0])?, ProjPoint::from_i64(q, &[0, 0, 0, 1])?],
    )?;
    let l = LinearSystem::vanishing(&base, 2)?;

    // (s:t) x (u:v) -> (su : sv : tu : tv)
    let mut sample: Vec<ProjPoint> = base.points().to_vec();
    for (s, t, u, v) in [(1, 2, 3, -1), (2, -1, 1, 1), (5, 3, -2, 7)] {
        sample.push(ProjPoint::from_i64(q, &[s * u, s * v, t * u, t * v])?);
    }
    for p in &sample {
        let jet = point_jet(&l, &x, p)?;
        println!(
            "{:?} base={} rank={} fiber={}",
            p.to_strings(),
            jet.is_base_point,
            jet.rank,
            jet.fiber_dim
        );
    }
    let inc = incidence_dimension(&l, &x, &sample)?;
    println!("dim S = {}, dim L = {}, margin = {}", inc.dim_s, inc.dim_v, inc.margin);
    Ok(())
}
