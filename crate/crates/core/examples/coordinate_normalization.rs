//! Move a point configuration so the first point is (1:0:...:0) and no
//! point lies on x0 = 0.

use bertini::{Field, PointConfig, ProjPoint};

fn main() -> bertini::Result<()> {
    let q = Field::Rational;
    let cfg = PointConfig::new(
        3,
        q,
        vec![
            ProjPoint::from_i64(q, &[0, 1, 2, 3])?,
            ProjPoint::from_i64(q, &[1, -1, 0, 4])?,
            ProjPoint::from_i64(q, &[2, 0, 1, 0])?,
        ],
    )?;
    let c = cfg.avoiding_hyperplane()?;
    println!("avoiding hyperplane: {:?}", c.iter().map(|v| v.to_string()).collect::<Vec<_>>());

    let t = cfg.normalize_coordinates()?;
    println!("T =\n{t}");
    println!("det T = {}", t.det()?);
    for p in cfg.transform(&t)?.points() {
        println!("  {:?}", p.to_strings());
    }
    Ok(())
}
