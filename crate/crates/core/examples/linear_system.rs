//! Quadrics in P^3 through two points: basis, dimension, a random member.

use bertini::linsys::LinearSystem;
use bertini::{Field, PointConfig, ProjPoint};

fn main() -> bertini::Result<()> {
    let q = Field::Rational;
    let points = vec![
        ProjPoint::from_i64(q, &[1, 0, 0, 0])?,
        ProjPoint::from_i64(q, &[0, 0, 0, 1])?,
    ];
    let cfg = PointConfig::new(3, q, points)?;
    println!("general position: {}", cfg.general_position()?);

    let l = LinearSystem::vanishing(&cfg, 2)?;
    let dim = l.dimension()?;
    println!("vector dim {}, projective dim {}", dim.vector_dim, dim.projective_dim);
    for (i, f) in l.basis().iter().enumerate() {
        println!("  f{i} = {f}");
    }

    let h = l.random_member(7)?;
    println!("member (seed 7): {h}");
    println!("member of L: {}", l.contains(&h)?);

    let cubics = l.lift_degree(3)?;
    println!("lifted to degree 3: vector dim {}", cubics.vector_dim());
    Ok(())
}
