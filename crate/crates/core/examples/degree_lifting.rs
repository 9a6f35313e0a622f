//! Multiplying a linear system by every monomial of a higher degree.

use bertini::linsys::LinearSystem;
use bertini::{Field, PointConfig, ProjPoint};

fn main() -> bertini::Result<()> {
    let f = Field::prime(101)?;
    let cfg = PointConfig::new(
        3,
        f,
        vec![ProjPoint::from_i64(f, &[1, 2, 3, 4])?, ProjPoint::from_i64(f, &[0, 1, -1, 2])?],
    )?;
    let l2 = LinearSystem::vanishing(&cfg, 2)?;
    for a in 3..=5 {
        let lifted = l2.lift_degree(a)?;
        let direct = LinearSystem::vanishing(&cfg, a)?;
        println!(
            "degree {a}: lifted dim {}, direct dim {}, same span {}",
            lifted.vector_dim(),
            direct.vector_dim(),
            lifted.same_span(&direct)
        );
    }
    if let Err(e) = l2.lift_degree(2) {
        println!("lift to the same degree: {e}");
    }
    Ok(())
}
