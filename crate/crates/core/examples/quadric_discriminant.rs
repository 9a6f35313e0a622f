//! Singular quadrics: the determinant test against brute force over F_p.

use bertini::smoothness::{quadric_is_singular, quadric_matrix, singular_points_bruteforce};
use bertini::{Field, MultiPoly};

fn main() -> bertini::Result<()> {
    let f7 = Field::prime(7)?;
    for text in ["x0*x3 - x1*x2", "x0^2 + x1^2 - x2^2", "x0*x1 + x2^2 + 3*x3^2"] {
        let h = MultiPoly::parse(text, 4, f7)?;
        let sing = singular_points_bruteforce(&h, 7)?;
        println!("{text}");
        println!("{}", quadric_matrix(&h)?);
        println!(
            "  det zero: {}, singular points over F_7: {}",
            quadric_is_singular(&h)?,
            sing.len()
        );
        for p in sing.iter().take(3) {
            println!("    {:?}", p.to_strings());
        }
    }
    Ok(())
}
