//! A tangent hyperplane cuts a singular section; a general one does not.

use bertini::smoothness::{
    hyperplane_form, smooth_intersection_check, tangent_hyperplane, tangent_hyperplane_test,
};
use bertini::{Field, MultiPoly, ProjPoint, VarietySpec};

fn main() -> bertini::Result<()> {
    let f = Field::prime(13)?;
    let x = VarietySpec::hypersurface("quadric", MultiPoly::parse("x0*x3 - x1*x2", 4, f)?)?;
    let p = ProjPoint::from_i64(f, &[1, 2, 3, 6])?;
    println!("on X: {}", x.contains(&p)?);

    let c = tangent_hyperplane(&x, &p)?;
    let tangent = hyperplane_form(f, &c)?;
    println!("tangent plane: {tangent}, tangent: {}", tangent_hyperplane_test(&x, &c, &p)?);
    let report = smooth_intersection_check(&x, &tangent, 13)?;
    println!("  verdict {:?}, witnesses {:?}", report.verdict, report.singular_points);

    let general = MultiPoly::parse("x0 + x1 + x2 + 2*x3", 4, f)?;
    let report = smooth_intersection_check(&x, &general, 13)?;
    println!("{general}: verdict {:?}", report.verdict);
    Ok(())
}
