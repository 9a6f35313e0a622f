//! Parse, differentiate, evaluate and dehomogenize forms.

use bertini::{Field, MultiPoly};

fn main() -> bertini::Result<()> {
    let q = Field::Rational;
    let h = MultiPoly::parse("3*x0^2*x1 - 1/2*x1*x2^2 + x2^3", 3, q)?;
    println!("h = {h}");
    println!("homogeneous: {:?}", h.homogeneous_degree());
    for (i, d) in h.gradient().iter().enumerate() {
        println!("  dh/dx{i} = {d}");
    }
    let at = [q.from_i64(1), q.from_i64(2), q.from_i64(-1)];
    println!("h(1, 2, -1) = {}", h.eval(&at)?);
    println!("euler identity: {:?}", h.euler_check()?);
    println!("chart x0 = 1: {}", h.dehomogenize(0)?);

    let f7 = h.reduce_mod(7)?;
    println!("mod 7: {f7}");

    match MultiPoly::parse("x0 +* x1", 3, q) {
        Ok(_) => unreachable!(),
        Err(e) => println!("bad input: {e}"),
    }
    Ok(())
}
