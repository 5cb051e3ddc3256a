//! Exact rationals, determinants and linear solves.

use privfeas::arith::{determinant, solve_linear_system, RatMatrix, RatVector, Rational};

fn main() -> privfeas::Result<()> {
    let third = Rational::new(1, 3)?;
    let sum = &third + &third + third.clone();
    println!("1/3 + 1/3 + 1/3 = {sum}");
    println!("floor(-7/2) = {}, ceil(-7/2) = {}", Rational::new(-7, 2)?.floor(), Rational::new(-7, 2)?.ceil());

    let a = RatMatrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]])?;
    println!("det = {}", determinant(&a)?);
    let b = RatVector::from_ints(&[1, 2, 3]);
    match solve_linear_system(&a, &b)? {
        Some(x) => println!("solution = {:?}", x.entries()),
        None => println!("singular"),
    }
    Ok(())
}
