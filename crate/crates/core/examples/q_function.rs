//! The quality function for one coordinate: its finite domain, the
//! decreasing-point list and the definitional oracle.

use privfeas::arith::Rational;
use privfeas::geometry::{Constraint, ConstraintSet};
use privfeas::qfun::{build_decreasing_list, domain_spec, enumerate_domain, q_eval, Prefix, QOracle};

fn main() -> privfeas::Result<()> {
    let s = ConstraintSet::new(
        2,
        1,
        vec![
            Constraint::from_i64(&[1, 1], 0)?,
            Constraint::from_i64(&[-1, 1], 0)?,
            Constraint::from_i64(&[0, -1], -1)?,
            Constraint::from_i64(&[1, 0], 1)?,
        ],
    )?;
    let spec = domain_spec(2, s.bound(), 1, &1.into())?;
    let domain = enumerate_domain(&spec, 1 << 20)?;
    println!("coordinate 1: N = {}, D = {}, {} distinct values", spec.numer_bound, spec.denom_base, domain.len());

    let list = build_decreasing_list(&s, &Prefix::new())?;
    println!("list {}", list.to_json());
    let oracle = QOracle::new(&s, &Prefix::new())?;
    for x in [-1, 0, 1] {
        let x = Rational::from(x);
        println!("Q({x}) = {} (oracle {})", q_eval(&list, &x)?, oracle.eval(&x));
    }

    let prefix = Prefix::from_values(&[Rational::new(1, 2)?]);
    let slice = QOracle::new(&s, &prefix)?;
    println!("with x1 = 1/2: Q(1/2) = {}, max {}", slice.eval(&Rational::new(1, 2)?), slice.max());
    Ok(())
}
