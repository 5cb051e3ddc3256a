//! Depth, convex depth and the hull-membership tests behind it.

use privfeas::arith::RatVector;
use privfeas::geometry::{cdepth_oracle, depth, fm_hull_membership, lp_hull_membership, Constraint, ConstraintSet};
use privfeas::harness::tight_witness;

fn main() -> privfeas::Result<()> {
    let s = ConstraintSet::new(
        2,
        2,
        vec![
            Constraint::from_i64(&[1, 0], -1)?,
            Constraint::from_i64(&[-1, 0], -1)?,
            Constraint::from_i64(&[0, 1], -1)?,
            Constraint::from_i64(&[0, -1], -1)?,
            Constraint::from_i64(&[1, 1], 2)?,
        ],
    )?;
    for p in [[0, 0], [1, 1], [2, 2]] {
        let x = RatVector::from_ints(&p);
        println!("{p:?}: depth {} cdepth {}", depth(&s, &x)?, cdepth_oracle(&s, &x)?);
    }

    let (w, x) = tight_witness()?;
    println!("tight witness: depth {} cdepth {}", depth(&w, &x)?, cdepth_oracle(&w, &x)?);

    let square: Vec<RatVector> = [[0, 0], [2, 0], [0, 2], [2, 2]].iter().map(|p| RatVector::from_ints(p)).collect();
    let inside = RatVector::from_ints(&[1, 1]);
    let raw: Vec<_> = square.iter().map(|p| p.entries().to_vec()).collect();
    println!(
        "(1,1) in square: FM {} LP {}",
        fm_hull_membership(&inside, &square)?,
        lp_hull_membership(inside.entries(), &raw, &[], &[])
    );
    Ok(())
}
