//! Perturb labeled points onto a fine grid so they are in general
//! position, then rescale to integers.

use num_bigint::BigInt;
use privfeas::arith::RatVector;
use privfeas::dp::RandomSource;
use privfeas::geometry::{general_position_check, is_realizable_points};
use privfeas::harness::generate_labeled_instance;
use privfeas::learner::{add_noise, margin_bound, rescale_to_grid};

fn main() -> privfeas::Result<()> {
    let x = BigInt::from(1);
    let mut rng = RandomSource::new(5, 0);
    let s = generate_labeled_instance(2, 1, 8, &mut rng, false)?;
    let coords = |s: &[privfeas::geometry::LabeledPoint]| s.iter().map(|p| p.x.clone()).collect::<Vec<RatVector>>();
    println!("raw: general position {}, realizable {}", general_position_check(&coords(&s))?, is_realizable_points(&s)?);

    let (noisy, grid) = add_noise(&s, 0.1, s.len(), &x, &mut rng)?;
    println!("X' = {}, Δ = {}, Δ' = {}", margin_bound(2, &x), grid.delta, grid.delta_prime);
    println!(
        "noisy: general position {}, realizable {}",
        general_position_check(&coords(&noisy))?,
        is_realizable_points(&noisy)?
    );
    let (ints, bound) = rescale_to_grid(&noisy, &grid, &x)?;
    println!("rescaled to integers bounded by {bound}; first point {:?}", ints[0].x.entries());
    Ok(())
}
