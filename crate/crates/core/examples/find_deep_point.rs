//! Privately find a point satisfying most constraints of a realizable
//! instance, one coordinate at a time.

use privfeas::deep_point::{find_deep_point, required_size};
use privfeas::dp::RandomSource;
use privfeas::geometry::depth;
use privfeas::harness::generate_feasibility_instance_with_point;

fn main() -> privfeas::Result<()> {
    let (d, x, alpha, beta, eps, delta) = (2, 2, 0.25, 0.2, 2.0, 0.01);
    let m = required_size(d, x, alpha, beta, eps, delta)?;
    let inst = generate_feasibility_instance_with_point(d, x, m, &mut RandomSource::new(1, 0))?;
    println!("{m} constraints, hidden point {:?}", inst.hidden.entries());

    let run = find_deep_point(&inst.constraints, alpha, beta, eps, delta, &mut RandomSource::new(1, 1))?;
    for it in &run.iterations {
        println!(
            "coordinate {}: {} candidates, r = {:.1}, threshold {:.1}, chose {} with Q = {}",
            it.i, it.domain_size, it.r, it.threshold, it.chosen.value, it.achieved
        );
    }
    let got = depth(&inst.constraints, &run.point)?;
    println!("point {:?} satisfies {got}/{m}; run is ({:.3}, {})-DP", run.point.entries(), run.accounted.eps, run.accounted.delta);
    Ok(())
}
