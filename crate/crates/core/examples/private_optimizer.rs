//! Private maximization of a quasi-concave quality over a finite domain.

use privfeas::dp::RandomSource;
use privfeas::geometry::{Constraint, ConstraintSet};
use privfeas::optimizer::{baseline_threshold, private_qc_max, recconcave_threshold, OptimizerParams};
use privfeas::qfun::{build_decreasing_list, domain_spec, enumerate_domain, Prefix};

fn main() -> privfeas::Result<()> {
    let mut items = vec![Constraint::from_i64(&[1], -1)?; 150];
    items.extend(vec![Constraint::from_i64(&[-1], -2)?; 150]);
    items.extend(vec![Constraint::from_i64(&[1], 2)?; 50]);
    let s = ConstraintSet::new(1, 2, items)?;

    let list = build_decreasing_list(&s, &Prefix::new())?;
    let domain = enumerate_domain(&domain_spec(1, s.bound(), 1, &1.into())?, 1 << 20)?;
    let p = OptimizerParams::new(s.len() as f64, 0.1, 0.1, 1.0, 0.01)?;
    println!(
        "{} candidates, max Q = {}, threshold {:.1} (recursive optimizer would need {:.3e})",
        domain.len(),
        list.global_max(),
        baseline_threshold(domain.len(), &p),
        recconcave_threshold(domain.len() as u128, &p)
    );
    let mut rng = RandomSource::new(7, 0);
    for _ in 0..5 {
        let r = private_qc_max(&list, &domain, &p, &mut rng)?;
        println!("chose {} with Q = {}", r.chosen.value, r.achieved_quality);
    }
    Ok(())
}
