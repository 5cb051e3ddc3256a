//! The exponential mechanism: exact outcome probabilities, sampling, a
//! privacy audit on neighboring inputs, and composition.

use privfeas::arith::Rational;
use privfeas::dp::{
    advanced_composition, audit_report, basic_composition, exp_mech_outcome_probs, float_to_f64, sample_index,
    PrivacyParams, RandomSource,
};

fn main() -> privfeas::Result<()> {
    let q: Vec<Rational> = [0, 3, 5, 5].iter().map(|&v| Rational::from(v)).collect();
    let q2: Vec<Rational> = [1, 2, 5, 4].iter().map(|&v| Rational::from(v)).collect();
    let eps = 1.0;
    let probs: Vec<f64> = exp_mech_outcome_probs(&q, eps)?.iter().map(float_to_f64).collect();
    println!("probabilities {probs:.4?}");

    let mut rng = RandomSource::new(1, 0);
    let mut counts = [0; 4];
    for _ in 0..10_000 {
        counts[sample_index(&q, eps, &mut rng)?] += 1;
    }
    println!("10000 draws  {counts:?}");

    let report = audit_report(&q, &q2, eps)?;
    println!("audit: max |ln p/p'| = {:.4} <= {eps}: {}", report.max_log_ratio, report.passed);

    let basic = basic_composition(&[PrivacyParams::new(0.1, 1e-4)?; 10]);
    let adv = advanced_composition(10, 0.1, 1e-4, 1e-3)?;
    println!("10 x (0.1, 1e-4): basic {basic:?}, advanced {adv:?}");
    Ok(())
}
