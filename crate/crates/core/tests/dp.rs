use privfeas::arith::Rational;
use privfeas::dp::{
    advanced_composition, audit_report, basic_composition, exp_mech_outcome_probs, float_to_f64, rational_of_float,
    sample_index, PrivacyParams, RandomSource,
};
use proptest::prelude::*;
use rand::Rng;

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from(x)).collect()
}

#[test]
fn frozen_two_outcome_probabilities() {
    let p = exp_mech_outcome_probs(&ints(&[0, 1]), 2.0).unwrap();
    let e = std::f64::consts::E;
    assert!((float_to_f64(&p[1]) - e / (1.0 + e)).abs() < 1e-15);
    assert!((float_to_f64(&p[0]) - 1.0 / (1.0 + e)).abs() < 1e-15);
    assert_eq!(rational_of_float(&p[0]) + rational_of_float(&p[1]), Rational::one());
}

#[test]
fn frozen_compositions() {
    let adv = advanced_composition(10, 0.1, 0.001, 1e-5).unwrap();
    assert!((adv.eps - ((20.0 * 1e5f64.ln()).sqrt() * 0.1 + 0.2)).abs() < 1e-12);
    assert!((adv.eps - 1.717_43).abs() < 1e-4);
    assert!((adv.delta - 0.010_01).abs() < 1e-15);
    let basic = basic_composition(&[PrivacyParams { eps: 0.25, delta: 0.01 }; 4]);
    assert_eq!(basic, PrivacyParams { eps: 1.0, delta: 0.04 });
    assert!(advanced_composition(0, 0.1, 0.0, 0.1).is_err());
}

#[test]
fn sampling_frequencies_follow_the_distribution() {
    let q = ints(&[0, 1, 2, 2]);
    let probs: Vec<f64> = exp_mech_outcome_probs(&q, 1.5).unwrap().iter().map(float_to_f64).collect();
    let mut rng = RandomSource::new(11, 0);
    let n = 40_000;
    let mut counts = [0usize; 4];
    for _ in 0..n {
        counts[sample_index(&q, 1.5, &mut rng).unwrap()] += 1;
    }
    for (c, p) in counts.iter().zip(&probs) {
        // Five standard deviations.
        let sd = (p * (1.0 - p) / n as f64).sqrt();
        assert!((*c as f64 / n as f64 - p).abs() < 5.0 * sd, "{counts:?} vs {probs:?}");
    }
}

#[test]
fn audit_flags_non_neighbors() {
    assert!(audit_report(&ints(&[3, 0]), &ints(&[0, 3]), 1.0).unwrap().max_log_ratio > 1.0);
    assert!(!audit_report(&ints(&[3, 0]), &ints(&[0, 3]), 1.0).unwrap().passed);
    assert!(audit_report(&ints(&[1]), &ints(&[1, 2]), 1.0).is_err());
}

#[test]
fn random_source_streams() {
    let draw = |s: &mut RandomSource| (0..8).map(|_| s.gen::<u64>()).collect::<Vec<_>>();
    let a = draw(&mut RandomSource::new(5, 0));
    assert_eq!(a, draw(&mut RandomSource::new(5, 0)));
    assert_ne!(a, draw(&mut RandomSource::new(5, 1)));
    let base = RandomSource::new(5, 0);
    assert_ne!(draw(&mut base.fork(0)), draw(&mut base.fork(1)));
    assert_eq!(draw(&mut base.fork(3)), draw(&mut base.fork(3)));
}

proptest! {
    #[test]
    fn probabilities_sum_to_one_and_follow_quality(q in prop::collection::vec(-50i64..=50, 1..12), eps in 0.01f64..20.0) {
        let q = ints(&q);
        let p = exp_mech_outcome_probs(&q, eps).unwrap();
        let total: f64 = p.iter().map(float_to_f64).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for i in 0..q.len() {
            for j in 0..q.len() {
                if q[i] > q[j] {
                    prop_assert!(p[i] > p[j]);
                }
            }
        }
    }

    #[test]
    fn neighbors_pass_the_audit(
        pairs in prop::collection::vec((-30i64..=30, -1i64..=1), 1..10),
        eps in 0.05f64..10.0,
    ) {
        let q: Vec<Rational> = pairs.iter().map(|(a, _)| Rational::from(*a)).collect();
        let q2: Vec<Rational> = pairs.iter().map(|(a, b)| Rational::from(a + b)).collect();
        let r = audit_report(&q, &q2, eps).unwrap();
        prop_assert!(r.passed, "{:?}", r);
    }

    #[test]
    fn sample_index_in_range(q in prop::collection::vec(-5i64..=5, 1..8), seed in 0u64..1000) {
        let i = sample_index(&ints(&q), 1.0, &mut RandomSource::new(seed, 0)).unwrap();
        prop_assert!(i < q.len());
    }
}
