//! Seeded randomness, the exponential mechanism, privacy audits and
//! composition accounting.

use std::collections::BTreeMap;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Binary float with a configurable mantissa; all mechanism weights use
/// [`PRECISION`] bits.
pub type Float = FBig<HalfEven, 2>;

pub const PRECISION: usize = 128;

/// Slack allowed by [`dp_ratio_audit`] on the log of each outcome ratio.
pub const AUDIT_SLACK: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrivacyParams {
    pub eps: f64,
    pub delta: f64,
}

impl PrivacyParams {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!("delta must lie in [0,1), got {delta}")));
        }
        Ok(PrivacyParams { eps, delta })
    }

    pub fn zero() -> Self {
        PrivacyParams { eps: 0.0, delta: 0.0 }
    }

    /// Component-wise `<=`, allowing for float rounding in the sums.
    pub fn within(&self, budget: &PrivacyParams) -> bool {
        let tol = |x: f64| 1e-12 * x.abs().max(1.0);
        self.eps <= budget.eps + tol(budget.eps) && self.delta <= budget.delta + tol(budget.delta)
    }
}

/// Deterministic generator keyed by `(seed, stream)`.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// An independent source on a stream derived from this one and `tag`.
    pub fn fork(&self, tag: u64) -> RandomSource {
        RandomSource::new(self.seed, splitmix(self.stream ^ splitmix(tag.wrapping_add(1))))
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoredCandidate<T> {
    pub payload: T,
    pub quality: Rational,
}

fn to_ibig(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub(crate) fn float_of(q: &Rational) -> Float {
    let n = Float::from(to_ibig(q.numer())).with_precision(PRECISION).value();
    let d = Float::from(to_ibig(q.denom())).with_precision(PRECISION).value();
    n / d
}

fn float_of_f64(x: f64) -> Result<Float> {
    let f = Float::try_from(x).map_err(|_| Error::InvalidParameter(format!("non-finite {x}")))?;
    Ok(f.with_precision(PRECISION).value())
}

/// Exact rational value of a binary float.
pub fn rational_of_float(x: &Float) -> Rational {
    let repr = x.repr();
    let sig: BigInt = repr.significand().to_string().parse().expect("decimal integer");
    let e = repr.exponent();
    let two = BigInt::from(2);
    if e >= 0 {
        Rational::from_integer(sig * two.pow(e as u32))
    } else {
        Rational::new(sig, two.pow((-e) as u32)).expect("nonzero")
    }
}

pub fn float_to_f64(x: &Float) -> f64 {
    x.to_f64().value()
}

fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")))
    }
}

/// Unnormalised weights `exp(eps (q_i - max q) / 2)`, computed once per
/// distinct quality value.
fn weights(qualities: &[Rational], eps: f64) -> Result<Vec<Float>> {
    check_eps(eps)?;
    let top = qualities.iter().max().ok_or(Error::EmptyCandidates)?;
    let half = float_of_f64(eps)? / Float::from(2u8);
    let mut cache: BTreeMap<&Rational, Float> = BTreeMap::new();
    Ok(qualities
        .iter()
        .map(|q| {
            cache
                .entry(q)
                .or_insert_with(|| (half.clone() * float_of(&(q - top))).exp())
                .clone()
        })
        .collect())
}

/// Exact sampling distribution of the exponential mechanism, to
/// [`PRECISION`] bits.
pub fn exp_mech_outcome_probs(qualities: &[Rational], eps: f64) -> Result<Vec<Float>> {
    let w = weights(qualities, eps)?;
    let total = w.iter().fold(Float::ZERO.with_precision(PRECISION).value(), |a, b| a + b);
    Ok(w.into_iter().map(|x| x / total.clone()).collect())
}

/// Draws an index with probability proportional to `exp(eps q_i / 2)`.
pub fn sample_index(qualities: &[Rational], eps: f64, rng: &mut RandomSource) -> Result<usize> {
    check_eps(eps)?;
    let top = qualities.iter().max().ok_or(Error::EmptyCandidates)?;
    // Candidates sharing a quality share a weight: pick a class, then a
    // uniform member of it.
    let mut classes: BTreeMap<&Rational, Vec<usize>> = BTreeMap::new();
    for (i, q) in qualities.iter().enumerate() {
        classes.entry(q).or_default().push(i);
    }
    let half = float_of_f64(eps)? / Float::from(2u8);
    let masses: Vec<(Float, &Vec<usize>)> = classes
        .iter()
        .rev()
        .map(|(q, members)| {
            let w = (half.clone() * float_of(&(*q - top))).exp();
            (w * Float::from(members.len()), members)
        })
        .collect();
    let total = masses.iter().fold(Float::ZERO.with_precision(PRECISION).value(), |a, (m, _)| a + m);
    let u = Float::from(rng.gen::<u128>()).with_precision(PRECISION).value()
        / Float::from(UBig::ONE << 128).with_precision(PRECISION).value();
    let target = u * total;
    let mut acc = Float::ZERO.with_precision(PRECISION).value();
    let mut chosen = masses.last().map(|(_, m)| *m).expect("nonempty");
    for (mass, members) in &masses {
        acc += mass;
        if target < acc {
            chosen = members;
            break;
        }
    }
    Ok(chosen[rng.gen_range(0..chosen.len())])
}

pub fn exponential_mechanism<'a, T>(
    cands: &'a [ScoredCandidate<T>],
    eps: f64,
    rng: &mut RandomSource,
) -> Result<&'a ScoredCandidate<T>> {
    let qualities: Vec<Rational> = cands.iter().map(|c| c.quality.clone()).collect();
    Ok(&cands[sample_index(&qualities, eps, rng)?])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub passed: bool,
    pub max_log_ratio: f64,
    pub eps: f64,
}

/// Largest `|ln p_i - ln p'_i|` over outcomes of the mechanism run on two
/// quality vectors, checked against `eps`.
pub fn audit_report(q: &[Rational], q2: &[Rational], eps: f64) -> Result<AuditReport> {
    if q.len() != q2.len() {
        return Err(Error::DimensionMismatch { expected: q.len(), found: q2.len() });
    }
    let p = exp_mech_outcome_probs(q, eps)?;
    let p2 = exp_mech_outcome_probs(q2, eps)?;
    let mut worst = Float::ZERO;
    for (a, b) in p.iter().zip(&p2) {
        let r = (a.clone() / b.clone()).ln();
        let r = if r < Float::ZERO { -r } else { r };
        if r > worst {
            worst = r;
        }
    }
    let max_log_ratio = float_to_f64(&worst);
    let bound = float_of_f64(eps)? + float_of_f64(AUDIT_SLACK)?;
    Ok(AuditReport { passed: worst <= bound, max_log_ratio, eps })
}

/// `true` iff every outcome probability ratio is within `e^eps`.
pub fn dp_ratio_audit(q: &[Rational], q2: &[Rational], eps: f64) -> Result<bool> {
    Ok(audit_report(q, q2, eps)?.passed)
}

pub fn basic_composition(parts: &[PrivacyParams]) -> PrivacyParams {
    parts.iter().fold(PrivacyParams::zero(), |acc, p| PrivacyParams {
        eps: acc.eps + p.eps,
        delta: acc.delta + p.delta,
    })
}

/// `k`-fold adaptive composition: `eps = sqrt(2k ln(1/delta')) eps0 + 2k eps0^2`,
/// `delta = k delta0 + delta'`.
pub fn advanced_composition(k: usize, eps0: f64, delta0: f64, delta_prime: f64) -> Result<PrivacyParams> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    check_eps(eps0)?;
    if !(delta_prime > 0.0 && delta_prime <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta' must lie in (0,1], got {delta_prime}")));
    }
    if !(0.0..=1.0).contains(&delta0) {
        return Err(Error::InvalidParameter(format!("delta0 must lie in [0,1], got {delta0}")));
    }
    let k = k as f64;
    Ok(PrivacyParams {
        eps: (2.0 * k * (1.0 / delta_prime).ln()).sqrt() * eps0 + 2.0 * k * eps0 * eps0,
        delta: k * delta0 + delta_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    fn close(a: &Float, b: f64, tol: f64) -> bool {
        (float_to_f64(a) - b).abs() <= tol
    }

    #[test]
    fn uniform_when_equal() {
        let p = exp_mech_outcome_probs(&ints(&[3, 3, 3, 3]), 0.7).unwrap();
        let quarter = Float::from(1u8) / Float::from(4u8);
        for x in &p {
            let diff = x.clone() - quarter.clone();
            assert!(float_to_f64(&diff).abs() < 1e-30);
        }
    }

    #[test]
    fn weights_one_and_three() {
        for eps in [0.1, 1.0, 1.3, 5.0] {
            let ln3 = Float::from(3u8).with_precision(PRECISION).value().ln();
            let q1 = rational_of_float(&(Float::from(2u8) / float_of_f64(eps).unwrap() * ln3));
            let p = exp_mech_outcome_probs(&[Rational::zero(), q1], eps).unwrap();
            let quarter = Float::from(1u8).with_precision(PRECISION).value() / Float::from(4u8);
            let d0 = p[0].clone() - quarter.clone();
            let d1 = p[1].clone() - quarter * Float::from(3u8);
            assert!(float_to_f64(&d0).abs() < 1e-20, "eps {eps}");
            assert!(float_to_f64(&d1).abs() < 1e-20, "eps {eps}");
            assert!(close(&p[0], 0.25, 1e-15));
        }
    }

    #[test]
    fn shift_invariant() {
        let a = exp_mech_outcome_probs(&ints(&[0, 1, 5]), 1.0).unwrap();
        let b = exp_mech_outcome_probs(&ints(&[7, 8, 12]), 1.0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(float_to_f64(&(x.clone() - y.clone())).abs() < 1e-30);
        }
    }

    #[test]
    fn single_and_empty() {
        let mut rng = RandomSource::new(1, 0);
        assert_eq!(sample_index(&ints(&[4]), 1.0, &mut rng).unwrap(), 0);
        assert_eq!(sample_index(&[], 1.0, &mut rng), Err(Error::EmptyCandidates));
        assert!(sample_index(&ints(&[1]), 0.0, &mut rng).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let draw = |s: &mut RandomSource| (0..4).map(|_| s.next_u64()).collect::<Vec<_>>();
        let a = draw(&mut RandomSource::new(9, 3));
        assert_eq!(a, draw(&mut RandomSource::new(9, 3)));
        assert_ne!(a, draw(&mut RandomSource::new(9, 4)));
        let base = RandomSource::new(9, 3);
        assert_ne!(draw(&mut base.fork(0)), draw(&mut base.fork(1)));
    }

    #[test]
    fn audit_examples() {
        let q = ints(&[0, 0]);
        assert!(dp_ratio_audit(&q, &q, 0.5).unwrap());
        assert!(dp_ratio_audit(&ints(&[1, 4]), &ints(&[2, 5]), 0.5).unwrap());
        let r = audit_report(&q, &ints(&[1, 0]), 1.0).unwrap();
        assert!(r.passed);
        // Direct computation: ln((1+e^{1/2})/2) is the larger ratio.
        let expect = ((1.0 + 0.5f64.exp()) / 2.0).ln().max(0.5 - ((1.0 + 0.5f64.exp()) / 2.0).ln());
        assert!((r.max_log_ratio - expect).abs() < 1e-12);
        assert!(audit_report(&ints(&[0]), &ints(&[0, 1]), 1.0).is_err());
        // A sensitivity-3 change exceeds the bound.
        assert!(!dp_ratio_audit(&ints(&[0, 0]), &ints(&[3, 0]), 1.0).unwrap());
    }

    #[test]
    fn composition_examples() {
        let a = PrivacyParams::new(0.5, 0.0).unwrap();
        let b = PrivacyParams::new(0.3, 1e-6).unwrap();
        let c = basic_composition(&[a, b]);
        assert!((c.eps - 0.8).abs() < 1e-15 && c.delta == 1e-6);
        assert_eq!(basic_composition(&[]), PrivacyParams::zero());
        let adv = advanced_composition(2, 0.1, 0.0, (-1f64).exp()).unwrap();
        assert!((adv.eps - 0.24).abs() < 1e-15);
        assert_eq!(adv.delta, (-1f64).exp());
        assert!(advanced_composition(0, 0.1, 0.0, 0.5).is_err());
        assert!(advanced_composition(1, 0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(PrivacyParams::new(0.0, 0.0).is_err());
        assert!(PrivacyParams::new(1.0, 1.0).is_err());
        assert!(PrivacyParams::new(1.0, 0.5).is_ok());
    }
}
