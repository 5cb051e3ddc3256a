//! Coordinate-by-coordinate private search for a point of large depth.

use serde::{Deserialize, Serialize};

use crate::arith::RatVector;
use crate::dp::{advanced_composition, basic_composition, PrivacyParams, RandomSource};
use crate::error::{Error, Result};
use crate::geometry::ConstraintSet;
use crate::optimizer::{baseline_threshold, private_qc_max_with, Backend, OptimizerParams};
use crate::qfun::{build_decreasing_list, domain_spec, enumerate_domain, DomainElement, Prefix, DEFAULT_ENUMERATION_CAP};

/// Per-iteration parameters derived from the caller's `(alpha, beta, eps, delta)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub d: usize,
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    pub delta: f64,
}

impl Schedule {
    pub fn new(d: usize, alpha: f64, beta: f64, eps: f64, delta: f64) -> Self {
        let df = d as f64;
        Schedule {
            d,
            alpha: alpha / (2.0 * df * (df + 1.0)),
            beta: beta / df,
            eps: eps / (2.0 * (2.0 * df * (2.0 / delta).ln()).sqrt()),
            delta: delta / (2.0 * df),
        }
    }

    /// Promised quality at coordinate `i` (1-based).
    pub fn r(&self, i: usize, size: usize) -> f64 {
        (1.0 - self.alpha).powi(i as i32 - 1) * size as f64
    }

    pub fn params(&self, i: usize, size: usize) -> Result<OptimizerParams> {
        OptimizerParams::new(self.r(i, size), self.alpha, self.beta, self.eps, self.delta)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeepPointOptions {
    pub cap: u128,
    pub backend: Backend,
}

impl Default for DeepPointOptions {
    fn default() -> Self {
        DeepPointOptions { cap: DEFAULT_ENUMERATION_CAP, backend: Backend::ExpMech }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub i: usize,
    pub r: f64,
    pub domain_size: usize,
    pub threshold: f64,
    pub chosen: DomainElement,
    pub achieved: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeepPointRun {
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    pub delta: f64,
    pub schedule: Schedule,
    pub iterations: Vec<IterationRecord>,
    pub point: RatVector,
    pub accounted: PrivacyParams,
}

impl DeepPointRun {
    /// Whether `|S|` met the backend threshold at every iteration.
    pub fn above_threshold(&self) -> bool {
        self.iterations.iter().all(|it| it.r >= it.threshold)
    }
}

fn check_params(alpha: f64, beta: f64, eps: f64, delta: f64) -> Result<()> {
    let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
    if !(alpha > 0.0 && alpha <= 1.0) {
        return bad("alpha must lie in (0, 1]");
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return bad("beta must lie in (0, 1]");
    }
    if !(eps.is_finite() && eps > 0.0) {
        return bad("eps must be positive");
    }
    if !(delta > 0.0 && delta < 0.5) {
        return bad("delta must lie in (0, 1/2)");
    }
    Ok(())
}

pub fn find_deep_point(
    s: &ConstraintSet,
    alpha: f64,
    beta: f64,
    eps: f64,
    delta: f64,
    rng: &mut RandomSource,
) -> Result<DeepPointRun> {
    find_deep_point_with(s, alpha, beta, eps, delta, rng, &DeepPointOptions::default())
}

/// Fixes one coordinate per iteration by privately maximizing `Q` over
/// the finite domain for that coordinate. Runs identically on realizable
/// and non-realizable inputs.
pub fn find_deep_point_with(
    s: &ConstraintSet,
    alpha: f64,
    beta: f64,
    eps: f64,
    delta: f64,
    rng: &mut RandomSource,
    opts: &DeepPointOptions,
) -> Result<DeepPointRun> {
    check_params(alpha, beta, eps, delta)?;
    if s.is_empty() {
        return Err(Error::InvalidParameter("constraint set is empty".into()));
    }
    let d = s.d();
    let schedule = Schedule::new(d, alpha, beta, eps, delta);
    let mut prefix = Prefix::new();
    let mut iterations = Vec::with_capacity(d);
    for i in 1..=d {
        let spec = domain_spec(d, s.bound(), i, &prefix.t_prev())?;
        let domain = enumerate_domain(&spec, opts.cap)?;
        let list = build_decreasing_list(s, &prefix)?;
        let p = schedule.params(i, s.len())?;
        let res = private_qc_max_with(opts.backend, &list, &domain, &p, rng)?;
        iterations.push(IterationRecord {
            i,
            r: p.r,
            domain_size: domain.len(),
            threshold: baseline_threshold(domain.len(), &p),
            chosen: res.chosen.clone(),
            achieved: res.achieved_quality,
        });
        prefix.push(res.chosen);
    }
    Ok(DeepPointRun {
        alpha,
        beta,
        eps,
        delta,
        schedule,
        iterations,
        point: RatVector::new(prefix.values())?,
        accounted: run_accounting(d, eps, delta)?,
    })
}

/// Advanced composition of the `d` iterations with `delta' = delta/2`.
pub fn deep_point_accounting(d: usize, eps: f64, delta: f64) -> Result<PrivacyParams> {
    let sch = Schedule::new(d, 1.0, 1.0, eps, delta);
    advanced_composition(d, sch.eps, sch.delta, delta / 2.0)
}

/// The tighter of advanced and basic composition for a run. Advanced
/// composition is only below `eps` for `eps <= 2 ln(2/delta)`.
pub fn run_accounting(d: usize, eps: f64, delta: f64) -> Result<PrivacyParams> {
    let sch = Schedule::new(d, 1.0, 1.0, eps, delta);
    let adv = deep_point_accounting(d, eps, delta)?;
    let basic = basic_composition(&vec![PrivacyParams { eps: sch.eps, delta: sch.delta }; d]);
    Ok(if basic.eps < adv.eps { basic } else { adv })
}

/// Smallest `|S|` for which every iteration's promised quality reaches
/// the baseline threshold, bounding each domain by its pair count.
pub fn required_size(d: usize, x: i64, alpha: f64, beta: f64, eps: f64, delta: f64) -> Result<usize> {
    let sch = Schedule::new(d, alpha, beta, eps, delta);
    let mut need: f64 = 1.0;
    for i in 1..=d {
        let spec = domain_spec(d, &x.into(), i, &1.into())?;
        let pairs = spec.pair_count().to_string().parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?;
        let p = OptimizerParams::new(1.0, sch.alpha, sch.beta, sch.eps, sch.delta)?;
        let t = 2.0 / (p.eps * p.alpha) * (pairs / p.beta).ln();
        need = need.max(t / (1.0 - sch.alpha).powi(i as i32 - 1));
    }
    Ok(need.ceil() as usize)
}

/// Smallest `eps` for which every iteration's promised quality on `size`
/// constraints reaches the baseline threshold; the inverse of
/// [`required_size`].
pub fn required_eps(d: usize, x: i64, size: usize, alpha: f64, beta: f64, delta: f64) -> Result<f64> {
    let unit = Schedule::new(d, alpha, beta, 1.0, delta);
    let mut need: f64 = 0.0;
    for i in 1..=d {
        let spec = domain_spec(d, &x.into(), i, &1.into())?;
        let pairs = spec.pair_count().to_string().parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?;
        let eps_t = 2.0 / (unit.alpha * unit.r(i, size)) * (pairs / unit.beta).ln();
        need = need.max(eps_t / unit.eps);
    }
    Ok(need)
}
