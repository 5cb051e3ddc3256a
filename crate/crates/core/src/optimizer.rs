//! Private maximization of a quasi-concave quality over an explicit domain.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::dp::{sample_index, RandomSource};
use crate::error::{Error, Result};
use crate::qfun::{q_eval, DecreasingPointList, DomainElement};

/// Available maximizers. Only the exponential mechanism is implemented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    ExpMech,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::ExpMech => f.write_str("expmech"),
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "expmech" => Ok(Backend::ExpMech),
            other => Err(Error::Parse(format!("unknown optimizer backend `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerParams {
    /// Promised lower bound on the maximum quality.
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    pub delta: f64,
}

impl OptimizerParams {
    pub fn new(r: f64, alpha: f64, beta: f64, eps: f64, delta: f64) -> Result<Self> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(r.is_finite() && r > 0.0) {
            return bad("r must be positive");
        }
        if !(alpha > 0.0 && alpha <= 0.5) {
            return bad("alpha must lie in (0, 1/2]");
        }
        if !(beta > 0.0 && beta < 1.0) {
            return bad("beta must lie in (0, 1)");
        }
        if !(eps.is_finite() && eps > 0.0) {
            return bad("eps must be positive");
        }
        if !(delta > 0.0 && delta < 1.0) {
            return bad("delta must lie in (0, 1)");
        }
        Ok(OptimizerParams { r, alpha, beta, eps, delta })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerResult {
    pub chosen: DomainElement,
    pub achieved_quality: usize,
    pub backend: Backend,
}

pub fn private_qc_max(
    l: &DecreasingPointList,
    domain: &[DomainElement],
    p: &OptimizerParams,
    rng: &mut RandomSource,
) -> Result<OptimizerResult> {
    private_qc_max_with(Backend::ExpMech, l, domain, p, rng)
}

/// Exponential mechanism over `domain` with quality `Q(x)` read off the
/// list. Pure `p.eps`-DP; `p.r`, `p.alpha` and `p.beta` only enter the
/// utility guarantee.
pub fn private_qc_max_with(
    backend: Backend,
    l: &DecreasingPointList,
    domain: &[DomainElement],
    p: &OptimizerParams,
    rng: &mut RandomSource,
) -> Result<OptimizerResult> {
    if domain.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    match backend {
        Backend::ExpMech => {
            let scores = domain.iter().map(|e| q_eval(l, &e.value)).collect::<Result<Vec<usize>>>()?;
            let qualities: Vec<Rational> = scores.iter().map(|&k| Rational::from(k as i64)).collect();
            let j = sample_index(&qualities, p.eps, rng)?;
            Ok(OptimizerResult { chosen: domain[j].clone(), achieved_quality: scores[j], backend })
        }
    }
}

/// Smallest `r` for which the exponential mechanism over `domain_size`
/// candidates loses more than `alpha * r` with probability at most `beta`.
pub fn baseline_threshold(domain_size: usize, p: &OptimizerParams) -> f64 {
    let t = 2.0 / (p.eps * p.alpha) * (domain_size as f64 / p.beta).ln();
    t.max(0.0)
}

/// Sample requirement of the recursive quasi-concave optimizer, for
/// reporting. The trailing logarithm is natural.
pub fn recconcave_threshold(domain_size: u128, p: &OptimizerParams) -> f64 {
    recconcave_threshold_from_log_star(log_star(domain_size), p)
}

pub fn recconcave_threshold_from_log_star(ls: u32, p: &OptimizerParams) -> f64 {
    let ls = f64::from(ls);
    8f64.powf(ls) * 12.0 * ls / (p.alpha * p.eps) * (192.0 * ls * ls / (p.beta * p.delta)).ln()
}

/// Iterated base-2 logarithm with ceilings: 0 for `n <= 1`.
pub fn log_star(n: u128) -> u32 {
    if n <= 1 {
        0
    } else {
        1 + log_star(u128::from(128 - (n - 1).leading_zeros()))
    }
}
