use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{generate_feasibility_instance, generate_labeled_instance};
use crate::deep_point::{find_deep_point_with, DeepPointOptions};
use crate::dp::RandomSource;
use crate::error::{Error, Result};
use crate::geometry::depth;
use crate::learner::learn_halfspace_with;
use crate::optimizer::Backend;
use crate::qfun::DEFAULT_ENUMERATION_CAP;

/// Environment variable holding the worker count for [`run_trials`].
pub const WORKERS_ENV: &str = "PRIVFEAS_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialKind {
    Solve,
    Learn,
}

impl fmt::Display for TrialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrialKind::Solve => "solve",
            TrialKind::Learn => "learn",
        })
    }
}

impl FromStr for TrialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solve" => Ok(TrialKind::Solve),
            "learn" => Ok(TrialKind::Learn),
            other => Err(Error::Parse(format!("unknown trial kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: TrialKind,
    pub d: usize,
    #[serde(rename = "X")]
    pub x: i64,
    pub m: usize,
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
    pub backend: Backend,
    pub cap: u128,
    /// Record wall time in the `millis` column; off keeps output byte-identical.
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn new(kind: TrialKind, d: usize, x: i64, m: usize) -> Self {
        ExperimentConfig {
            kind,
            d,
            x,
            m,
            alpha: 0.3,
            beta: 0.2,
            eps: 2.0,
            delta: 0.01,
            trials: 1,
            seed: 0,
            backend: Backend::ExpMech,
            cap: DEFAULT_ENUMERATION_CAP,
            record_timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.m == 0 {
            return Err(Error::InvalidParameter("trials and m must be at least 1".into()));
        }
        Ok(())
    }

    /// `⌈(1 - alpha) m⌉`, with a little slack for the float product.
    pub fn success_threshold(&self) -> usize {
        ((1.0 - self.alpha) * self.m as f64 - 1e-9).ceil().max(0.0) as usize
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub d: usize,
    #[serde(rename = "X")]
    pub x: i64,
    pub m: usize,
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    pub delta: f64,
    pub achieved: usize,
    pub threshold: usize,
    pub success: bool,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialSummary {
    pub rows: Vec<TrialRow>,
    pub successes: usize,
}

impl TrialSummary {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.rows.len().max(1) as f64
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Fresh instance, one run, one row. The instance uses stream 0 of the
/// trial seed and the algorithm stream 1.
pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialRow> {
    let seed = cfg.trial_seed(trial);
    let mut gen_rng = RandomSource::new(seed, 0);
    let mut alg_rng = RandomSource::new(seed, 1);
    let opts = DeepPointOptions { cap: cfg.cap, backend: cfg.backend };
    let start = Instant::now();
    let achieved = match cfg.kind {
        TrialKind::Solve => {
            let s = generate_feasibility_instance(cfg.d, cfg.x, cfg.m, &mut gen_rng)?;
            let run = find_deep_point_with(&s, cfg.alpha, cfg.beta, cfg.eps, cfg.delta, &mut alg_rng, &opts)?;
            depth(&s, &run.point)?
        }
        TrialKind::Learn => {
            let s = generate_labeled_instance(cfg.d, cfg.x, cfg.m, &mut gen_rng, true)?;
            learn_halfspace_with(&s, cfg.alpha, cfg.beta, cfg.eps, cfg.delta, &mut alg_rng, &opts)?.val
        }
    };
    let millis = if cfg.record_timing { start.elapsed().as_millis() as u64 } else { 0 };
    let threshold = cfg.success_threshold();
    Ok(TrialRow {
        trial,
        seed,
        d: cfg.d,
        x: cfg.x,
        m: cfg.m,
        alpha: cfg.alpha,
        beta: cfg.beta,
        eps: cfg.eps,
        delta: cfg.delta,
        achieved,
        threshold,
        success: achieved >= threshold,
        millis,
    })
}

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn configured_workers() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.parse().ok().filter(|n| *n > 0)
}

/// Runs every trial in a worker pool and collects rows in trial order.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<TrialSummary> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = configured_workers() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Io(e.to_string()))?;
    let rows = pool.install(|| (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect::<Result<Vec<_>>>())?;
    let successes = rows.iter().filter(|r| r.success).count();
    Ok(TrialSummary { rows, successes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_rows() {
        let mut cfg = ExperimentConfig::new(TrialKind::Solve, 1, 2, 40);
        cfg.trials = 3;
        cfg.seed = 9;
        let a = run_trials(&cfg).unwrap().to_csv_string().unwrap();
        let b = run_trials(&cfg).unwrap().to_csv_string().unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("trial,seed,d,X,m,alpha,beta,eps,delta,achieved,threshold,success,millis\n"));
        assert_eq!(a.lines().count(), 4);
    }

    #[test]
    fn success_threshold() {
        let mut cfg = ExperimentConfig::new(TrialKind::Solve, 1, 2, 500);
        assert_eq!(cfg.success_threshold(), 350);
        cfg.alpha = 0.25;
        cfg.m = 10;
        assert_eq!(cfg.success_threshold(), 8);
        let row = run_trial(&cfg, 0).unwrap();
        assert_eq!(row.success, row.achieved >= 8);
    }
}
