use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::generate::{
    generate_arbitrary_instance, generate_feasibility_instance, generate_labeled_instance,
    generate_labeled_instance_with_hidden,
};
use super::trials::{run_trials, ExperimentConfig, TrialKind};
use crate::arith::{RatVector, Rational};
use crate::deep_point::{required_eps, required_size};
use crate::dp::{advanced_composition, basic_composition, dp_ratio_audit, PrivacyParams, RandomSource};
use crate::error::{Error, Result};
use crate::geometry::{
    cdepth_oracle, depth, general_position_check, is_realizable_points, Arrangement, Constraint, ConstraintSet,
};
use crate::learner::{add_noise, learn_halfspace, margin_bound};
use crate::qfun::{
    build_decreasing_list, domain_spec, enumerate_domain, q_eval, DecreasingPointList, Prefix, QOracle,
    DEFAULT_ENUMERATION_CAP,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.1}s of {}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed_ms as f64 / 1000.0,
            self.limit_ms / 1000
        )
    }
}

fn finish(id: u8, name: &'static str, limit: Duration, start: Instant, ok: bool, detail: String) -> CriterionResult {
    let elapsed = start.elapsed();
    let detail = if elapsed > limit { format!("{detail}; over time") } else { detail };
    CriterionResult {
        id,
        name,
        passed: ok && elapsed <= limit,
        detail,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.as_millis(),
    }
}

fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

fn rand_rational(rng: &mut RandomSource, bound: i64) -> Rational {
    let den = rng.gen_range(1..=4i64);
    Rational::new(rng.gen_range(-bound * den..=bound * den), den).expect("nonzero")
}

fn rand_prefix(rng: &mut RandomSource, len: usize, bound: i64) -> Prefix {
    Prefix::from_values(&(0..len).map(|_| rand_rational(rng, bound)).collect::<Vec<_>>())
}

/// A random prefix of length `len` whose witnesses form a valid chain.
fn rand_chain(rng: &mut RandomSource, s: &ConstraintSet, len: usize) -> Result<Prefix> {
    let mut p = Prefix::new();
    for i in 1..=len {
        let dom = enumerate_domain(&domain_spec(s.d(), s.bound(), i, &p.t_prev())?, DEFAULT_ENUMERATION_CAP)?;
        p.push(dom.choose(rng).expect("nonempty domain").clone());
    }
    Ok(p)
}

/// Interesting probe points: every breakpoint and list entry, midpoints
/// between consecutive ones, and points just outside.
fn probes(oracle: &QOracle, list: Option<&DecreasingPointList>) -> Vec<Rational> {
    let mut pts = oracle.breakpoints();
    if let Some(l) = list {
        pts.extend(l.entries().iter().map(|e| e.0.clone()));
    }
    pts.sort();
    pts.dedup();
    let mut out = pts.clone();
    for w in pts.windows(2) {
        out.push((&w[0] + &w[1]) * Rational::new(1, 2).expect("nonzero"));
    }
    if let (Some(a), Some(b)) = (pts.first(), pts.last()) {
        out.push(a - &Rational::one());
        out.push(b + &Rational::one());
    }
    if out.is_empty() {
        out.push(Rational::zero());
    }
    out.sort();
    out.dedup();
    out
}

fn random_bounded_instance(rng: &mut RandomSource, dmax: usize, xmax: i64, mmax: usize) -> Result<ConstraintSet> {
    let d = rng.gen_range(1..=dmax);
    let x = rng.gen_range(1..=xmax);
    let m = rng.gen_range(1..=mmax);
    generate_feasibility_instance(d, x, m, rng)
}

pub const NAMES: [&str; 11] = [
    "quasi-concavity of Q",
    "sensitivity 1 of Q",
    "depth vs cdepth bound",
    "fast Q list equals definitional Q",
    "domain contains a maximizer of Q",
    "exponential mechanism privacy audit",
    "deep point utility d=1",
    "deep point utility d=2",
    "halfspace learner utility d=2",
    "noise yields general position",
    "noise preserves realizability",
];

/// `Q(x2) >= min(Q(x1), Q(x3))` for ordered triples, on both the
/// definitional oracle and the fast list.
pub fn criterion_1(seed: u64) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut rng = RandomSource::new(seed, 1);
    let (cases, mut violations) = (1000, 0);
    for _ in 0..cases {
        let s = random_bounded_instance(&mut rng, 3, 4, 12)?;
        let x = s.bound().to_string().parse::<i64>().map_err(|e| Error::Parse(e.to_string()))?;
        let len = rng.gen_range(0..s.d());
        let prefix = rand_prefix(&mut rng, len, x);
        let oracle = QOracle::new(&s, &prefix)?;
        let list = build_decreasing_list(&s, &prefix)?;
        let mut pts = probes(&oracle, Some(&list));
        pts.extend((0..3).map(|_| rand_rational(&mut rng, 2 * x)));
        pts.retain(|p| p >= list.lo() && p <= list.hi());
        let mut triple: Vec<Rational> = (0..3).map(|_| pts.choose(&mut rng).expect("nonempty").clone()).collect();
        triple.sort();
        let qo: Vec<usize> = triple.iter().map(|t| oracle.eval(t)).collect();
        let ql = triple.iter().map(|t| q_eval(&list, t)).collect::<Result<Vec<_>>>()?;
        for q in [qo, ql] {
            if q[1] < q[0].min(q[2]) {
                violations += 1;
            }
        }
    }
    let ok = violations == 0;
    Ok(finish(1, NAMES[0], minutes(5), start, ok, format!("{cases} cases, {violations} violations")))
}

/// `|Q_S(x) - Q_S'(x)| <= 1` for neighboring `S, S'` at every probe.
pub fn criterion_2(seed: u64) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut rng = RandomSource::new(seed, 2);
    let (pairs, mut violations, mut checks) = (500, 0, 0);
    for n in 0..pairs {
        let d = rng.gen_range(1..=3);
        let x = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=12);
        let s = if n % 2 == 0 {
            generate_feasibility_instance(d, x, m, &mut rng)?
        } else {
            generate_arbitrary_instance(d, x, m, &mut rng)?
        };
        let other = generate_arbitrary_instance(d, x, 1, &mut rng)?.items()[0].clone();
        let s2 = s.replaced(rng.gen_range(0..m), other)?;
        let len = rng.gen_range(0..d);
        let prefix = rand_prefix(&mut rng, len, x);
        let (o1, o2) = (QOracle::new(&s, &prefix)?, QOracle::new(&s2, &prefix)?);
        let (l1, l2) = (build_decreasing_list(&s, &prefix)?, build_decreasing_list(&s2, &prefix)?);
        let mut pts = probes(&o1, Some(&l1));
        pts.extend(probes(&o2, Some(&l2)));
        pts.retain(|p| p >= l1.lo() && p <= l1.hi());
        for p in &pts {
            checks += 1;
            let a = o1.eval(p) as i64 - o2.eval(p) as i64;
            let b = q_eval(&l1, p)? as i64 - q_eval(&l2, p)? as i64;
            if a.abs() > 1 || b.abs() > 1 {
                violations += 1;
            }
        }
    }
    let ok = violations == 0;
    Ok(finish(2, NAMES[1], minutes(5), start, ok, format!("{pairs} pairs, {checks} probes, {violations} violations")))
}

/// The tight one-dimensional witness: `depth(0) = 1 = 2*2 - 3`.
pub fn tight_witness() -> Result<(ConstraintSet, RatVector)> {
    let items = vec![
        Constraint::from_i64(&[1], 1)?,
        Constraint::from_i64(&[-1], 1)?,
        Constraint::from_i64(&[1], -1)?,
    ];
    Ok((ConstraintSet::new(1, 1, items)?, RatVector::from_ints(&[0])))
}

/// `depth(x) >= (d+1) cdepth(x) - d|S|` at random points and vertices.
pub fn criterion_3(seed: u64) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut rng = RandomSource::new(seed, 3);
    let (instances, mut violations, mut checks) = (200, 0, 0);
    let bound_holds = |s: &ConstraintSet, p: &RatVector| -> Result<bool> {
        let dep = depth(s, p)? as i64;
        let c = cdepth_oracle(s, p)? as i64;
        let (d, m) = (s.d() as i64, s.len() as i64);
        Ok(dep >= (d + 1) * c - d * m)
    };
    for n in 0..instances {
        let d = rng.gen_range(1..=2);
        let x = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=8);
        let s = if n % 2 == 0 {
            generate_feasibility_instance(d, x, m, &mut rng)?
        } else {
            generate_arbitrary_instance(d, x, m, &mut rng)?
        };
        let mut pts = Arrangement::from_constraints(&s)
            .vertices()
            .into_iter()
            .map(|g| RatVector::new(g.coords))
            .collect::<Result<Vec<_>>>()?;
        pts.shuffle(&mut rng);
        pts.truncate(6);
        for _ in 0..4 {
            pts.push(RatVector::new((0..d).map(|_| rand_rational(&mut rng, x)).collect())?);
        }
        for p in &pts {
            checks += 1;
            if !bound_holds(&s, p)? {
                violations += 1;
            }
        }
    }
    let (s, p) = tight_witness()?;
    let tight = depth(&s, &p)? == 1 && cdepth_oracle(&s, &p)? == 2;
    let ok = violations == 0 && tight && bound_holds(&s, &p)?;
    Ok(finish(
        3,
        NAMES[2],
        minutes(5),
        start,
        ok,
        format!("{instances} instances, {checks} points, {violations} violations, tight witness {}", if tight { "ok" } else { "wrong" }),
    ))
}

/// The decreasing-point list and the definitional oracle agree exactly.
pub fn criterion_4(seed: u64) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut rng = RandomSource::new(seed, 4);
    let (instances, mut mismatches, mut checks) = (200, 0, 0);
    for _ in 0..instances {
        let s = random_bounded_instance(&mut rng, 2, 3, 10)?;
        let len = rng.gen_range(0..s.d());
        let prefix = rand_chain(&mut rng, &s, len)?;
        let oracle = QOracle::new(&s, &prefix)?;
        let list = build_decreasing_list(&s, &prefix)?;
        let mut pts = probes(&oracle, Some(&list));
        pts.push(list.lo().clone());
        pts.push(list.hi().clone());
        pts.retain(|p| p >= list.lo() && p <= list.hi());
        for p in &pts {
            checks += 1;
            if q_eval(&list, p)? != oracle.eval(p) {
                mismatches += 1;
            }
        }
    }
    let ok = mismatches == 0;
    Ok(finish(4, NAMES[3], minutes(10), start, ok, format!("{instances} instances, {checks} probes, {mismatches} mismatches")))
}

/// The best domain value reaches the maximum of `Q` over the line.
pub fn criterion_5(seed: u64) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut rng = RandomSource::new(seed, 5);
    let (instances, mut misses) = (200, 0);
    for _ in 0..instances {
        let s = random_bounded_instance(&mut rng, 2, 2, 10)?;
        let len = rng.gen_range(0..s.d());
        let prefix = rand_chain(&mut rng, &s, len)?;
        let spec = domain_spec(s.d(), s.bound(), prefix.len() + 1, &prefix.t_prev())?;
        let dom = enumerate_domain(&spec, DEFAULT_ENUMERATION_CAP)?;
        let list = build_decreasing_list(&s, &prefix)?;
        let best = dom.iter().map(|e| q_eval(&list, &e.value)).collect::<Result<Vec<_>>>()?.into_iter().max();
        let top = QOracle::new(&s, &prefix)?.max();
        if best != Some(list.global_max()) || best != Some(top) {
            misses += 1;
        }
    }
    let ok = misses == 0;
    Ok(finish(5, NAMES[4], minutes(10), start, ok, format!("{instances} instances, {misses} misses")))
}

/// Outcome ratios of the exponential mechanism on neighboring quality
/// vectors, plus the composition examples.
pub fn criterion_6(seed: u64) -> Result<CriterionResult> {
    let start = Instant::now();
    let mut rng = RandomSource::new(seed, 6);
    let (per_eps, mut failures) = (1000, 0);
    for eps in [0.1, 1.0, 5.0] {
        for _ in 0..per_eps {
            let n = rng.gen_range(2..=12);
            let q: Vec<Rational> = (0..n).map(|_| Rational::from(rng.gen_range(0..=20i64))).collect();
            let q2: Vec<Rational> = q
                .iter()
                .map(|v| {
                    let shift = Rational::new(rng.gen_range(-4..=4i64), 4).expect("nonzero");
                    v + &shift
                })
                .collect();
            if !dp_ratio_audit(&q, &q2, eps)? {
                failures += 1;
            }
        }
    }
    let adv = advanced_composition(2, 0.1, 0.0, (-1f64).exp())?;
    let basic = basic_composition(&[PrivacyParams { eps: 0.5, delta: 0.0 }, PrivacyParams { eps: 0.3, delta: 1e-6 }]);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-15;
    let formulas = close(adv.eps, 0.24)
        && close(adv.delta, (-1f64).exp())
        && close(basic.eps, 0.8)
        && close(basic.delta, 1e-6)
        && basic_composition(&[]) == PrivacyParams::zero();
    let ok = failures == 0 && formulas;
    Ok(finish(
        6,
        NAMES[5],
        minutes(2),
        start,
        ok,
        format!(
            "{} audits, {failures} failures; composition examples {}",
            3 * per_eps,
            if formulas { "reproduced" } else { "wrong" }
        ),
    ))
}

fn deep_point_trials(id: u8, cfg: &ExperimentConfig, need: usize, limit: Duration) -> Result<CriterionResult> {
    let start = Instant::now();
    let summary = run_trials(cfg)?;
    let ok = summary.successes >= need;
    Ok(finish(
        id,
        NAMES[id as usize - 1],
        limit,
        start,
        ok,
        format!(
            "m={}, {}/{} runs reach depth {} (need {need})",
            cfg.m, summary.successes, cfg.trials, cfg.success_threshold()
        ),
    ))
}

pub fn criterion_7_config(seed: u64) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(TrialKind::Solve, 1, 2, 0);
    (cfg.alpha, cfg.beta, cfg.eps, cfg.delta, cfg.trials, cfg.seed) = (0.3, 0.2, 2.0, 0.01, 100, seed);
    cfg.m = required_size(1, cfg.x, cfg.alpha, cfg.beta, cfg.eps, cfg.delta)?.max(500);
    Ok(cfg)
}

pub fn criterion_7(seed: u64) -> Result<CriterionResult> {
    deep_point_trials(7, &criterion_7_config(seed)?, 75, minutes(5))
}

pub fn criterion_8_config(seed: u64) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(TrialKind::Solve, 2, 2, 0);
    (cfg.alpha, cfg.beta, cfg.eps, cfg.delta, cfg.trials, cfg.seed) = (0.25, 0.2, 2.0, 0.01, 20, seed);
    cfg.m = required_size(2, cfg.x, cfg.alpha, cfg.beta, cfg.eps, cfg.delta)?;
    Ok(cfg)
}

pub fn criterion_8(seed: u64) -> Result<CriterionResult> {
    deep_point_trials(8, &criterion_8_config(seed)?, 15, minutes(30))
}

/// Grid bound and sample size for the learner experiment. General
/// position caps a sample on `[±X]^2` at `2(2X+1)` points.
pub const LEARN_GRID: i64 = 4;
pub const LEARN_SIZE: usize = 12;

/// Smallest `eps` for which each branch's deep-point run is above the
/// baseline threshold at `LEARN_SIZE` points.
pub fn criterion_9_eps(alpha: f64, beta: f64, delta: f64) -> Result<f64> {
    Ok(4.0 * required_eps(2, LEARN_GRID, LEARN_SIZE, alpha / 2.0, beta / 2.0, delta / 3.0)?)
}

pub fn criterion_9(seed: u64) -> Result<CriterionResult> {
    let start = Instant::now();
    let (alpha, beta, delta) = (0.3, 0.2, 0.01);
    let eps = criterion_9_eps(alpha, beta, delta)?;
    let budget = PrivacyParams { eps, delta };
    let need = ((1.0 - alpha) * LEARN_SIZE as f64 - 1e-9).ceil() as usize;
    let outcomes = (0..20u64)
        .into_par_iter()
        .map(|t| {
            let seed = seed.wrapping_add(t);
            // Resample on a fresh stream when greedy general position stalls.
            let mut data = None;
            for stream in 0..10 {
                match generate_labeled_instance_with_hidden(2, LEARN_GRID, LEARN_SIZE, &mut RandomSource::new(seed, 100 + stream), true) {
                    Ok(inst) => {
                        data = Some(inst.points);
                        break;
                    }
                    Err(Error::RejectionBudget(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            let data = data.ok_or(Error::RejectionBudget(10))?;
            let run = learn_halfspace(&data, alpha, beta, eps, delta, &mut RandomSource::new(seed, 1))?;
            Ok((run.val >= need, run.accounting_ok(&budget)))
        })
        .collect::<Result<Vec<_>>>()?;
    let wins = outcomes.iter().filter(|o| o.0).count();
    let accounted = outcomes.iter().all(|o| o.1);
    let ok = wins >= 15 && accounted;
    Ok(finish(
        9,
        NAMES[8],
        minutes(30),
        start,
        ok,
        format!(
            "X={LEARN_GRID}, m={LEARN_SIZE}, eps={eps:.1}: {wins}/20 runs reach val {need} (need 15); composed <= (eps, delta) {}",
            if accounted { "yes" } else { "no" }
        ),
    ))
}

/// Noisy copies of six grid points fail general position at most 10% of the time.
pub fn criterion_10(seed: u64) -> Result<CriterionResult> {
    let start = Instant::now();
    let (trials, beta) = (500, 0.1);
    let one = 1.into();
    let failures = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = RandomSource::new(seed.wrapping_add(t), 10);
            let base = generate_labeled_instance(2, 1, 6, &mut rng, false)?;
            let (noisy, _) = add_noise(&base, beta, base.len(), &one, &mut rng)?;
            let xs: Vec<RatVector> = noisy.into_iter().map(|p| p.x).collect();
            Ok(!general_position_check(&xs)?)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|f| *f)
        .count();
    let rate = failures as f64 / trials as f64;
    let ok = rate <= beta;
    Ok(finish(10, NAMES[9], minutes(2), start, ok, format!("{trials} trials, failure rate {rate:.3} (limit {beta})")))
}

/// Tiny realizable datasets stay realizable after noise of norm below `1/X'`.
pub fn criterion_11(seed: u64) -> Result<CriterionResult> {
    let start = Instant::now();
    let datasets = 100;
    let one = 1.into();
    let xp = margin_bound(2, &one);
    let broken = (0..datasets as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = RandomSource::new(seed.wrapping_add(t), 11);
            let m = rng.gen_range(2..=6);
            let base = generate_labeled_instance(2, 1, m, &mut rng, false)?;
            let (noisy, _) = add_noise(&base, 0.1, base.len(), &one, &mut rng)?;
            Ok(!is_realizable_points(&base)? || !is_realizable_points(&noisy)?)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|b| *b)
        .count();
    let ok = broken == 0 && xp == 2048.into();
    Ok(finish(11, NAMES[10], minutes(10), start, ok, format!("{datasets} datasets, X'={xp}, {broken} lost realizability")))
}

pub fn run_criterion(id: u8, seed: u64) -> Result<CriterionResult> {
    match id {
        1 => criterion_1(seed),
        2 => criterion_2(seed),
        3 => criterion_3(seed),
        4 => criterion_4(seed),
        5 => criterion_5(seed),
        6 => criterion_6(seed),
        7 => criterion_7(seed),
        8 => criterion_8(seed),
        9 => criterion_9(seed),
        10 => criterion_10(seed),
        11 => criterion_11(seed),
        other => Err(Error::InvalidParameter(format!("no criterion {other}"))),
    }
}

/// Runs the listed criteria in order; an error counts as a failure.
pub fn run_acceptance(ids: &[u8], seed: u64) -> Vec<CriterionResult> {
    ids.iter()
        .map(|&id| {
            let start = Instant::now();
            run_criterion(id, seed).unwrap_or_else(|e| CriterionResult {
                id,
                name: (id as usize).checked_sub(1).and_then(|j| NAMES.get(j)).copied().unwrap_or("unknown"),
                passed: false,
                detail: format!("error: {e}"),
                elapsed_ms: start.elapsed().as_millis(),
                limit_ms: 0,
            })
        })
        .collect()
}
