use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use privfeas::deep_point::{find_deep_point_with, DeepPointOptions};
use privfeas::dp::{audit_report, RandomSource};
use privfeas::geometry::depth;
use privfeas::harness::{
    generate_feasibility_instance_with_point, generate_labeled_instance_with_hidden, run_acceptance, run_trials,
    ExperimentConfig, TrialKind,
};
use privfeas::io::{read_json, write_json, AuditInput, InstanceFile, LabeledFile, ModelFile};
use privfeas::learner::{add_noise, learn_halfspace_with, rescale_to_grid};
use privfeas::optimizer::Backend;
use privfeas::qfun::DEFAULT_ENUMERATION_CAP;
use privfeas::{Error, Result};

#[derive(Parser)]
#[command(name = "privfeas", version, about = "Private linear feasibility and halfspace learning")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a feasibility instance or a labeled sample.
    Gen(GenArgs),
    /// Find a deep point of a constraint instance.
    Solve(SolveArgs),
    /// Learn a halfspace from labeled points.
    Learn(LearnArgs),
    /// Audit the exponential mechanism on two neighboring quality vectors.
    Audit(AuditArgs),
    /// Run seeded trials and write a CSV summary.
    Trials(TrialArgs),
    /// Run the acceptance suite; exits nonzero if any criterion fails.
    Accept(AcceptArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Feasibility,
    Labeled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Optimizer {
    Expmech,
}

impl From<Optimizer> for Backend {
    fn from(o: Optimizer) -> Self {
        match o {
            Optimizer::Expmech => Backend::ExpMech,
        }
    }
}

#[derive(Args)]
struct Privacy {
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    #[arg(long, default_value_t = 0.2)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "expmech")]
    optimizer: Optimizer,
    /// Largest explicit domain the optimizer may enumerate.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u128,
}

impl Privacy {
    fn options(&self) -> DeepPointOptions {
        DeepPointOptions { cap: self.cap, backend: self.optimizer.into() }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long)]
    d: usize,
    #[arg(long = "X", short = 'X')]
    x: i64,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Labeled samples only: reject points that break general position.
    #[arg(long)]
    general_position: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    p: Privacy,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LearnArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    p: Privacy,
    /// Perturb and rescale the points before learning.
    #[arg(long)]
    noise: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct TrialArgs {
    #[arg(long, default_value = "solve")]
    kind: String,
    #[arg(long)]
    d: usize,
    #[arg(long = "X", short = 'X')]
    x: i64,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[command(flatten)]
    p: Privacy,
    /// Fill the `millis` column with wall time.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AcceptArgs {
    /// Criteria to run, e.g. `--only 1,2,6`.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

fn emit_json<T: serde::Serialize>(out: &Option<PathBuf>, value: &T) -> Result<()> {
    match out {
        Some(path) => write_json(path, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn gen(a: &GenArgs) -> Result<()> {
    let mut rng = RandomSource::new(a.seed, 0);
    match a.kind {
        GenKind::Feasibility => {
            let inst = generate_feasibility_instance_with_point(a.d, a.x, a.m, &mut rng)?;
            emit_json(&a.out, &InstanceFile::new(&inst.constraints, Some(inst.hidden)))
        }
        GenKind::Labeled => {
            let inst = generate_labeled_instance_with_hidden(a.d, a.x, a.m, &mut rng, a.general_position)?;
            let file = LabeledFile { d: a.d, bound: BigInt::from(a.x), points: inst.points, hidden: Some(inst.hidden) };
            emit_json(&a.out, &file)
        }
    }
}

fn solve(a: &SolveArgs) -> Result<()> {
    let s = read_json::<InstanceFile>(&a.input)?.to_set()?;
    let mut rng = RandomSource::new(a.p.seed, 0);
    let run = find_deep_point_with(&s, a.p.alpha, a.p.beta, a.p.eps, a.p.delta, &mut rng, &a.p.options())?;
    eprintln!("depth {} of {}", depth(&s, &run.point)?, s.len());
    emit_json(&a.out, &run)
}

fn learn(a: &LearnArgs) -> Result<()> {
    let file: LabeledFile = read_json(&a.input)?;
    let mut rng = RandomSource::new(a.p.seed, 0);
    let points = if a.noise {
        let (noisy, grid) = add_noise(&file.points, a.p.beta, file.points.len(), &file.bound, &mut rng.fork(7))?;
        rescale_to_grid(&noisy, &grid, &file.bound)?.0
    } else {
        file.points
    };
    let run = learn_halfspace_with(&points, a.p.alpha, a.p.beta, a.p.eps, a.p.delta, &mut rng, &a.p.options())?;
    let w = run.hypothesis.w().to_integer().and_then(|w| i64::try_from(w).ok()).expect("offset in {-1, 0, 1}");
    let model = ModelFile { a: run.hypothesis.a().clone(), w, val: run.val, empirical_error: run.empirical_error };
    eprintln!("val {} of {}; composed eps {} delta {}", run.val, points.len(), run.total.eps, run.total.delta);
    emit_json(&a.out, &model)
}

fn audit(a: &AuditArgs) -> Result<bool> {
    let input: AuditInput = read_json(&a.input)?;
    let report = audit_report(&input.q, &input.q2, input.eps)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(report.passed)
}

fn trials(a: &TrialArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::new(a.kind.parse::<TrialKind>()?, a.d, a.x, a.m);
    (cfg.alpha, cfg.beta, cfg.eps, cfg.delta) = (a.p.alpha, a.p.beta, a.p.eps, a.p.delta);
    (cfg.trials, cfg.seed, cfg.backend, cfg.cap) = (a.trials, a.p.seed, a.p.optimizer.into(), a.p.cap);
    cfg.record_timing = a.timing;
    let summary = run_trials(&cfg)?;
    match &a.out {
        Some(path) => summary.write_csv(File::create(path)?)?,
        None => summary.write_csv(io::stdout().lock())?,
    }
    eprintln!("success rate {}/{} = {:.3}", summary.successes, summary.rows.len(), summary.rate());
    Ok(())
}

fn accept(a: &AcceptArgs) -> bool {
    let ids: Vec<u8> = if a.only.is_empty() { (1..=11).collect() } else { a.only.clone() };
    let results = run_acceptance(&ids, a.seed);
    let mut out = io::stdout().lock();
    for r in &results {
        let _ = writeln!(out, "{r}");
    }
    results.iter().all(|r| r.passed)
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.cmd {
        Cmd::Gen(a) => gen(a).map(|_| true),
        Cmd::Solve(a) => solve(a).map(|_| true),
        Cmd::Learn(a) => learn(a).map(|_| true),
        Cmd::Audit(a) => audit(a),
        Cmd::Trials(a) => trials(a).map(|_| true),
        Cmd::Accept(a) => Ok(accept(a)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::DomainTooLarge { .. }) {
                eprintln!("hint: raise --cap or use a smaller grid");
            }
            ExitCode::from(2)
        }
    }
}
