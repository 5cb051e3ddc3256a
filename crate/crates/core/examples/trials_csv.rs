//! Seeded solver trials in a worker pool, written as CSV.
//!
//! Set `PRIVFEAS_WORKERS` to fix the number of threads.

use privfeas::harness::{run_trials, ExperimentConfig, TrialKind};

fn main() -> privfeas::Result<()> {
    let mut cfg = ExperimentConfig::new(TrialKind::Solve, 1, 2, 400);
    cfg.trials = 10;
    cfg.seed = 42;
    let summary = run_trials(&cfg)?;
    summary.write_csv(std::io::stdout().lock())?;
    eprintln!("{}/{} reached depth {}", summary.successes, summary.rows.len(), cfg.success_threshold());
    Ok(())
}
