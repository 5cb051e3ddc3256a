//! Instance generation, seeded trial runs and the acceptance suite.

mod acceptance;
mod generate;
mod trials;

pub use generate::{
    generate_arbitrary_instance, generate_feasibility_instance, generate_feasibility_instance_with_point,
    generate_labeled_instance, generate_labeled_instance_with_hidden, separable_line, FeasibilityInstance,
    LabeledInstance, HIDDEN_POINT_DENOM, REJECTION_FACTOR,
};
pub use trials::{
    configured_workers, run_trial, run_trials, ExperimentConfig, TrialKind, TrialRow, TrialSummary, WORKERS_ENV,
};
pub use acceptance::{
    criterion_7_config, criterion_8_config, criterion_9_eps, run_acceptance, run_criterion, tight_witness,
    CriterionResult, LEARN_GRID, LEARN_SIZE, NAMES,
};
