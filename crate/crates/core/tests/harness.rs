use privfeas::dp::RandomSource;
use privfeas::harness::{
    criterion_7_config, criterion_8_config, criterion_9_eps, generate_labeled_instance, run_criterion, run_trials,
    ExperimentConfig, TrialKind, LEARN_GRID, LEARN_SIZE, NAMES,
};
use privfeas::io::{InstanceFile, LabeledFile};
use privfeas::harness::generate_feasibility_instance_with_point;
use privfeas::Error;

#[test]
fn frozen_acceptance_configs() {
    let c7 = criterion_7_config(1).unwrap();
    assert_eq!((c7.d, c7.x, c7.m, c7.trials), (1, 2, 500, 100));
    let c8 = criterion_8_config(1).unwrap();
    assert_eq!((c8.d, c8.x, c8.m, c8.trials), (2, 2, 5108, 20));
    let eps = criterion_9_eps(0.3, 0.2, 0.01).unwrap();
    assert!((eps - 8_832.844_701_654_52).abs() < 1e-6, "{eps}");
    assert_eq!((LEARN_GRID, LEARN_SIZE), (4, 12));
    assert_eq!(NAMES.len(), 11);
    assert!(run_criterion(0, 1).is_err());
    assert!(run_criterion(12, 1).is_err());
}

#[test]
fn general_position_caps_grid_samples() {
    // At most two points per row of the grid, so 2(2X+1) in total.
    assert!(matches!(
        generate_labeled_instance(2, 1, 7, &mut RandomSource::new(0, 0), true),
        Err(Error::RejectionBudget(_))
    ));
    let s = generate_labeled_instance(2, 2, 6, &mut RandomSource::new(0, 0), true).unwrap();
    assert_eq!(s.len(), 6);
}

#[test]
fn learn_trials_are_reproducible() {
    let mut cfg = ExperimentConfig::new(TrialKind::Learn, 2, 3, 6);
    cfg.trials = 4;
    cfg.seed = 77;
    cfg.eps = 5.0;
    let a = run_trials(&cfg).unwrap();
    let b = run_trials(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.rows.iter().map(|r| r.seed).collect::<Vec<_>>(), [77, 78, 79, 80]);
    assert!(a.rows.iter().all(|r| r.millis == 0 && r.threshold == 5));
    let csv = a.to_csv_string().unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn config_and_kind_text_forms() {
    let cfg = ExperimentConfig::new(TrialKind::Solve, 2, 3, 10);
    let text = serde_json::to_string(&cfg).unwrap();
    assert!(text.contains(r#""kind":"solve""#) && text.contains(r#""X":3"#), "{text}");
    assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg);
    assert_eq!("learn".parse::<TrialKind>().unwrap(), TrialKind::Learn);
    assert!("other".parse::<TrialKind>().is_err());
    let mut bad = cfg.clone();
    bad.trials = 0;
    assert!(run_trials(&bad).is_err());
}

#[test]
fn files_round_trip_generated_data() {
    let mut rng = RandomSource::new(4, 0);
    let inst = generate_feasibility_instance_with_point(2, 3, 12, &mut rng).unwrap();
    let file = InstanceFile::new(&inst.constraints, Some(inst.hidden.clone()));
    let back: InstanceFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
    assert_eq!(back.to_set().unwrap(), inst.constraints);
    assert_eq!(back.hidden, Some(inst.hidden));
    let pts = generate_labeled_instance(2, 3, 5, &mut rng, true).unwrap();
    let lf = LabeledFile { d: 2, bound: 3.into(), points: pts.clone(), hidden: None };
    let back: LabeledFile = serde_json::from_str(&serde_json::to_string(&lf).unwrap()).unwrap();
    assert_eq!(back.points, pts);
}
