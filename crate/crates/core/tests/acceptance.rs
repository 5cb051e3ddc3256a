//! One line per acceptance criterion, then a single verdict.

use std::io::Write;

use privfeas::harness::{run_criterion, NAMES};

const SEED: u64 = 2024;

#[test]
fn acceptance() {
    // Written to the raw handle so the lines survive output capture.
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for id in 1..=NAMES.len() as u8 {
        match run_criterion(id, SEED) {
            Ok(r) => {
                writeln!(out, "{r}").unwrap();
                if !r.passed {
                    failed.push(id);
                }
            }
            Err(e) => {
                writeln!(out, "[FAIL] {id:>2} {}: error: {e}", NAMES[id as usize - 1]).unwrap();
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
