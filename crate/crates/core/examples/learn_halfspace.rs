//! Privately learn a halfspace from labeled grid points through the
//! point/halfspace dual.

use privfeas::dp::{PrivacyParams, RandomSource};
use privfeas::harness::{criterion_9_eps, generate_labeled_instance_with_hidden, LEARN_GRID, LEARN_SIZE};
use privfeas::learner::learn_halfspace;

fn main() -> privfeas::Result<()> {
    let (alpha, beta, delta) = (0.3, 0.2, 0.01);
    let eps = criterion_9_eps(alpha, beta, delta)?;
    let inst = generate_labeled_instance_with_hidden(2, LEARN_GRID, LEARN_SIZE, &mut RandomSource::new(3, 0), true)?;
    println!("hidden a = {:?}, w = {}", inst.hidden.a().entries(), inst.hidden.w());

    let run = learn_halfspace(&inst.points, alpha, beta, eps, delta, &mut RandomSource::new(3, 1))?;
    for b in &run.branches {
        println!("w = {:>2}: a = {:?}, val {}", b.w, b.run.point.entries(), b.val);
    }
    println!(
        "chose w = {} with val {}/{} (error {}); composed ({:.1}, {}) within ({eps:.1}, {delta}): {}",
        run.hypothesis.w(),
        run.val,
        inst.points.len(),
        run.empirical_error,
        run.total.eps,
        run.total.delta,
        run.accounting_ok(&PrivacyParams { eps, delta })
    );
    Ok(())
}
