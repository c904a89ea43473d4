//! Simulate the staircase dynamics and audit the projected rates against the
//! Doob-transformed Toda rates.

use qtoda::arrays::diagonal_boundary;
use qtoda::dynamics::{RateModel, RateVariant};
use qtoda::qnum::{ratio, DriftParams};
use qtoda::sim::{doob_theory, rate_audit, run_replicas, simulate, InitialLaw};
use qtoda::toda::ensemble;

fn main() {
    let d = DriftParams::driftless(ratio(1, 2)).unwrap();
    let sigma = diagonal_boundary(&[2, 1], &d).unwrap();
    let shape = sigma.shape().clone();
    let model = RateModel::new(RateVariant::SkewFull, shape.clone(), d.clone()).unwrap();
    let e = ensemble(&shape, &sigma).unwrap();

    let one = simulate(&e.members[0], &model, None, 3);
    print!("{}", one.to_jsonl(serde_json::json!({ "example": "simulation" })));

    let runs = run_replicas(&InitialLaw::Ensemble(e), &model, None, 20_000, 1).unwrap();
    let audit = rate_audit(&runs, &shape, doob_theory(d));
    for row in &audit.rows {
        println!("{:?} {:?} count={} expected={:.1} z={:?}", row.state, row.cell, row.count, row.expected, row.z);
    }
    println!("max |z| = {:.2}", audit.max_abs_z);
}
