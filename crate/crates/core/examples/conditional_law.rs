//! Interior values given the boundary at fixed times, against the fiber law.

use qtoda::arrays::diagonal_boundary;
use qtoda::qnum::{ratio, DriftParams};
use qtoda::sim::conditional_law_test;

fn main() {
    let d = DriftParams::driftless(ratio(1, 2)).unwrap();
    let s0 = diagonal_boundary(&[2, 2], &d).unwrap();
    let rep = conditional_law_test(s0.shape(), &s0, &[0.25, 0.5, 1.0, 2.0], 20_000, 7).unwrap();
    println!("{}", serde_json::to_string_pretty(&rep).unwrap());
}
