//! Scaled coefficients, Doob rates and potentials as q -> 1.

use qtoda::cli::{limit_probes, limit_verdict};
use qtoda::toda::classical_limit;

fn main() {
    for (probe, label) in limit_probes() {
        let pts = classical_limit(&probe, 10).unwrap();
        let (ok, last) = limit_verdict(&pts);
        println!("{label}: target {} last gap {last:.3e} {}", pts[0].target, if ok { "ok" } else { "slow" });
    }
}
