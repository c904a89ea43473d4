//! Exact intertwining checks on a few skew shapes.

use qtoda::cli::intertwining_instances;
use qtoda::dynamics::intertwining_check;

fn main() {
    for (shape, sigma) in intertwining_instances() {
        let r = intertwining_check(&shape, &sigma).unwrap();
        println!(
            "{shape} alpha={:?} q={} sigma={:?}: {}x{} states, HL-LG={} HA={} LL-LG={} {}",
            r.alpha,
            r.q,
            r.sigma,
            r.boundary_states,
            r.full_states,
            r.h_lambda,
            r.h_a,
            r.l_lambda,
            if r.pass { "ok" } else { "MISMATCH" }
        );
    }
}
