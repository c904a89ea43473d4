//! h^r Q - z Q h^{r-1} on grids k <= n <= (3,..,3).

use qtoda::dynamics::kernel_discrepancy;
use qtoda::qnum::{format_scalar, ratio, DriftParams};

fn main() {
    for alpha in [vec![], vec![2, 1, 0]] {
        let d = DriftParams::new(alpha.clone(), ratio(1, 2)).unwrap();
        for r in 1..=3 {
            println!("alpha={alpha:?} r={r}: {}", format_scalar(&kernel_discrepancy(r, 3, &d)));
        }
    }
}
