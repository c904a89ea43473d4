//! Whittaker coefficients a_r(n) by the fiber sum and by the recursion,
//! and the Toda residual on a small box.

use qtoda::qnum::{format_scalar, ratio, DriftParams};
use qtoda::toda::{box_points, coeff_direct, toda_residual, CoeffTable};

fn main() {
    let d = DriftParams::new(vec![1, 0, 2], ratio(2, 3)).unwrap();
    let mut table = CoeffTable::new(d.clone());
    for r in 1..=3 {
        for n in box_points(r, 2) {
            let a = table.get(&n);
            assert_eq!(a, coeff_direct(&n, &d));
            let res = toda_residual(&n, &mut table);
            println!("r={r} n={n:?} a={} residual={}", format_scalar(&a), format_scalar(&res));
        }
    }
}
