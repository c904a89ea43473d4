//! Jump rates of one state, and the generator on its down-set.

use qtoda::arrays::{downset, fiber_members, Domain, Layout};
use qtoda::dynamics::{generator_matrix, potential, rates, top_sigma, RateModel, RateVariant};
use qtoda::qnum::{format_scalar, ratio, DriftParams};
use qtoda::shapes::{Diagram, SkewShape};

fn main() {
    let shape = SkewShape::new(Diagram::parse("3,2,1").unwrap(), Diagram::parse("2,1").unwrap()).unwrap();
    let d = DriftParams::new(vec![1, 0, 2], ratio(1, 2)).unwrap();
    let sigma = top_sigma(&shape, &d, 2);
    let full = Layout::new(shape.clone(), Domain::Full, d.clone());
    let states: Vec<_> = downset(&sigma).iter().flat_map(|s| fiber_members(&full, s)).collect();

    let model = RateModel::new(RateVariant::SkewFull, shape.clone(), d).unwrap();
    let top = states.last().unwrap();
    println!("state {:?}", top.values());
    for (c, r) in rates(top, &model) {
        println!("  {c:?} -> {}", format_scalar(&r));
    }
    println!("potential of sigma: {}", format_scalar(&potential(&sigma, &shape)));

    let g = generator_matrix(&model, states).unwrap();
    let (n, _) = g.shape();
    let zero_rows = g.row_sums().iter().filter(|s| **s == ratio(0, 1)).count();
    println!("generator {n}x{n}, {} nonzeros, {zero_rows} zero row sums", g.nnz());
}
