//! Fibers over a boundary array, their weights, and the JSON array format.

use qtoda::arrays::{downset, CellArray};
use qtoda::qnum::format_scalar;
use qtoda::shapes::special_sets;
use qtoda::toda::ensemble;

fn main() {
    let sigma = CellArray::from_json_str(
        r#"{"lambda":[3,3,3],"mu":[2,2],"alpha":[1,0,1],"q":"2/3","cells":[[1,3,2],[2,3,2],[3,1,1],[3,2,2],[3,3,2]]}"#,
    )
    .unwrap();
    let shape = sigma.shape().clone();
    let sets = special_sets(&shape);
    println!("{shape}: vert={:?} hor={:?} corners={:?}", sets.vert, sets.hor, sets.corners);

    let e = ensemble(&shape, &sigma).unwrap();
    for (m, p) in e.members.iter().zip(e.probabilities()) {
        println!("{:?} p={}", m.mu_values(), format_scalar(&p));
    }
    println!("normalizer {}", format_scalar(&e.normalizer));
    println!("{} boundary states below sigma", downset(&sigma).len());
    println!("{}", e.members[0].to_json_string());
}
