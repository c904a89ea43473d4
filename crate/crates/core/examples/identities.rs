//! Randomized exact identities: the sequence identity, the potential identity on
//! full arrays, and the staircase difference identity.

use qtoda::cli::random_staircase_instance;
use qtoda::dynamics::{staircase_difference_sides, potential_identity_sides, random_skew_instance, sequence_identity_sides};
use qtoda::qnum::{format_scalar, ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let seq = |rng: &mut ChaCha8Rng| (0..5).map(|_| rng.random_range(-3..=3)).collect::<Vec<i64>>();
    let (a, b, c) = (seq(&mut rng), seq(&mut rng), seq(&mut rng));
    let (l, r) = sequence_identity_sides(&a, &b, &c, &ratio(2, 3)).unwrap();
    println!("sequence identity {a:?} {b:?} {c:?}: {} = {}", format_scalar(&l), format_scalar(&r));

    let mut bad = 0;
    for _ in 0..50 {
        let pi = random_skew_instance(&mut rng);
        let (l, r) = potential_identity_sides(&pi).unwrap();
        if l != r {
            bad += 1;
            println!("  mismatch on {}", pi.to_json_string());
        }
    }
    println!("potential identity: {bad} of 50 random arrays disagree");

    for _ in 0..5 {
        let pi = random_staircase_instance(&mut rng);
        let s = staircase_difference_sides(&pi).unwrap();
        println!("{}: {} {} {}", pi.shape(), format_scalar(&s.lhs), format_scalar(&s.collapsed), format_scalar(&s.expanded));
    }
}
