mod common;

use common::*;
use proptest::prelude::*;
use qtoda::arrays::*;
use qtoda::dynamics::{random_array, random_mu, random_partition};
use qtoda::qnum::DriftParams;
use qtoda::shapes::{Diagram, SkewShape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn as_filling(a: &CellArray) -> Filling {
    a.cells().iter().map(|&c| (c, a.get(c))).collect()
}

fn random_shape(rng: &mut ChaCha8Rng) -> SkewShape {
    loop {
        let n = rng.random_range(2..=9);
        let l = random_partition(rng, n, 4);
        if l.is_empty() {
            continue;
        }
        let m = random_mu(rng, &l);
        return SkewShape::new(l, m).unwrap();
    }
}

fn random_drift(rng: &mut ChaCha8Rng) -> DriftParams {
    let a: Vec<u32> = (0..rng.random_range(0..4)).map(|_| rng.random_range(0..3)).collect();
    DriftParams::new(a, q(1, 2)).unwrap()
}

#[test]
fn fibers_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let sh = random_shape(&mut rng);
        let d = random_drift(&mut rng);
        let sigma = random_array(&mut rng, Layout::new(sh.clone(), Domain::Boundary, d.clone()), 3);
        let fixed = as_filling(&sigma);
        let cap = fixed.values().max().copied().unwrap_or(0) + d.alpha().iter().sum::<u32>() as i64;
        let want: BTreeSet<Filling> = brute_fillings(&sh.mu_cells(), &fixed, cap, d.alpha()).into_iter().collect();
        let f = enumerate_fiber(sh.lambda(), &Constraint::Boundary(sigma.clone()), &d).unwrap();
        let got: BTreeSet<Filling> = f.members.iter().map(as_filling).collect();
        assert_eq!(got.len(), f.len());
        assert_eq!(got, want, "{:?}/{:?}", sh.lambda().parts(), sh.mu().parts());
        assert!(!f.is_empty());
        for m in &f.members {
            assert_eq!(m.restrict(sigma.layout()), sigma);
        }
    }
}

#[test]
fn diagonal_fiber_example() {
    let d = DriftParams::driftless(q(1, 2)).unwrap();
    let lam = qtoda::shapes::staircase(3).unwrap();
    let f = enumerate_fiber(&lam, &Constraint::Diagonal(vec![1, 1]), &d).unwrap();
    assert_eq!(f.len(), 2);
    let vals: Vec<i64> = f.members.iter().map(|m| m.get((1, 1))).collect();
    assert_eq!(vals, vec![0, 1]);
    assert!(enumerate_fiber(&lam, &Constraint::Diagonal(vec![1]), &d).is_err());
    assert!(enumerate_fiber(&lam, &Constraint::Diagonal(vec![1, -1]), &d).is_err());
}

#[test]
fn downsets_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let sh = random_shape(&mut rng);
        let d = random_drift(&mut rng);
        let sigma = random_array(&mut rng, Layout::new(sh.clone(), Domain::Boundary, d.clone()), 2);
        let cs = sh.boundary_cells();
        let top: Vec<i64> = cs.iter().map(|&c| sigma.get(c)).collect();
        let mut want = BTreeSet::new();
        let mut vals = vec![0i64; cs.len()];
        loop {
            let f: Filling = cs.iter().copied().zip(vals.iter().copied()).collect();
            if valid(&f, d.alpha()) {
                want.insert(f);
            }
            let mut p = 0;
            while p < vals.len() && vals[p] == top[p] {
                vals[p] = 0;
                p += 1;
            }
            if p == vals.len() {
                break;
            }
            vals[p] += 1;
        }
        let ds = downset(&sigma);
        let got: BTreeSet<Filling> = ds.iter().map(as_filling).collect();
        assert_eq!(got.len(), ds.len());
        assert_eq!(got, want);
    }
}

#[test]
fn validation_reports_first_bad_cell() {
    let d = DriftParams::new(vec![0, 1], q(1, 2)).unwrap();
    let sh = SkewShape::full(Diagram::new(vec![2, 2]).unwrap());
    let l = Layout::new(sh, Domain::Full, d);
    assert!(CellArray::new(l.clone(), vec![0, 1, 0, 1]).is_ok());
    let bad = CellArray::from_values(l.clone(), vec![0, 2, 0, 0]);
    assert_eq!(validate(&bad), Err((2, 2)));
    let bad = CellArray::from_values(l.clone(), vec![1, 0, 1, 1]);
    assert_eq!(validate(&bad), Err((1, 2)));
    assert!(CellArray::new(l.clone(), vec![0, 0, 0]).is_err());
    assert!(CellArray::new(l, vec![-1, 0, 0, 0]).is_err());
}

#[test]
fn json_rejects_bad_input() {
    let ok = r#"{"lambda":[2,1],"mu":[1],"alpha":[],"q":"1/2","cells":[[1,2,1],[2,1,1]]}"#;
    let a = CellArray::from_json_str(ok).unwrap();
    assert_eq!(a.domain(), Domain::Boundary);
    for bad in [
        r#"{"lambda":[2,1],"mu":[1],"alpha":[],"q":"1/2","cells":[[1,2,1]]}"#,
        r#"{"lambda":[2,1],"mu":[1],"alpha":[],"q":"2","cells":[[1,2,1],[2,1,1]]}"#,
        r#"{"lambda":[2,1],"mu":[1],"alpha":[],"q":"1/2","cells":[[1,2,1],[2,1,1],[3,1,0]]}"#,
        r#"{"lambda":[2,1],"mu":[2],"alpha":[],"q":"1/2","cells":[]}"#,
        r#"{"lambda":[2,1],"mu":[1],"alpha":[],"q":"1/2","cells":[[1,2,-1],[2,1,1]]}"#,
        "not json",
    ] {
        assert!(CellArray::from_json_str(bad).is_err(), "{bad}");
    }
}

fn arb_array() -> impl Strategy<Value = CellArray> {
    (any::<u64>(), 1i64..4).prop_map(|(seed, vmax)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sh = random_shape(&mut rng);
        let d = random_drift(&mut rng);
        let dom = if rng.random_bool(0.5) { Domain::Full } else { Domain::Boundary };
        random_array(&mut rng, Layout::new(sh, dom, d), vmax)
    })
}

proptest! {
    #[test]
    fn json_roundtrip(a in arb_array()) {
        let s = a.to_json_string();
        let b = CellArray::from_json_str(&s).unwrap();
        prop_assert_eq!(&b, &a);
        prop_assert!(validate(&b).is_ok());
    }

    #[test]
    fn step_inverse(a in arb_array()) {
        for &c in a.cells() {
            prop_assert_eq!(a.incremented(c).decremented(c), a.clone());
        }
    }
}
