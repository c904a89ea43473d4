mod common;

use common::*;
use num_traits::{One, Zero};
use qtoda::qnum::to_f64;
use qtoda::shapes::{Diagram, SkewShape};
use qtoda::toda::{classical_limit, LimitProbe};
use serde::Deserialize;

fn fact(n: i64) -> Q {
    (1..=n).fold(Q::one(), |a, k| a * q(k, 1))
}

/// Sum over fillings of `δ_{r+1}` with diagonal `n` of `Π 1/((π-π_up)! (π-π_left)!)`.
fn oracle_classical(n: &[i64]) -> Q {
    if n.iter().any(|&v| v < 0) {
        return Q::zero();
    }
    let r = n.len() as u32;
    let mut fixed = Filling::new();
    for (k, &v) in n.iter().enumerate() {
        fixed.insert((k as i64 + 1, r as i64 - k as i64), v);
    }
    let all = cells(&staircase_parts(r + 1));
    let free: Vec<_> = all.iter().copied().filter(|c| !fixed.contains_key(c)).collect();
    let cap = n.iter().copied().max().unwrap_or(0);
    let mut t = Q::zero();
    for f in brute_fillings(&free, &fixed, cap, &[]) {
        let mut w = Q::one();
        for &(i, j) in &all {
            let v = get(&f, (i, j));
            w /= fact(v - get(&f, (i - 1, j))) * fact(v - get(&f, (i, j - 1)));
        }
        t += w;
    }
    t
}

/// Outer corners of `μ` give `σ_{i+1,j} σ_{i,j+1}`; the end of each row of `μ`
/// gives `β_{i+1,μ_i} σ_{i,μ_i+1}`.
fn oracle_potential(lambda: &[u32], mu: &[u32], alpha: &[u32], sigma: &[i64]) -> Q {
    let inl = |(i, j): (i64, i64)| i >= 1 && j >= 1 && (i as usize) <= lambda.len() && j <= lambda[i as usize - 1] as i64;
    let inm = |(i, j): (i64, i64)| i >= 1 && j >= 1 && (i as usize) <= mu.len() && j <= mu[i as usize - 1] as i64;
    let bcells: Vec<_> = cells(lambda).into_iter().filter(|&c| !inm(c)).collect();
    let s: Filling = bcells.into_iter().zip(sigma.iter().copied()).collect();
    let mut t = 0;
    for (i, j) in cells(mu) {
        if !inm((i + 1, j)) && !inm((i, j + 1)) {
            t += get(&s, (i + 1, j)) * get(&s, (i, j + 1));
        }
    }
    for (k, &m) in mu.iter().enumerate() {
        let i = k as i64 + 1;
        assert!(inl((i, m as i64 + 1)));
        t += beta(alpha, i + 1, m as i64) * get(&s, (i, m as i64 + 1));
    }
    q(t, 1)
}

fn check_sweep(probe: &LimitProbe, target: &Q) -> Vec<f64> {
    let pts = classical_limit(probe, 10).unwrap();
    let tf = to_f64(target);
    let gaps: Vec<f64> = pts.iter().map(|p| (p.scaled - tf).abs()).collect();
    for (p, g) in pts.iter().zip(&gaps) {
        assert_eq!(p.target, tf);
        assert!((p.gap - g).abs() <= 1e-12 * (1.0 + g));
    }
    for w in gaps[3..].windows(2) {
        assert!(w[1] < w[0] || w[0] == 0.0, "{gaps:?}");
    }
    assert!(gaps[9] < 1e-2, "{gaps:?}");
    gaps
}

#[test]
fn coefficients_approach_classical_values() {
    for n in [vec![1], vec![3], vec![1, 1], vec![2, 1], vec![1, 2], vec![2, 2], vec![0, 3]] {
        check_sweep(&LimitProbe::Coeff(n.clone()), &oracle_classical(&n));
    }
    assert_eq!(oracle_classical(&[1, 1]), q(2, 1));
}

#[test]
fn doob_rates_approach_classical_ratios() {
    for (n, i) in [(vec![2], 1usize), (vec![1, 1], 1), (vec![2, 1], 2), (vec![2, 2], 1)] {
        let mut m = n.clone();
        m[i - 1] -= 1;
        let target = oracle_classical(&m) / oracle_classical(&n);
        check_sweep(&LimitProbe::Doob(n, i), &target);
    }
}

#[test]
fn potentials_approach_classical_values() {
    let cases: &[(&[u32], &[u32], &[u32], &[i64])] = &[
        (&[2, 1], &[1], &[], &[1, 2]),
        (&[3, 3, 3], &[2, 2], &[1, 0, 1], &[2, 2, 2, 2, 2]),
        (&[3, 3], &[2], &[0, 1], &[1, 2, 2, 2]),
        (&[4, 4, 3, 2], &[2, 1], &[], &[1; 10]),
        (&[3, 2, 1], &[2, 1], &[], &[1, 2, 1]),
    ];
    for (l, m, a, s) in cases {
        let shape = SkewShape::new(Diagram::new(l.to_vec()).unwrap(), Diagram::new(m.to_vec()).unwrap()).unwrap();
        let target = oracle_potential(l, m, a, s);
        check_sweep(&LimitProbe::Potential { shape, alpha: a.to_vec(), sigma: s.to_vec() }, &target);
    }
}

#[derive(Deserialize)]
struct Frozen {
    probe: String,
    args: Vec<String>,
    target: f64,
    gaps: Vec<f64>,
}

#[test]
fn gap_sequences_are_frozen() {
    let text = include_str!("fixtures/limit_gaps.json");
    let frozen: Vec<Frozen> = serde_json::from_str(text).unwrap();
    assert!(!frozen.is_empty());
    for f in frozen {
        let arg = |k: &str| f.args.iter().position(|a| a == k).map(|p| f.args[p + 1].clone());
        let n: Vec<i64> = arg("--n").unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        let probe = match arg("--probe").as_deref() {
            Some("coeff") => LimitProbe::Coeff(n),
            Some("doob") => LimitProbe::Doob(n, arg("--index").unwrap().parse().unwrap()),
            p => panic!("{p:?}"),
        };
        let pts = classical_limit(&probe, f.gaps.len() as u32).unwrap();
        for (p, g) in pts.iter().zip(&f.gaps) {
            assert_eq!(p.target, f.target, "{}", f.probe);
            assert!((p.gap - g).abs() <= 1e-12 * g.abs().max(1e-300), "{}: {} vs {g}", f.probe, p.gap);
        }
    }
}
