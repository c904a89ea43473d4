//! Small independent implementations used as oracles.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(p: i64, d: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(d))
}

pub fn qp(x: &Q, e: i64) -> Q {
    let mut r = Q::one();
    for _ in 0..e.unsigned_abs() {
        r *= x;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

/// `(x^a; x)_m` for `m >= 0`, and `Π_{k=1}^{-m} 1/(1-x^{a-k})` for `m < 0`; `None` at a pole.
pub fn poch(x: &Q, a: i64, m: i64) -> Option<Q> {
    let mut r = Q::one();
    if m >= 0 {
        for k in 0..m {
            r *= Q::one() - qp(x, a + k);
        }
        Some(r)
    } else {
        for k in 1..=-m {
            let f = Q::one() - qp(x, a - k);
            if f.is_zero() {
                return None;
            }
            r /= f;
        }
        Some(r)
    }
}

pub fn inv_poch(x: &Q, a: i64, m: i64) -> Q {
    poch(x, a, m).map_or(Q::zero(), |v| v.recip())
}

pub fn qbinom(x: &Q, n: i64, k: i64) -> Q {
    if k < 0 || k > n {
        return Q::zero();
    }
    poch(x, 1, n).unwrap() / (poch(x, 1, k).unwrap() * poch(x, 1, n - k).unwrap())
}

/// Partial sums of a zero-padded drift vector.
pub fn s_of(alpha: &[u32], k: i64) -> i64 {
    (1..=k.max(0)).map(|i| alpha.get(i as usize - 1).copied().unwrap_or(0) as i64).sum()
}

pub fn beta(alpha: &[u32], i: i64, j: i64) -> i64 {
    s_of(alpha, i + j - 1) - s_of(alpha, i - 1)
}

/// Cells of a diagram, row-major.
pub fn cells(parts: &[u32]) -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for (r, &p) in parts.iter().enumerate() {
        for c in 1..=p as i64 {
            v.push((r as i64 + 1, c));
        }
    }
    v
}

pub type Filling = std::collections::BTreeMap<(i64, i64), i64>;

pub fn get(f: &Filling, c: (i64, i64)) -> i64 {
    f.get(&c).copied().unwrap_or(0)
}

pub fn valid(f: &Filling, alpha: &[u32]) -> bool {
    f.iter().all(|(&(i, j), &v)| v >= 0 && v >= get(f, (i, j - 1)).max(get(f, (i - 1, j)) - beta(alpha, i, j)))
}

/// All fillings of `free` with values in `[0, cap]` extending `fixed`.
pub fn brute_fillings(free: &[(i64, i64)], fixed: &Filling, cap: i64, alpha: &[u32]) -> Vec<Filling> {
    let mut out = Vec::new();
    let mut vals = vec![0i64; free.len()];
    loop {
        let mut f = fixed.clone();
        for (c, v) in free.iter().zip(&vals) {
            f.insert(*c, *v);
        }
        if valid(&f, alpha) {
            out.push(f);
        }
        let mut p = 0;
        while p < vals.len() && vals[p] == cap {
            vals[p] = 0;
            p += 1;
        }
        if p == vals.len() {
            break;
        }
        vals[p] += 1;
    }
    out
}

pub fn staircase_parts(r: u32) -> Vec<u32> {
    (1..r).rev().collect()
}
