//! Whittaker coefficients `a_r(n,z;q)`, the Toda difference operator, Doob
//! rates, weights and ensembles, and `q -> 1` probes.
//!
//! Conventions: `n_0 = n_{r+1} = 0`, `k_0 = k_r = 0`, and `a_r(n) = 0` as soon
//! as some `n_i < 0`.

use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

use crate::arrays::{enumerate_fiber, fiber_members, CellArray, Constraint, Domain, Layout};
use crate::dynamics::potential;
use crate::error::{Error, Result};
use crate::qnum::{format_scalar, int, pow, ratio, to_f64, DriftParams, ExactScalar};
use crate::shapes::{staircase, Cell, SkewShape};

/// `n_i` with the boundary convention `n_0 = n_{r+1} = 0`.
#[inline]
fn at(n: &[i64], i: i64) -> i64 {
    if i < 1 || i as usize > n.len() {
        0
    } else {
        n[i as usize - 1]
    }
}

fn cells_of_staircase(r: usize) -> Vec<Cell> {
    staircase(r as u32).map(|d| d.cells()).unwrap_or_default()
}

/// `q^{Σ_{δ_r} π_ij(π_ij - π_{i+1,j-1})} Π_{δ_r} z_i^{π_ij} w_r(π,z;q)`, the
/// summand of the coefficient (and the unnormalized `K^r_n`).
pub fn weight_wr(pi: &CellArray) -> ExactScalar {
    let d = pi.drift();
    let r = pi.shape().lambda().len();
    let mut e = 0i64;
    for (i, j) in cells_of_staircase(r) {
        let v = pi.get((i, j));
        e += v * (v - pi.get((i + 1, j - 1))) + d.alpha_k(i) * v;
    }
    let mut w = d.qpow(e);
    for &(i, j) in pi.shape().lambda().cells().iter() {
        let v = pi.get((i, j));
        w *= d.inv_qfact(v - pi.get((i, j - 1)));
        if w.is_zero() {
            return w;
        }
        w *= d.inv_qpoch_pow(1 + d.z_exp(i - 1, i + j - 1), v - pi.get((i - 1, j)));
        if w.is_zero() {
            return w;
        }
    }
    w
}

/// Driftless weight `q^{Σ π(π - π_{i+1,j-1})} Π_{δ_r} binom(π_{i+1,j}, π_ij) binom(π_{i,j+1}, π_ij)`.
pub fn weight_binomial(pi: &CellArray) -> ExactScalar {
    let d = pi.drift();
    let r = pi.shape().lambda().len();
    let mut e = 0i64;
    let mut w = ExactScalar::one();
    for (i, j) in cells_of_staircase(r) {
        let v = pi.get((i, j));
        e += v * (v - pi.get((i + 1, j - 1)));
        w *= d.binom(pi.get((i + 1, j)), v) * d.binom(pi.get((i, j + 1)), v);
    }
    w * d.qpow(e)
}

/// `a_r(n,z;q)` by summing over `Π^{r,α}_n`.
///
/// ```
/// use qtoda::qnum::{ratio, DriftParams};
/// use qtoda::toda::coeff_direct;
/// let d = DriftParams::driftless(ratio(1, 2)).unwrap();
/// assert_eq!(coeff_direct(&[1, 1], &d), ratio(24, 1));
/// ```
pub fn coeff_direct(n: &[i64], drift: &DriftParams) -> ExactScalar {
    if n.iter().any(|&v| v < 0) {
        return ExactScalar::zero();
    }
    if n.is_empty() {
        return ExactScalar::one();
    }
    let lam = staircase(n.len() as u32 + 1).unwrap();
    let fiber = enumerate_fiber(&lam, &Constraint::Diagonal(n.to_vec()), drift).expect("staircase fiber");
    fiber.members.iter().map(weight_wr).fold(ExactScalar::zero(), |a, b| a + b)
}

/// `q_{r,α}(n,k) = Π_{i=1}^r 1/((q)_{n_i-k_i} (q z_{i-1,r})_{n_i-k_{i-1}})`,
/// with `k` of length `r-1`.
pub fn kernel(n: &[i64], k: &[i64], drift: &DriftParams) -> ExactScalar {
    let r = n.len() as i64;
    if n.iter().chain(k).any(|&v| v < 0) {
        return ExactScalar::zero();
    }
    let mut w = ExactScalar::one();
    for i in 1..=r {
        w *= drift.inv_qfact(at(n, i) - at(k, i));
        if w.is_zero() {
            return w;
        }
        w *= drift.inv_qpoch_pow(1 + drift.z_exp(i - 1, r), at(n, i) - at(k, i - 1));
        if w.is_zero() {
            return w;
        }
    }
    w
}

/// `q^{Σ k_i(k_i - k_{i+1})} z^k`, the prefactor of the recursion.
pub fn recursion_prefactor(k: &[i64], drift: &DriftParams) -> ExactScalar {
    let mut e = 0;
    for i in 1..=k.len() as i64 {
        e += at(k, i) * (at(k, i) - at(k, i + 1)) + drift.alpha_k(i) * at(k, i);
    }
    drift.qpow(e)
}

/// Memoized recursive coefficients for one drift.
///
/// Confine a table to one thread (it is `&mut` on lookup).
#[derive(Debug, Clone)]
pub struct CoeffTable {
    drift: DriftParams,
    memo: HashMap<Vec<i64>, ExactScalar>,
}

impl CoeffTable {
    pub fn new(drift: DriftParams) -> Self {
        CoeffTable { drift, memo: HashMap::new() }
    }

    pub fn drift(&self) -> &DriftParams {
        &self.drift
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// `a_r(n)` via `Σ_k q^{Σk(k-k')} z^k q_{r,α}(n,k) a_{r-1}(k)`.
    pub fn get(&mut self, n: &[i64]) -> ExactScalar {
        if n.iter().any(|&v| v < 0) {
            return ExactScalar::zero();
        }
        if n.is_empty() {
            return ExactScalar::one();
        }
        if let Some(v) = self.memo.get(n) {
            return v.clone();
        }
        let r = n.len();
        let bounds: Vec<i64> = n[..r - 1].to_vec();
        let mut k = vec![0i64; r - 1];
        let mut total = ExactScalar::zero();
        loop {
            let w = kernel(n, &k, &self.drift);
            if !w.is_zero() {
                let sub = self.get(&k);
                total += w * recursion_prefactor(&k, &self.drift) * sub;
            }
            // odometer over the box 0 <= k_i <= bounds_i
            let mut p = 0;
            while p < k.len() && k[p] == bounds[p] {
                k[p] = 0;
                p += 1;
            }
            if p == k.len() {
                break;
            }
            k[p] += 1;
        }
        self.memo.insert(n.to_vec(), total.clone());
        total
    }
}

/// One-shot recursive coefficient.
pub fn coeff_recursive(n: &[i64], drift: &DriftParams) -> ExactScalar {
    CoeffTable::new(drift.clone()).get(n)
}

/// `(h^{r,α} f)(n) = Σ_{i=0}^r [q^{n_{i+1}-n_i} z_{i,r} f(n-e_i) + (1-q^{n_{i+1}-n_i}) z_{i,r} f(n)]`,
/// with no shift term at `i = 0`.
pub fn h_apply<F: FnMut(&[i64]) -> ExactScalar>(n: &[i64], drift: &DriftParams, mut f: F) -> ExactScalar {
    let r = n.len() as i64;
    let fn0 = f(n);
    let mut total = ExactScalar::zero();
    for i in 0..=r {
        let ex = at(n, i + 1) - at(n, i);
        let z = drift.z(i, r);
        if i >= 1 {
            let mut m = n.to_vec();
            m[i as usize - 1] -= 1;
            total += drift.qpow(ex) * &z * f(&m);
        }
        total += drift.one_minus_qpow(ex) * z * &fn0;
    }
    total
}

/// `(h^{r,α} a_r)(n)`; zero when the coefficients solve the Toda equation.
pub fn toda_residual(n: &[i64], table: &mut CoeffTable) -> ExactScalar {
    let drift = table.drift.clone();
    h_apply(n, &drift, |m| table.get(m))
}

/// Rates of `L^{r,α}`: `q^{n_{i+1}-n_i} z_{i,r} a_r(n-e_i)/a_r(n)`.
pub fn doob_rates(n: &[i64], table: &mut CoeffTable) -> Vec<ExactScalar> {
    let r = n.len() as i64;
    let an = table.get(n);
    (1..=r)
        .map(|i| {
            if at(n, i) == 0 {
                return ExactScalar::zero();
            }
            let mut m = n.to_vec();
            m[i as usize - 1] -= 1;
            let d = table.drift().clone();
            d.qpow(at(n, i + 1) - at(n, i)) * d.z(i, r) * table.get(&m) / &an
        })
        .collect()
}

/// Both sides of `h^{r,α}_n q_r(n,k) = z_r (h^{r-1,α}_k)^* q_r(n,k)`, where
/// `(h^{r-1,α})^* = Σ_{i>=1} q^{k_i-k_{i-1}} z_{i-1,r-1} R_{k_i} + Σ_{i=0}^{r-1} (1-q^{k_{i+1}-k_i}) z_{i,r-1}`.
pub fn kernel_adjoint_sides(n: &[i64], k: &[i64], drift: &DriftParams) -> (ExactScalar, ExactScalar) {
    let r = n.len() as i64;
    let lhs = h_apply(n, drift, |m| kernel(m, k, drift));
    let r1 = r - 1;
    let base = kernel(n, k, drift);
    let mut rhs = ExactScalar::zero();
    for i in 0..=r1 {
        if i >= 1 {
            let mut kk = k.to_vec();
            kk[i as usize - 1] += 1;
            rhs += drift.qpow(at(k, i) - at(k, i - 1)) * drift.z(i - 1, r1) * kernel(n, &kk, drift);
        }
        rhs += drift.one_minus_qpow(at(k, i + 1) - at(k, i)) * drift.z(i, r1) * &base;
    }
    (lhs, drift.z_k(r) * rhs)
}

/// Which weight formula to use on a full array.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightForm {
    /// `W̃_{λ,μ}(π,z;q)` with the quadratic exponent `D_{λ,μ}`.
    Skew,
    /// Staircase binomial form (driftless).
    Binomial,
    /// Staircase `w_r` form.
    Wr,
}

/// `W̃_{λ,μ}(π,z;q)`; the array's own `μ` is ignored in favour of `shape`.
pub fn weight(pi: &CellArray, shape: &SkewShape) -> Result<ExactScalar> {
    if pi.domain() != Domain::Full || pi.shape().lambda() != shape.lambda() {
        return Err(Error::Precondition("weight needs a full array on lambda".into()));
    }
    crate::arrays::validate(pi).map_err(Error::InvalidArray)?;
    Ok(skew_weight(pi, shape))
}

/// Weight in a chosen form (staircase forms need `λ = δ_{r+1}`).
pub fn weight_in(pi: &CellArray, shape: &SkewShape, form: WeightForm) -> Result<ExactScalar> {
    match form {
        WeightForm::Skew => weight(pi, shape),
        WeightForm::Binomial | WeightForm::Wr => {
            let r = pi.shape().lambda().len();
            if *pi.shape().lambda() != staircase(r as u32 + 1)? {
                return Err(Error::Precondition("staircase weight needs lambda = staircase".into()));
            }
            crate::arrays::validate(pi).map_err(Error::InvalidArray)?;
            Ok(if form == WeightForm::Wr { weight_wr(pi) } else { weight_binomial(pi) })
        }
    }
}

pub(crate) fn skew_weight(pi: &CellArray, shape: &SkewShape) -> ExactScalar {
    let d = pi.drift();
    let g = |c: Cell| pi.get(c);
    let mut e = 0i64;
    let mut w = ExactScalar::one();
    for (i, j) in shape.mu_cells() {
        let v = g((i, j));
        let x = g((i + 1, j - 1));
        e += v * v + d.alpha_k(i) * v;
        if shape.in_lambda((i + 1, j - 1)) {
            e -= v * x;
        }
        w *= d.binom(v, g((i, j - 1)));
        w *= d.qfact(v) * d.inv_qfact(g((i - 1, j)));
        w *= d.inv_qpoch_pow(1 + d.z_exp(i - 1, i + j - 1), v - g((i - 1, j)));
        if shape.in_boundary((i, j + 1)) {
            w *= d.binom(g((i, j + 1)), v);
        }
        if shape.in_boundary((i + 1, j)) {
            let a = 1 + d.z_exp(i, i + j);
            let below = g((i + 1, j));
            w *= d.qpoch_pow(a, below).unwrap() * d.inv_qfact(v) * d.inv_qpoch_pow(a, below - v);
        }
    }
    for (i, j) in shape.boundary_cells() {
        if shape.in_mu((i + 1, j - 1)) {
            e -= g((i, j)) * g((i + 1, j - 1));
        }
    }
    w * d.qpow(e)
}

/// A fiber with exact weights and normalizer `A = Σ W`.
#[derive(Clone, Debug)]
pub struct WeightedEnsemble {
    pub sigma: CellArray,
    pub members: Vec<CellArray>,
    pub weights: Vec<ExactScalar>,
    pub normalizer: ExactScalar,
}

impl WeightedEnsemble {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `K^{λ,μ}_σ(π)` for each member.
    pub fn probabilities(&self) -> Vec<ExactScalar> {
        self.weights.iter().map(|w| w / &self.normalizer).collect()
    }

    /// Build from explicit members and weights.
    pub fn from_parts(sigma: CellArray, members: Vec<CellArray>, weights: Vec<ExactScalar>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyFiber);
        }
        let normalizer = weights.iter().fold(ExactScalar::zero(), |a, b| a + b);
        Ok(WeightedEnsemble { sigma, members, weights, normalizer })
    }
}

/// The conditional law `K^{λ,μ}_σ` on `Π^{λ,α}_σ`.
pub fn ensemble(shape: &SkewShape, sigma: &CellArray) -> Result<WeightedEnsemble> {
    if sigma.domain() != Domain::Boundary || sigma.shape() != shape {
        return Err(Error::Precondition("sigma must be a boundary array on the given shape".into()));
    }
    crate::arrays::validate(sigma).map_err(Error::InvalidArray)?;
    let full = Layout::new(shape.clone(), Domain::Full, sigma.drift().clone());
    let members = fiber_members(&full, sigma);
    let weights = members.iter().map(|p| skew_weight(p, shape)).collect();
    WeightedEnsemble::from_parts(sigma.clone(), members, weights)
}

/// Residual coefficients of `ℌ^α_q φ` for the truncated series
/// `φ = Σ_{n <= cap} a_r(n) y^n`, on monomials with every exponent `<= cap-1`.
pub fn series_residual(r: usize, cap: i64, drift: &DriftParams) -> BTreeMap<Vec<i64>, ExactScalar> {
    assert!(r >= 1 && cap >= 1);
    let mut table = CoeffTable::new(drift.clone());
    let mut acc: HashMap<Vec<i64>, ExactScalar> = HashMap::new();
    let ri = r as i64;
    for n in box_points(r, cap) {
        let a = table.get(&n);
        for i in 0..=ri {
            let z = drift.z(i, ri);
            // (1 - y_i) y^n, then D_{i+1} D_i^{-1} multiplies y^m by q^{m_{i+1} - m_i}
            let own = drift.qpow(at(&n, i + 1) - at(&n, i)) - ExactScalar::one();
            *acc.entry(n.clone()).or_insert_with(ExactScalar::zero) += &z * own * &a;
            if i >= 1 {
                let mut m = n.clone();
                m[i as usize - 1] += 1;
                let sh = drift.qpow(at(&m, i + 1) - at(&m, i));
                *acc.entry(m).or_insert_with(ExactScalar::zero) -= &z * sh * &a;
            }
        }
    }
    acc.into_iter().filter(|(m, _)| m.iter().all(|&v| v < cap)).collect()
}

/// All points of `[0, cap]^r`, lexicographic.
pub fn box_points(r: usize, cap: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        let mut next = Vec::new();
        for p in &out {
            for v in 0..=cap {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Quantity tracked by [`classical_limit`].
#[derive(Clone, Debug)]
pub enum LimitProbe {
    /// `(1-q)^{2|n|} a_r(n;q)`.
    Coeff(Vec<i64>),
    /// `(1-q)^{-2}` times the `i`-th Doob rate (1-based `i`).
    Doob(Vec<i64>, usize),
    /// `(1-q)^{-2} V_{λ,μ}(σ)` with boundary values `sigma` (row-major over `λ/μ`).
    Potential { shape: SkewShape, alpha: Vec<u32>, sigma: Vec<i64> },
}

/// One row of a limit sweep.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LimitPoint {
    pub j: u32,
    pub q: String,
    pub scaled: f64,
    pub target: f64,
    pub gap: f64,
}

fn factorial(n: i64) -> ExactScalar {
    (1..=n.max(0)).fold(ExactScalar::one(), |a, k| a * int(k))
}

/// `ã_r(n) = Σ_π Π 1/((π_ij-π_{i-1,j})! (π_ij-π_{i,j-1})!)`.
pub fn classical_coeff(n: &[i64]) -> ExactScalar {
    if n.iter().any(|&v| v < 0) {
        return ExactScalar::zero();
    }
    if n.is_empty() {
        return ExactScalar::one();
    }
    let d = DriftParams::driftless(ratio(1, 2)).unwrap();
    let lam = staircase(n.len() as u32 + 1).unwrap();
    let fiber = enumerate_fiber(&lam, &Constraint::Diagonal(n.to_vec()), &d).unwrap();
    let mut total = ExactScalar::zero();
    for p in &fiber.members {
        let mut w = ExactScalar::one();
        for &(i, j) in lam.cells().iter() {
            let v = p.get((i, j));
            w /= factorial(v - p.get((i - 1, j))) * factorial(v - p.get((i, j - 1)));
        }
        total += w;
    }
    total
}

/// Limit target of the scaled potential:
/// `Σ_{C(μ)} σ_{i+1,j} σ_{i,j+1} + Σ_i β_{i+1,μ_i} σ_{i,μ_i+1}`.
pub fn classical_potential(shape: &SkewShape, alpha: &[u32], sigma: &CellArray) -> ExactScalar {
    let d = DriftParams::new(alpha.to_vec(), ratio(1, 2)).unwrap();
    let sets = crate::shapes::special_sets(shape);
    let mut t = 0i64;
    for &(i, j) in &sets.corners {
        t += sigma.get((i + 1, j)) * sigma.get((i, j + 1));
    }
    for (k, &m) in shape.mu().parts().iter().enumerate() {
        let i = k as i64 + 1;
        let m = m as i64;
        t += d.beta(i + 1, m) * sigma.get((i, m + 1));
    }
    int(t)
}

/// Sweep `q_j = 1 - 2^{-j}` for `j = 1..=steps`.
pub fn classical_limit(probe: &LimitProbe, steps: u32) -> Result<Vec<LimitPoint>> {
    if steps < 2 {
        return Err(Error::Precondition("steps must be at least 2".into()));
    }
    let target = match probe {
        LimitProbe::Coeff(n) => classical_coeff(n),
        LimitProbe::Doob(n, i) => {
            if *i < 1 || *i > n.len() {
                return Err(Error::Precondition("doob index out of range".into()));
            }
            let mut m = n.clone();
            m[i - 1] -= 1;
            classical_coeff(&m) / classical_coeff(n)
        }
        LimitProbe::Potential { shape, alpha, sigma } => {
            let d = DriftParams::new(alpha.clone(), ratio(1, 2))?;
            let s = CellArray::new(Layout::new(shape.clone(), Domain::Boundary, d), sigma.clone())?;
            classical_potential(shape, alpha, &s)
        }
    };
    let target_f = to_f64(&target);
    let mut out = Vec::new();
    for j in 1..=steps {
        let eps = ratio(1, 1i64 << j);
        let q = ExactScalar::one() - &eps;
        let scaled = match probe {
            LimitProbe::Coeff(n) => {
                let d = DriftParams::driftless(q.clone())?;
                let tot: i64 = n.iter().sum();
                pow(&eps, 2 * tot) * coeff_recursive(n, &d)
            }
            LimitProbe::Doob(n, i) => {
                let d = DriftParams::driftless(q.clone())?;
                let mut t = CoeffTable::new(d);
                doob_rates(n, &mut t)[i - 1].clone() / (&eps * &eps)
            }
            LimitProbe::Potential { shape, alpha, sigma } => {
                let d = DriftParams::new(alpha.clone(), q.clone())?;
                let s = CellArray::from_values(Layout::new(shape.clone(), Domain::Boundary, d), sigma.clone());
                potential(&s, shape) / (&eps * &eps)
            }
        };
        let sf = to_f64(&scaled);
        out.push(LimitPoint { j, q: format_scalar(&q), scaled: sf, target: target_f, gap: (sf - target_f).abs() });
    }
    Ok(out)
}
