//! Jump rates, generators as exact sparse matrices, the `Λ` kernel, and the
//! exact identity checkers.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::arrays::{downset, fiber_members, validate, CellArray, Domain, Layout};
use crate::error::{Error, Result};
use crate::qnum::{format_scalar, max_abs, ratio, DriftParams, ExactScalar};
use crate::shapes::{special_sets, staircase, Cell, Diagram, SkewShape, SpecialSets};
use crate::toda::{box_points, kernel, recursion_prefactor, skew_weight, CoeffTable};

/// Which family of rates a [`RateModel`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RateVariant {
    /// `G^r` on `δ_{r+1}`, no drift.
    BasicStaircase,
    /// `G^{r,α}` on `δ_{r+1}`.
    DriftStaircase,
    /// `G^{λ,α}_μ` on full arrays of `λ`.
    SkewFull,
    /// `G^{λ/μ,α}` on boundary arrays of `λ/μ`.
    SkewBoundary,
}

/// A rate family bound to a shape and drift.
#[derive(Clone, Debug)]
pub struct RateModel {
    variant: RateVariant,
    shape: SkewShape,
    drift: DriftParams,
    sets: SpecialSets,
}

impl RateModel {
    pub fn new(variant: RateVariant, shape: SkewShape, drift: DriftParams) -> Result<Self> {
        match variant {
            RateVariant::BasicStaircase | RateVariant::DriftStaircase => {
                let r = shape.lambda().len() as u32;
                if *shape.lambda() != staircase(r + 1)? {
                    return Err(Error::Precondition("staircase variants need lambda = staircase".into()));
                }
            }
            RateVariant::SkewFull | RateVariant::SkewBoundary => {}
        }
        let sets = special_sets(&shape);
        Ok(RateModel { variant, shape, drift, sets })
    }

    /// `G^r` or `G^{r,α}` on `δ_{r+1}` (with `μ = δ_r` recorded for projections).
    pub fn staircase(r: usize, drift: DriftParams) -> Self {
        let v = if drift.is_driftless() { RateVariant::BasicStaircase } else { RateVariant::DriftStaircase };
        RateModel::new(v, crate::arrays::staircase_shape(r), drift).expect("staircase shape")
    }

    /// The model matching an array's layout: full arrays get `SkewFull`,
    /// boundary arrays `SkewBoundary`.
    pub fn for_array(a: &CellArray) -> Self {
        let v = match a.domain() {
            Domain::Full => RateVariant::SkewFull,
            Domain::Boundary => RateVariant::SkewBoundary,
        };
        RateModel::new(v, a.shape().clone(), a.drift().clone()).expect("skew variants accept any shape")
    }

    pub fn variant(&self) -> RateVariant {
        self.variant
    }

    pub fn shape(&self) -> &SkewShape {
        &self.shape
    }

    pub fn drift(&self) -> &DriftParams {
        &self.drift
    }

    pub fn sets(&self) -> &SpecialSets {
        &self.sets
    }

    /// Cells that carry clocks.
    pub fn cells(&self) -> Vec<Cell> {
        match self.variant {
            RateVariant::SkewBoundary => self.shape.boundary_cells(),
            _ => self.shape.lambda().cells(),
        }
    }

    pub fn domain(&self) -> Domain {
        match self.variant {
            RateVariant::SkewBoundary => Domain::Boundary,
            _ => Domain::Full,
        }
    }

    /// `u ∼_μ v`; cells outside `λ` with positive coordinates count as `λ/μ`.
    pub fn related(&self, u: Cell, v: Cell) -> bool {
        if u.0 <= 0 || u.1 <= 0 || v.0 <= 0 || v.1 <= 0 {
            return true;
        }
        !self.shape.in_mu(u) == !self.shape.in_mu(v)
    }
}

/// `b̃_cell(π,z;q)` for the model's variant.
pub fn jump_rate(state: &CellArray, cell: Cell, model: &RateModel) -> Result<ExactScalar> {
    let ok = match model.variant {
        RateVariant::SkewBoundary => model.shape.in_boundary(cell),
        _ => model.shape.in_lambda(cell),
    };
    if !ok || !state.holds(cell) {
        return Err(Error::CellOutsideShape(cell));
    }
    Ok(rate_unchecked(state, cell, model))
}

pub(crate) fn rate_unchecked(state: &CellArray, (i, j): Cell, model: &RateModel) -> ExactScalar {
    let d = &model.drift;
    let g = |c: Cell| state.get(c);
    let v = g((i, j));
    let ell = model.shape.lambda().len() as i64;
    let left = d.one_minus_qpow(v - g((i, j - 1)));
    if left.is_zero() {
        return left;
    }
    let up = match model.variant {
        RateVariant::BasicStaircase => d.one_minus_qpow(v - g((i - 1, j))),
        _ => d.one_minus_qpow(d.z_exp(i - 1, i + j - 1) + v - g((i - 1, j))),
    };
    if up.is_zero() {
        return up;
    }
    let z = match model.variant {
        RateVariant::BasicStaircase => ExactScalar::one(),
        _ => d.z(i, ell),
    };
    let special = match model.variant {
        RateVariant::BasicStaircase | RateVariant::DriftStaircase => false,
        RateVariant::SkewFull | RateVariant::SkewBoundary => {
            let c = (i, j);
            let s1 = model.related((i - 1, j + 1), c);
            let s2 = model.related(c, (i + 1, j - 1));
            model.shape.in_boundary(c) && s2 && (!s1 || model.sets.vert.contains(&c))
        }
    };
    let f = if special {
        d.qpow(g((i, j - 1)) - v - d.beta(i + 1, j - 1))
    } else {
        d.qpow(g((i + 1, j - 1)) - v)
    };
    z * left * up * f
}

/// All nonzero rates of a state, in cell order.
pub fn rates(state: &CellArray, model: &RateModel) -> Vec<(Cell, ExactScalar)> {
    model
        .cells()
        .into_iter()
        .filter_map(|c| {
            let r = rate_unchecked(state, c, model);
            (!r.is_zero()).then_some((c, r))
        })
        .collect()
}

/// `b′_ij = z_{i-1,ℓ} q^{π_ij-π_{i-1,j+1}} (1-q^{π_{i,j+1}-π_ij})(1-z_{i,i+j} q^{π_{i+1,j}-π_ij})`.
pub fn adjoint_rate(state: &CellArray, (i, j): Cell) -> ExactScalar {
    let d = state.drift();
    let g = |c: Cell| state.get(c);
    let v = g((i, j));
    let ell = state.shape().lambda().len() as i64;
    d.z(i - 1, ell)
        * d.qpow(v - g((i - 1, j + 1)))
        * d.one_minus_qpow(g((i, j + 1)) - v)
        * d.one_minus_qpow(d.z_exp(i, i + j) + g((i + 1, j)) - v)
}

/// `V_{λ,μ}(σ,z;q)`.
pub fn potential(sigma: &CellArray, shape: &SkewShape) -> ExactScalar {
    let d = sigma.drift();
    let g = |c: Cell| sigma.get(c);
    let ell = shape.lambda().len() as i64;
    let sets = special_sets(shape);
    let mut v = ExactScalar::zero();
    for &(i, j) in &sets.corners {
        let mut t = d.z(i, ell) * d.z(i - 1, i + j) * d.one_minus_qpow(g((i, j + 1))) * d.one_minus_qpow(g((i + 1, j)));
        if sets.hor.contains(&(i, j)) {
            t *= d.qpow(-g((i - 1, j + 1)));
        }
        v += t;
    }
    for (k, &m) in shape.mu().parts().iter().enumerate() {
        let (i, m) = (k as i64 + 1, m as i64);
        let mut t = d.z(i - 1, ell) * d.one_minus_qpow(d.z_exp(i, i + m)) * d.one_minus_qpow(g((i, m + 1)));
        if sets.hor.contains(&(i, m)) {
            t *= d.qpow(-g((i - 1, m + 1)));
        }
        v += t;
    }
    v
}

/// Sparse exact matrix with labelled rows and columns.
#[derive(Clone, Debug)]
pub struct LinearOp {
    rows: Arc<Vec<CellArray>>,
    cols: Arc<Vec<CellArray>>,
    entries: Vec<BTreeMap<usize, ExactScalar>>,
}

impl LinearOp {
    pub fn zeros(rows: Arc<Vec<CellArray>>, cols: Arc<Vec<CellArray>>) -> Self {
        let entries = vec![BTreeMap::new(); rows.len()];
        LinearOp { rows, cols, entries }
    }

    pub fn rows(&self) -> &[CellArray] {
        &self.rows
    }

    pub fn cols(&self) -> &[CellArray] {
        &self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> ExactScalar {
        self.entries[r].get(&c).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, ExactScalar> {
        &self.entries[r]
    }

    pub fn add(&mut self, r: usize, c: usize, v: ExactScalar) {
        if v.is_zero() {
            return;
        }
        let e = self.entries[r].entry(c).or_insert_with(ExactScalar::zero);
        *e += v;
        if e.is_zero() {
            self.entries[r].remove(&c);
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearOp) -> Result<LinearOp> {
        if self.cols.len() != other.rows.len() {
            return Err(Error::Precondition("dimension mismatch in compose".into()));
        }
        let mut out = LinearOp::zeros(self.rows.clone(), other.cols.clone());
        for (r, row) in self.entries.iter().enumerate() {
            for (&k, a) in row {
                for (&c, b) in &other.entries[k] {
                    out.add(r, c, a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LinearOp) -> Result<LinearOp> {
        if self.shape() != other.shape() {
            return Err(Error::Precondition("dimension mismatch in sub".into()));
        }
        let mut out = self.clone();
        for (r, row) in other.entries.iter().enumerate() {
            for (&c, v) in row {
                out.add(r, c, -v.clone());
            }
        }
        Ok(out)
    }

    pub fn apply(&self, f: &[ExactScalar]) -> Vec<ExactScalar> {
        self.entries
            .iter()
            .map(|row| row.iter().fold(ExactScalar::zero(), |acc, (&c, v)| acc + v * &f[c]))
            .collect()
    }

    pub fn row_sums(&self) -> Vec<ExactScalar> {
        self.entries.iter().map(|row| row.values().fold(ExactScalar::zero(), |a, b| a + b)).collect()
    }

    pub fn max_abs(&self) -> ExactScalar {
        max_abs(self.entries.iter().flat_map(|r| r.values()))
    }

    /// Conjugation `diag(left)^{-1} · self · diag(right)`.
    pub fn conjugate(&self, left: &[ExactScalar], right: &[ExactScalar]) -> LinearOp {
        let mut out = self.clone();
        for (r, row) in out.entries.iter_mut().enumerate() {
            for (&c, v) in row.iter_mut() {
                *v = &*v * &right[c] / &left[r];
            }
        }
        out
    }
}

fn index_of(states: &[CellArray]) -> HashMap<&[i64], usize> {
    states.iter().enumerate().map(|(k, s)| (s.values(), k)).collect()
}

/// Generator on `states`: `(π, π-e) = b̃(π)`, diagonal `-Σ b̃(π)`.
pub fn generator_matrix(model: &RateModel, states: Vec<CellArray>) -> Result<LinearOp> {
    let states = Arc::new(states);
    let index = index_of(&states);
    let mut op = LinearOp::zeros(states.clone(), states.clone());
    for (k, s) in states.iter().enumerate() {
        for (c, r) in rates(s, model) {
            let t = s.decremented(c);
            let Some(&m) = index.get(t.values()) else {
                return Err(Error::NotDownset);
            };
            op.add(k, m, r.clone());
            op.add(k, k, -r);
        }
    }
    Ok(op)
}

/// `H = G^{λ/μ,α} + V` on boundary states.
pub fn hamiltonian(model: &RateModel, states: Vec<CellArray>) -> Result<LinearOp> {
    let mut h = generator_matrix(model, states)?;
    for k in 0..h.rows.len() {
        let v = potential(&h.rows[k], &model.shape);
        h.add(k, k, v);
    }
    Ok(h)
}

/// `Λ` from boundary states to the union of their fibers, plus the
/// normalizers `A(σ)` (row sums of the unnormalized kernel).
#[derive(Clone, Debug)]
pub struct LambdaKernel {
    pub op: LinearOp,
    pub normalizers: Vec<ExactScalar>,
}

/// Rows `σ`, columns all of `⋃ Π_σ`; entries `W̃` or `K_σ = W̃/A(σ)`.
pub fn lambda_kernel(shape: &SkewShape, boundary_states: &[CellArray], normalized: bool) -> Result<LambdaKernel> {
    let Some(first) = boundary_states.first() else {
        return Err(Error::Precondition("no boundary states".into()));
    };
    let full = Layout::new(shape.clone(), Domain::Full, first.drift().clone());
    let mut cols = Vec::new();
    let mut spans = Vec::new();
    let mut weights = Vec::new();
    for s in boundary_states {
        let m = fiber_members(&full, s);
        let start = cols.len();
        for p in m {
            weights.push(skew_weight(&p, shape));
            cols.push(p);
        }
        spans.push(start..cols.len());
    }
    let mut op = LinearOp::zeros(Arc::new(boundary_states.to_vec()), Arc::new(cols));
    let mut normalizers = Vec::new();
    for (r, span) in spans.into_iter().enumerate() {
        let a = weights[span.clone()].iter().fold(ExactScalar::zero(), |x, y| x + y);
        for c in span {
            let w = if normalized { &weights[c] / &a } else { weights[c].clone() };
            op.add(r, c, w);
        }
        normalizers.push(a);
    }
    Ok(LambdaKernel { op, normalizers })
}

/// Exact discrepancies of the skew intertwinings on the down-set of `σ`.
#[derive(Clone, Debug, Serialize)]
pub struct IntertwiningReport {
    pub lambda: Vec<u32>,
    pub mu: Vec<u32>,
    pub alpha: Vec<u32>,
    pub q: String,
    pub sigma: Vec<i64>,
    pub boundary_states: usize,
    pub full_states: usize,
    /// `max |H∘Λ - Λ∘G|` (unnormalized `Λ`).
    pub h_lambda: String,
    /// `max |H·A|`.
    pub h_a: String,
    /// `max |L∘Λ̃ - Λ̃∘G|` with `L = A^{-1} H A`.
    pub l_lambda: String,
    /// `max |L - Doob|` for staircase pairs, when applicable.
    pub doob: Option<String>,
    pub pass: bool,
}

/// Build `H`, `G`, `Λ` on the down-set of `σ` and compare.
pub fn intertwining_check(shape: &SkewShape, sigma: &CellArray) -> Result<IntertwiningReport> {
    if sigma.domain() != Domain::Boundary || sigma.shape() != shape {
        return Err(Error::Precondition("sigma must be a boundary array of the shape".into()));
    }
    validate(sigma).map_err(Error::InvalidArray)?;
    let drift = sigma.drift().clone();
    let bstates = downset(sigma);
    let hmodel = RateModel::new(RateVariant::SkewBoundary, shape.clone(), drift.clone())?;
    let gmodel = RateModel::new(RateVariant::SkewFull, shape.clone(), drift.clone())?;
    let h = hamiltonian(&hmodel, bstates.clone())?;
    let lam = lambda_kernel(shape, &bstates, false)?;
    let g = generator_matrix(&gmodel, lam.op.cols().to_vec())?;
    let a = &lam.normalizers;

    let d1 = h.compose(&lam.op)?.sub(&lam.op.compose(&g)?)?.max_abs();
    let d2 = max_abs(&h.apply(a));
    let l = h.conjugate(a, a);
    let lam_n = lambda_kernel(shape, &bstates, true)?;
    let d3 = l.compose(&lam_n.op)?.sub(&lam_n.op.compose(&g)?)?.max_abs();

    let doob = staircase_rank(shape).map(|r| {
        let mut table = CoeffTable::new(drift.clone());
        let mut worst = ExactScalar::zero();
        for (k, s) in bstates.iter().enumerate() {
            let dr = crate::toda::doob_rates(s.values(), &mut table);
            for (i, rate) in dr.into_iter().enumerate() {
                if rate.is_zero() {
                    continue;
                }
                let cell = (i as i64 + 1, r as i64 - i as i64);
                let t = s.decremented(cell);
                let m = bstates.iter().position(|x| x == &t).expect("down-set closed");
                worst = worst.max((l.get(k, m) - rate).abs());
            }
        }
        worst
    });
    let pass = d1.is_zero() && d2.is_zero() && d3.is_zero() && doob.as_ref().is_none_or(|x| x.is_zero());
    Ok(IntertwiningReport {
        lambda: shape.lambda().parts().to_vec(),
        mu: shape.mu().parts().to_vec(),
        alpha: drift.alpha().to_vec(),
        q: format_scalar(drift.q()),
        sigma: sigma.values().to_vec(),
        boundary_states: bstates.len(),
        full_states: lam.op.cols().len(),
        h_lambda: format_scalar(&d1),
        h_a: format_scalar(&d2),
        l_lambda: format_scalar(&d3),
        doob: doob.map(|x| format_scalar(&x)),
        pass,
    })
}

/// `Some(r)` when the shape is `δ_{r+1}/δ_r`.
pub fn staircase_rank(shape: &SkewShape) -> Option<usize> {
    let r = shape.lambda().len();
    if r >= 1
        && *shape.lambda() == staircase(r as u32 + 1).ok()?
        && *shape.mu() == staircase(r as u32).ok()?
    {
        Some(r)
    } else {
        None
    }
}

/// Top boundary array with every entry equal to `cap` (always valid).
pub fn top_sigma(shape: &SkewShape, drift: &DriftParams, cap: i64) -> CellArray {
    let layout = Layout::new(shape.clone(), Domain::Boundary, drift.clone());
    let n = layout.cells().len();
    CellArray::from_values(layout, vec![cap; n])
}

/// `max |h^r∘Q - z_{r-1,r} Q∘h^{r-1}|` over `n ∈ [0,nmax]^r`, `k ∈ [0,nmax]^{r-1}`,
/// with `Q(n,k) = q^{Σk(k-k')} z^k q_{r,α}(n,k)`.
pub fn kernel_discrepancy(r: usize, nmax: i64, drift: &DriftParams) -> ExactScalar {
    let ns = box_points(r, nmax);
    let ks = box_points(r - 1, nmax);
    let nidx: HashMap<&[i64], usize> = ns.iter().enumerate().map(|(k, v)| (v.as_slice(), k)).collect();
    let kidx: HashMap<&[i64], usize> = ks.iter().enumerate().map(|(k, v)| (v.as_slice(), k)).collect();
    let dense = |rows: usize, cols: usize| vec![vec![ExactScalar::zero(); cols]; rows];
    let mut qm = dense(ns.len(), ks.len());
    for (a, n) in ns.iter().enumerate() {
        for (b, k) in ks.iter().enumerate() {
            qm[a][b] = recursion_prefactor(k, drift) * kernel(n, k, drift);
        }
    }
    let hmat = |pts: &Vec<Vec<i64>>, idx: &HashMap<&[i64], usize>, rr: i64| {
        let mut m = dense(pts.len(), pts.len());
        for (a, p) in pts.iter().enumerate() {
            let at = |i: i64| if i < 1 || i > rr { 0 } else { p[i as usize - 1] };
            for i in 0..=rr {
                let ex = at(i + 1) - at(i);
                let z = drift.z(i, rr);
                if i >= 1 && at(i) > 0 {
                    let mut t = p.clone();
                    t[i as usize - 1] -= 1;
                    m[a][idx[t.as_slice()]] += drift.qpow(ex) * &z;
                }
                m[a][a] += drift.one_minus_qpow(ex) * z;
            }
        }
        m
    };
    let hr = hmat(&ns, &nidx, r as i64);
    let hr1 = hmat(&ks, &kidx, r as i64 - 1);
    let zr = drift.z(r as i64 - 1, r as i64);
    let mut worst = ExactScalar::zero();
    for a in 0..ns.len() {
        for b in 0..ks.len() {
            let mut lhs = ExactScalar::zero();
            for (m, h) in hr[a].iter().enumerate() {
                if !h.is_zero() {
                    lhs += h * &qm[m][b];
                }
            }
            let mut rhs = ExactScalar::zero();
            for (m, qv) in qm[a].iter().enumerate() {
                if !qv.is_zero() {
                    rhs += qv * &hr1[m][b];
                }
            }
            worst = worst.max((lhs - &zr * rhs).abs());
        }
    }
    worst
}

/// Both sides of the three-sequence identity, for integer sequences
/// `a, b, c` indexed from 0 and zero elsewhere.
pub fn sequence_identity_sides(a: &[i64], b: &[i64], c: &[i64], q: &ExactScalar) -> Result<(ExactScalar, ExactScalar)> {
    let d = DriftParams::driftless(q.clone())?;
    let at = |s: &[i64], i: i64| if i < 0 || i as usize >= s.len() { 0 } else { s[i as usize] };
    let hi = a.len().max(b.len()).max(c.len()) as i64 + 2;
    let (mut lhs, mut rhs) = (ExactScalar::zero(), ExactScalar::zero());
    for i in -2..=hi {
        let (a0, a1, b0, bm, b1, c0, cm) = (at(a, i), at(a, i + 1), at(b, i), at(b, i - 1), at(b, i + 1), at(c, i), at(c, i - 1));
        lhs += (d.qpow(a1 - a0) - ExactScalar::one()) * d.qpow(c0)
            - d.qpow(a1 - a0 + c0) * d.one_minus_qpow(a0 - b0) * d.one_minus_qpow(a0 - bm + cm);
        rhs += (d.qpow(b1 - b0) - ExactScalar::one()) * d.qpow(c0)
            - d.qpow(b0 - bm + cm) * d.one_minus_qpow(a0 - b0) * d.one_minus_qpow(a1 - b0 + c0);
    }
    Ok((lhs, rhs))
}

/// Left side and the collapsed and expanded right sides of the
/// `μ = δ_{r+1}` rate-difference identity.
#[derive(Clone, Debug)]
pub struct StaircaseDiffSides {
    pub lhs: ExactScalar,
    pub collapsed: ExactScalar,
    pub expanded: ExactScalar,
}

/// Needs `α = 0`, `μ = δ_{r+1}` with `r >= 0`, and a full array `π`.
pub fn staircase_difference_sides(pi: &CellArray) -> Result<StaircaseDiffSides> {
    let shape = pi.shape();
    let d = pi.drift();
    if !d.is_driftless() || pi.domain() != Domain::Full {
        return Err(Error::Precondition("needs a driftless full array".into()));
    }
    let r1 = shape.mu().len() as u32 + 1;
    if *shape.mu() != staircase(r1)? {
        return Err(Error::Precondition("mu must be a staircase".into()));
    }
    validate(pi).map_err(Error::InvalidArray)?;
    let r = r1 as i64 - 1;
    let g = |c: Cell| pi.get(c);
    let s = |c: Cell| if shape.in_boundary(c) { pi.get(c) } else { 0 };
    let qp = |e: i64| d.qpow(e);
    let om = |e: i64| d.one_minus_qpow(e);
    let b = |get: &dyn Fn(Cell) -> i64, (i, j): Cell| {
        qp(get((i + 1, j - 1)) - get((i, j))) * om(get((i, j)) - get((i, j - 1))) * om(get((i, j)) - get((i - 1, j)))
    };
    let boundary = shape.boundary_cells();
    let mut lhs = ExactScalar::zero();
    for &c in &boundary {
        lhs += b(&g, c) - b(&s, c);
    }
    let mut col = ExactScalar::zero();
    for &(i, j) in &boundary {
        let x = (i + 1, j - 1);
        for (u, w) in [((i - 1, j), (i, j - 1)), ((i, j - 1), (i - 1, j))] {
            if shape.in_mu(u) {
                col -= qp(g(x) - g(u)) * om(g(u)) * om(g((i, j)) - g(w));
            }
        }
        if shape.in_mu((i, j - 1)) && shape.in_mu((i - 1, j)) {
            col -= qp(g(x) + g((i, j)) - g((i - 1, j)) - g((i, j - 1))) * om(g((i - 1, j))) * om(g((i, j - 1)));
        }
    }
    let mut exp = ratio(r + 2, 1) - qp(g((1, r + 1)));
    for &(i, j) in &boundary {
        if shape.in_mu((i - 1, j)) || shape.in_mu((i, j - 1)) {
            exp -= om(g((i + 1, j - 1))) * om(g((i, j)));
        }
    }
    for (i, j) in staircase(r1 + 1)?.cells() {
        if shape.in_mu((i, j)) {
            continue;
        }
        let x = g((i + 1, j - 1));
        exp -= qp(x - g((i, j - 1))) + qp(x - g((i - 1, j))) - qp(x + g((i, j)) - g((i, j - 1)) - g((i - 1, j)));
    }
    Ok(StaircaseDiffSides { lhs, collapsed: col, expanded: exp })
}

/// `Σ_{λ/μ}[b̃(π) - b̃(σ)] + V(σ)` and `Σ_μ [b′(π) - b̃(π)]`.
pub fn potential_identity_sides(pi: &CellArray) -> Result<(ExactScalar, ExactScalar)> {
    if pi.domain() != Domain::Full {
        return Err(Error::Precondition("needs a full array".into()));
    }
    validate(pi).map_err(Error::InvalidArray)?;
    let shape = pi.shape().clone();
    let drift = pi.drift().clone();
    let full = RateModel::new(RateVariant::SkewFull, shape.clone(), drift.clone())?;
    let bnd = RateModel::new(RateVariant::SkewBoundary, shape.clone(), drift.clone())?;
    let sigma = pi.restrict(&Layout::new(shape.clone(), Domain::Boundary, drift));
    let mut lhs = potential(&sigma, &shape);
    for c in shape.boundary_cells() {
        lhs += rate_unchecked(pi, c, &full) - rate_unchecked(&sigma, c, &bnd);
    }
    let mut rhs = ExactScalar::zero();
    for c in shape.mu_cells() {
        rhs += adjoint_rate(pi, c) - rate_unchecked(pi, c, &full);
    }
    Ok((lhs, rhs))
}

/// Exact check outcome, serialized as `{"check","instance","discrepancy","pass"}`.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub instance: serde_json::Value,
    pub discrepancy: String,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(check: &str, instance: serde_json::Value, discrepancy: &ExactScalar) -> Self {
        CheckReport {
            check: check.to_string(),
            instance,
            discrepancy: format_scalar(discrepancy),
            pass: discrepancy.is_zero(),
        }
    }
}

/// Random partition of size at most `n` with at most `maxlen` parts.
pub fn random_partition<R: Rng>(rng: &mut R, n: u32, maxlen: usize) -> Diagram {
    let mut parts: Vec<u32> = Vec::new();
    let mut rem = n;
    while rem > 0 && parts.len() < maxlen {
        let top = parts.last().map_or(rem, |&p| p.min(rem));
        let p = rng.random_range(1..=top);
        parts.push(p);
        rem -= p;
        if rng.random_bool(0.2) {
            break;
        }
    }
    Diagram::new(parts).expect("weakly decreasing by construction")
}

/// Random `μ ⊆ λ°` (possibly empty).
pub fn random_mu<R: Rng>(rng: &mut R, lambda: &Diagram) -> Diagram {
    let inner = crate::shapes::interior_diagram(lambda);
    let mut mu: Vec<u32> = Vec::new();
    for &p in inner.parts() {
        let top = mu.last().map_or(p, |&m| m.min(p));
        let x = rng.random_range(0..=top);
        if x == 0 {
            break;
        }
        mu.push(x);
    }
    Diagram::new(mu).expect("weakly decreasing by construction")
}

/// Random valid full array, each entry uniform on `[lo, max(lo, vmax)]`.
pub fn random_array<R: Rng>(rng: &mut R, layout: Arc<Layout>, vmax: i64) -> CellArray {
    let mut a = CellArray::zeros(layout.clone());
    for &c in layout.cells() {
        let d = a.drift();
        let lo = a.get((c.0, c.1 - 1)).max(a.get((c.0 - 1, c.1)) - d.beta(c.0, c.1)).max(0);
        let v = rng.random_range(lo..=lo.max(vmax));
        a = set_value(&a, c, v);
    }
    a
}

fn set_value(a: &CellArray, c: Cell, v: i64) -> CellArray {
    let k = a.layout().idx(c).expect("stored cell");
    let mut vals = a.values().to_vec();
    vals[k] = v;
    CellArray::from_values(a.layout().clone(), vals)
}

/// Random `(λ, μ, α, q, π)` with `|λ| <= 16` and entries `<= 3`.
pub fn random_skew_instance<R: Rng>(rng: &mut R) -> CellArray {
    let lambda = loop {
        let n = rng.random_range(3..=16);
        let l = random_partition(rng, n, 6);
        if !l.is_empty() {
            break l;
        }
    };
    let mu = random_mu(rng, &lambda);
    let alen = lambda.len() + lambda.row(1) as usize + 2;
    let alpha: Vec<u32> = (0..alen).map(|_| rng.random_range(0..=2)).collect();
    let q = [ratio(1, 2), ratio(3, 5), ratio(2, 3)][rng.random_range(0..3)].clone();
    let drift = DriftParams::new(alpha, q).expect("q in (0,1)");
    let shape = SkewShape::new(lambda, mu).expect("mu inside the interior");
    random_array(rng, Layout::new(shape, Domain::Full, drift), 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::int;

    #[test]
    fn single_cell_rate() {
        let d = DriftParams::driftless(ratio(1, 2)).unwrap();
        let m = RateModel::staircase(1, d.clone());
        let l = Layout::new(m.shape().clone(), Domain::Full, d);
        let a = CellArray::new(l, vec![1]).unwrap();
        assert_eq!(jump_rate(&a, (1, 1), &m).unwrap(), ratio(1, 2));
        assert!(jump_rate(&a, (1, 2), &m).is_err());
        let g = generator_matrix(&m, vec![a.decremented((1, 1)), a.clone()]).unwrap();
        assert_eq!(g.get(1, 0), ratio(1, 2));
        assert_eq!(g.get(1, 1), ratio(-1, 2));
        assert!(generator_matrix(&m, vec![a]).is_err());
    }

    #[test]
    fn empty_mu_potential() {
        let d = DriftParams::new(vec![1, 2], ratio(2, 3)).unwrap();
        let shape = SkewShape::full(Diagram::new(vec![3, 2]).unwrap());
        let s = top_sigma(&shape, &d, 2);
        assert_eq!(potential(&s, &shape), int(0));
    }

    #[test]
    fn sequence_identity_zero() {
        let (l, r) = sequence_identity_sides(&[], &[], &[], &ratio(1, 2)).unwrap();
        assert!(l.is_zero() && r.is_zero());
    }

    #[test]
    fn kernel_identity_small() {
        let d = DriftParams::new(vec![1, 0, 2], ratio(2, 3)).unwrap();
        for r in 1..=2 {
            assert!(kernel_discrepancy(r, 2, &d).is_zero());
        }
    }
}
