//! Drift-constrained integer fillings, fibers and down-sets.
//!
//! A [`CellArray`] is either a full filling of `λ` or a boundary filling of
//! `λ/μ`. Reads outside the stored cells (including `μ` cells of a boundary
//! array and any index `<= 0`) return 0.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::qnum::{format_scalar, parse_scalar, DriftParams};
use crate::shapes::{staircase, Cell, Diagram, SkewShape};

/// Which cells an array stores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    /// All of `λ`.
    Full,
    /// `λ/μ` only.
    Boundary,
}

/// Shared description of a state space: shape, domain, drift, cell index.
#[derive(Debug)]
pub struct Layout {
    shape: SkewShape,
    domain: Domain,
    drift: DriftParams,
    cells: Vec<Cell>,
    rows: i64,
    width: i64,
    index: Vec<Option<usize>>,
}

impl Layout {
    pub fn new(shape: SkewShape, domain: Domain, drift: DriftParams) -> Arc<Layout> {
        let cells = match domain {
            Domain::Full => shape.lambda().cells(),
            Domain::Boundary => shape.boundary_cells(),
        };
        let rows = shape.lambda().len() as i64;
        let width = shape.lambda().row(1);
        let mut index = vec![None; (rows * width) as usize];
        for (k, &(i, j)) in cells.iter().enumerate() {
            index[((i - 1) * width + (j - 1)) as usize] = Some(k);
        }
        Arc::new(Layout { shape, domain, drift, cells, rows, width, index })
    }

    pub fn shape(&self) -> &SkewShape {
        &self.shape
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn drift(&self) -> &DriftParams {
        &self.drift
    }

    /// Stored cells, row-major.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn idx(&self, (i, j): Cell) -> Option<usize> {
        if i < 1 || j < 1 || i > self.rows || j > self.width {
            return None;
        }
        self.index[((i - 1) * self.width + (j - 1)) as usize]
    }

    /// Same shape and drift, other domain.
    pub fn with_domain(&self, domain: Domain) -> Arc<Layout> {
        Layout::new(self.shape.clone(), domain, self.drift.clone())
    }
}

/// A filling of a [`Layout`].
///
/// Equality, ordering and hashing look at the values only (row-major tuple
/// order); compare arrays of the same layout.
#[derive(Clone)]
pub struct CellArray {
    layout: Arc<Layout>,
    values: Vec<i64>,
}

impl CellArray {
    /// Checked constructor.
    pub fn new(layout: Arc<Layout>, values: Vec<i64>) -> Result<Self> {
        if values.len() != layout.cells.len() {
            return Err(Error::MalformedArray(format!(
                "expected {} values, got {}",
                layout.cells.len(),
                values.len()
            )));
        }
        let a = CellArray { layout, values };
        validate(&a).map_err(Error::InvalidArray)?;
        Ok(a)
    }

    /// Unchecked constructor, for values already known to be valid.
    pub fn from_values(layout: Arc<Layout>, values: Vec<i64>) -> Self {
        debug_assert_eq!(values.len(), layout.cells.len());
        CellArray { layout, values }
    }

    pub fn zeros(layout: Arc<Layout>) -> Self {
        let n = layout.cells.len();
        CellArray { layout, values: vec![0; n] }
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn shape(&self) -> &SkewShape {
        &self.layout.shape
    }

    pub fn drift(&self) -> &DriftParams {
        &self.layout.drift
    }

    pub fn domain(&self) -> Domain {
        self.layout.domain
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn cells(&self) -> &[Cell] {
        &self.layout.cells
    }

    /// Zero-extended read.
    #[inline]
    pub fn get(&self, c: Cell) -> i64 {
        self.layout.idx(c).map_or(0, |k| self.values[k])
    }

    pub fn holds(&self, c: Cell) -> bool {
        self.layout.idx(c).is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Copy with `c` lowered by one (no validity check).
    pub fn decremented(&self, c: Cell) -> CellArray {
        let mut v = self.values.clone();
        let k = self.layout.idx(c).expect("cell stored in array");
        v[k] -= 1;
        CellArray { layout: self.layout.clone(), values: v }
    }

    /// Copy with `c` raised by one (no validity check).
    pub fn incremented(&self, c: Cell) -> CellArray {
        let mut v = self.values.clone();
        let k = self.layout.idx(c).expect("cell stored in array");
        v[k] += 1;
        CellArray { layout: self.layout.clone(), values: v }
    }

    /// Restriction of a full array to `λ/μ`.
    pub fn restrict(&self, boundary: &Arc<Layout>) -> CellArray {
        let values = boundary.cells.iter().map(|&c| self.get(c)).collect();
        CellArray { layout: boundary.clone(), values }
    }

    /// Values of the `μ` cells, row-major.
    pub fn mu_values(&self) -> Vec<i64> {
        self.shape().mu_cells().into_iter().map(|c| self.get(c)).collect()
    }

    pub fn to_json(&self) -> ArrayJson {
        let shape = self.shape();
        ArrayJson {
            lambda: shape.lambda().parts().to_vec(),
            mu: shape.mu().parts().to_vec(),
            alpha: self.drift().alpha().to_vec(),
            q: format_scalar(self.drift().q()),
            cells: self.layout.cells.iter().zip(&self.values).map(|(&(i, j), &v)| [i, j, v]).collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json(j: &ArrayJson) -> Result<Self> {
        let lambda = Diagram::new(j.lambda.clone())?;
        let mu = Diagram::new(j.mu.clone())?;
        let shape = SkewShape::new(lambda, mu)?;
        let drift = DriftParams::new(j.alpha.clone(), parse_scalar(&j.q)?)?;
        let mut seen: HashMap<Cell, i64> = HashMap::new();
        for &[i, jj, v] in &j.cells {
            if seen.insert((i, jj), v).is_some() {
                return Err(Error::MalformedArray(format!("cell ({i}, {jj}) listed twice")));
            }
        }
        let domain = if seen.len() == shape.lambda().size() {
            Domain::Full
        } else {
            Domain::Boundary
        };
        let layout = Layout::new(shape, domain, drift);
        if seen.len() != layout.cells.len() {
            return Err(Error::MalformedArray(format!(
                "{} cells listed; expected {} (full) or {} (boundary)",
                seen.len(),
                layout.shape.lambda().size(),
                layout.shape.boundary_cells().len()
            )));
        }
        let mut values = Vec::with_capacity(seen.len());
        for c in &layout.cells {
            match seen.get(c) {
                Some(&v) => values.push(v),
                None => return Err(Error::MalformedArray(format!("cell ({}, {}) missing", c.0, c.1))),
            }
        }
        CellArray::new(layout, values)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: ArrayJson = serde_json::from_str(s).map_err(|e| Error::MalformedArray(e.to_string()))?;
        Self::from_json(&j)
    }
}

impl PartialEq for CellArray {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl Eq for CellArray {}

impl Hash for CellArray {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.values.hash(state)
    }
}

impl PartialOrd for CellArray {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CellArray {
    fn cmp(&self, other: &Self) -> Ordering {
        self.values.cmp(&other.values)
    }
}

impl fmt::Debug for CellArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CellArray{:?}", self.values)
    }
}

impl fmt::Display for CellArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut row = 0;
        let mut first = true;
        for (&(i, _), v) in self.layout.cells.iter().zip(&self.values) {
            if i != row {
                if !first {
                    write!(f, " / ")?;
                }
                row = i;
            } else {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// On-disk form of a [`CellArray`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayJson {
    pub lambda: Vec<u32>,
    pub mu: Vec<u32>,
    pub alpha: Vec<u32>,
    pub q: String,
    pub cells: Vec<[i64; 3]>,
}

/// Lower bound `max(π_{i,j-1}, π_{i-1,j} - β_{ij})` at a cell.
#[inline]
fn lower_bound(a: &CellArray, (i, j): Cell) -> i64 {
    let d = a.drift();
    a.get((i, j - 1)).max(a.get((i - 1, j)) - d.beta(i, j)).max(0)
}

/// `Ok(())` when the invariant holds everywhere, else the first failing cell
/// in row-major order.
pub fn validate(a: &CellArray) -> std::result::Result<(), Cell> {
    for (k, &c) in a.layout.cells.iter().enumerate() {
        if a.values[k] < lower_bound(a, c) {
            return Err(c);
        }
    }
    Ok(())
}

/// What a fiber is conditioned on.
#[derive(Clone, Debug)]
pub enum Constraint {
    /// Outer diagonal `n` of `δ_{r+1}`, `n_i = π_{i,r-i+1}`.
    Diagonal(Vec<i64>),
    /// A boundary array `σ` on `λ/μ`.
    Boundary(CellArray),
}

/// All fillings of `λ` matching a constraint.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub sigma: CellArray,
    pub members: Vec<CellArray>,
}

impl Fiber {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The staircase pair `δ_{r+1}/δ_r`.
pub fn staircase_shape(r: usize) -> SkewShape {
    SkewShape::new(staircase(r as u32 + 1).unwrap(), staircase(r as u32).unwrap())
        .expect("δ_r lies in the interior of δ_{r+1}")
}

/// The outer diagonal `n` as a boundary array on `δ_{r+1}/δ_r`.
pub fn diagonal_boundary(n: &[i64], drift: &DriftParams) -> Result<CellArray> {
    if n.is_empty() {
        return Err(Error::Precondition("diagonal constraint needs r >= 1".into()));
    }
    let layout = Layout::new(staircase_shape(n.len()), Domain::Boundary, drift.clone());
    CellArray::new(layout, n.to_vec())
}

/// Enumerate `Π^{r,α}_n` or `Π^{λ,α}_σ`.
pub fn enumerate_fiber(lambda: &Diagram, constraint: &Constraint, drift: &DriftParams) -> Result<Fiber> {
    let sigma = match constraint {
        Constraint::Diagonal(n) => {
            if *lambda != staircase(n.len() as u32 + 1)? {
                return Err(Error::Precondition(format!(
                    "diagonal constraint of length {} needs lambda = staircase({})",
                    n.len(),
                    n.len() + 1
                )));
            }
            if n.iter().any(|&v| v < 0) {
                return Err(Error::Precondition("negative diagonal entry".into()));
            }
            diagonal_boundary(n, drift)?
        }
        Constraint::Boundary(s) => {
            if s.shape().lambda() != lambda || s.domain() != Domain::Boundary {
                return Err(Error::Precondition("boundary array does not match lambda".into()));
            }
            s.clone()
        }
    };
    let full = sigma.layout().with_domain(Domain::Full);
    let members = fiber_members(&full, &sigma);
    Ok(Fiber { sigma, members })
}

/// Fillings of `full` restricting to `sigma`, in row-major tuple order.
pub fn fiber_members(full: &Arc<Layout>, sigma: &CellArray) -> Vec<CellArray> {
    let shape = full.shape();
    let d = full.drift();
    let mut base = CellArray::zeros(full.clone());
    for (k, &c) in full.cells().iter().enumerate() {
        if !shape.in_mu(c) {
            base.values[k] = sigma.get(c);
        }
    }
    let free: Vec<Cell> = shape.mu_cells();
    // static caps from the fixed cells to the right or below
    let mut cap: HashMap<Cell, i64> = HashMap::new();
    for &(i, j) in free.iter().rev() {
        let mut ub = i64::MAX;
        let right = (i, j + 1);
        if shape.in_lambda(right) {
            ub = ub.min(if shape.in_mu(right) { cap[&right] } else { base.get(right) });
        }
        let down = (i + 1, j);
        if shape.in_lambda(down) {
            let v = if shape.in_mu(down) { cap[&down] } else { base.get(down) };
            ub = ub.min(v.saturating_add(d.beta(i + 1, j)));
        }
        cap.insert((i, j), ub);
    }
    let mut out = Vec::new();
    if free.is_empty() {
        if validate(&base).is_ok() {
            out.push(base);
        }
        return out;
    }
    let idx: Vec<usize> = free.iter().map(|&c| full.idx(c).unwrap()).collect();
    fn rec(
        k: usize,
        free: &[Cell],
        idx: &[usize],
        cap: &HashMap<Cell, i64>,
        cur: &mut CellArray,
        out: &mut Vec<CellArray>,
    ) {
        if k == free.len() {
            if validate(cur).is_ok() {
                out.push(cur.clone());
            }
            return;
        }
        let c = free[k];
        let lo = lower_bound(cur, c);
        let hi = cap[&c];
        let mut v = lo;
        while v <= hi {
            cur.values[idx[k]] = v;
            rec(k + 1, free, idx, cap, cur, out);
            v += 1;
        }
        cur.values[idx[k]] = 0;
    }
    rec(0, &free, &idx, &cap, &mut base, &mut out);
    out
}

/// All valid boundary arrays `σ' <= σ` componentwise, in row-major tuple order.
pub fn downset(sigma: &CellArray) -> Vec<CellArray> {
    let n = sigma.values.len();
    let mut cur = CellArray::zeros(sigma.layout.clone());
    let mut out = Vec::new();
    fn rec(k: usize, n: usize, top: &[i64], cur: &mut CellArray, out: &mut Vec<CellArray>) {
        if k == n {
            out.push(cur.clone());
            return;
        }
        let c = cur.layout.cells[k];
        let lo = lower_bound(cur, c);
        for v in lo..=top[k] {
            cur.values[k] = v;
            rec(k + 1, n, top, cur, out);
        }
        cur.values[k] = 0;
    }
    rec(0, n, &sigma.values, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::ratio;

    fn drift0() -> DriftParams {
        DriftParams::driftless(ratio(1, 2)).unwrap()
    }

    #[test]
    fn staircase_fibers() {
        let d = drift0();
        let lam = staircase(2).unwrap();
        let f = enumerate_fiber(&lam, &Constraint::Diagonal(vec![4]), &d).unwrap();
        assert_eq!(f.len(), 1);
        let lam = staircase(3).unwrap();
        let f = enumerate_fiber(&lam, &Constraint::Diagonal(vec![1, 1]), &d).unwrap();
        assert_eq!(f.len(), 2);
        let f = enumerate_fiber(&lam, &Constraint::Diagonal(vec![2, 1]), &d).unwrap();
        let inner: Vec<i64> = f.members.iter().map(|m| m.get((1, 1))).collect();
        assert_eq!(inner, vec![0, 1]);
    }

    #[test]
    fn validate_examples() {
        let d = drift0();
        let full = Layout::new(SkewShape::full(staircase(3).unwrap()), Domain::Full, d.clone());
        assert!(validate(&CellArray::zeros(full.clone())).is_ok());
        let bad = CellArray::from_values(full, vec![2, 1, 1]);
        assert_eq!(validate(&bad), Err((1, 2)));
        let d2 = DriftParams::new(vec![0, 2], ratio(1, 2)).unwrap();
        let l = Layout::new(SkewShape::full(Diagram::new(vec![2, 2]).unwrap()), Domain::Full, d2);
        let a = CellArray::new(l.clone(), vec![0, 0, 2, 2]).unwrap();
        assert_eq!(a.get((2, 1)), 2);
        // β_{21} = 2 lets the second row sit below the first
        assert!(CellArray::new(l, vec![2, 2, 0, 0]).is_ok());
    }

    #[test]
    fn downsets() {
        let d = drift0();
        let zero = diagonal_boundary(&[0, 0], &d).unwrap();
        assert_eq!(downset(&zero).len(), 1);
        let one = Layout::new(SkewShape::full(Diagram::new(vec![1]).unwrap()), Domain::Boundary, d.clone());
        assert_eq!(downset(&CellArray::new(one, vec![3]).unwrap()).len(), 4);
        let s = diagonal_boundary(&[1, 1], &d).unwrap();
        let ds: Vec<Vec<i64>> = downset(&s).iter().map(|x| x.values().to_vec()).collect();
        assert_eq!(ds, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn zero_extension() {
        let d = drift0();
        let s = diagonal_boundary(&[2, 3], &d).unwrap();
        assert_eq!(s.get((1, 1)), 0);
        assert_eq!(s.get((0, 2)), 0);
        assert_eq!(s.get((1, 0)), 0);
        assert_eq!(s.get((5, 5)), 0);
        assert_eq!(s.get((1, 2)), 2);
    }

    #[test]
    fn json_roundtrip() {
        let d = DriftParams::new(vec![1, 0, 2], ratio(2, 3)).unwrap();
        let lam = Diagram::new(vec![3, 3, 3]).unwrap();
        let mu = Diagram::new(vec![2, 2]).unwrap();
        let l = Layout::new(SkewShape::new(lam, mu).unwrap(), Domain::Boundary, d);
        let s = CellArray::new(l, vec![1, 2, 1, 1, 2]).unwrap();
        let back = CellArray::from_json_str(&s.to_json_string()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.domain(), Domain::Boundary);
        let mut j = s.to_json();
        j.cells.pop();
        assert!(CellArray::from_json(&j).is_err());
    }
}
