//! Young diagrams, skew shapes, and derived cell sets.
//!
//! Coordinates are 1-based `(row, column)`. Queries outside a diagram answer
//! "not contained" rather than failing.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A cell `(i, j)`; row `i`, column `j`.
pub type Cell = (i64, i64);

/// Set of cells, iterated in row-major order.
pub type CellSet = BTreeSet<Cell>;

/// A Young diagram `λ_1 >= λ_2 >= … > 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    parts: Vec<u32>,
}

impl Diagram {
    /// Trailing zero parts are dropped; other zeros or increases are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return Err(Error::InvalidDiagram(format!("zero part inside {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidDiagram(format!("parts not weakly decreasing: {parts:?}")));
        }
        Ok(Diagram { parts })
    }

    pub fn empty() -> Self {
        Diagram { parts: Vec::new() }
    }

    /// Parse a comma-separated part list; `""` is the empty diagram.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| Error::InvalidDiagram(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `ℓ(λ)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of cells.
    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// `λ_i`, zero out of range.
    pub fn row(&self, i: i64) -> i64 {
        if i < 1 {
            return 0;
        }
        self.parts.get(i as usize - 1).map_or(0, |&p| p as i64)
    }

    pub fn contains(&self, (i, j): Cell) -> bool {
        i >= 1 && j >= 1 && j <= self.row(i)
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.size());
        for (r, &p) in self.parts.iter().enumerate() {
            for c in 1..=p as i64 {
                out.push((r as i64 + 1, c));
            }
        }
        out
    }

    pub fn cell_set(&self) -> CellSet {
        self.cells().into_iter().collect()
    }

    /// Rebuild a diagram from a cell set, if the set is one.
    pub fn from_cells(cells: &CellSet) -> Option<Diagram> {
        let rows = cells.iter().map(|c| c.0).max().unwrap_or(0);
        let mut parts = Vec::new();
        for i in 1..=rows {
            let p = cells.iter().filter(|c| c.0 == i).count() as i64;
            if (1..=p).any(|j| !cells.contains(&(i, j))) {
                return None;
            }
            parts.push(p as u32);
        }
        if cells.iter().any(|c| c.0 < 1 || c.1 < 1) {
            return None;
        }
        Diagram::new(parts).ok()
    }

    pub fn contains_diagram(&self, other: &Diagram) -> bool {
        other.cells().into_iter().all(|c| self.contains(c))
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// `δ_r = (r-1, r-2, …, 1)`.
///
/// ```
/// use qtoda::shapes::staircase;
/// assert_eq!(staircase(5).unwrap().parts(), &[4, 3, 2, 1]);
/// assert!(staircase(1).unwrap().is_empty());
/// ```
pub fn staircase(r: u32) -> Result<Diagram> {
    if r == 0 {
        return Err(Error::InvalidDiagram("staircase(0) is undefined".into()));
    }
    Diagram::new((1..r).rev().collect())
}

/// True if the diagram is some `δ_r`.
pub fn is_staircase(d: &Diagram) -> bool {
    let l = d.len() as u32;
    d.parts().iter().enumerate().all(|(k, &p)| p == l - k as u32)
}

/// `λ° = {(i,j) ∈ λ : (i,j+1) ∈ λ, (i+1,j) ∈ λ}`.
pub fn interior(lambda: &Diagram) -> CellSet {
    lambda
        .cells()
        .into_iter()
        .filter(|&(i, j)| lambda.contains((i, j + 1)) && lambda.contains((i + 1, j)))
        .collect()
}

/// `λ°` as a diagram.
pub fn interior_diagram(lambda: &Diagram) -> Diagram {
    Diagram::from_cells(&interior(lambda)).expect("interior of a diagram is a diagram")
}

/// A pair `(λ, μ)` with `μ ⊆ λ°`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewShape {
    lambda: Diagram,
    mu: Diagram,
}

impl SkewShape {
    pub fn new(lambda: Diagram, mu: Diagram) -> Result<Self> {
        let inner = interior(&lambda);
        if let Some(c) = mu.cells().into_iter().find(|c| !inner.contains(c)) {
            return Err(Error::MuNotInterior(c));
        }
        Ok(SkewShape { lambda, mu })
    }

    /// `λ/∅`.
    pub fn full(lambda: Diagram) -> Self {
        SkewShape { lambda, mu: Diagram::empty() }
    }

    pub fn lambda(&self) -> &Diagram {
        &self.lambda
    }

    pub fn mu(&self) -> &Diagram {
        &self.mu
    }

    pub fn in_lambda(&self, c: Cell) -> bool {
        self.lambda.contains(c)
    }

    pub fn in_mu(&self, c: Cell) -> bool {
        self.mu.contains(c)
    }

    /// `c ∈ λ/μ`.
    pub fn in_boundary(&self, c: Cell) -> bool {
        self.lambda.contains(c) && !self.mu.contains(c)
    }

    /// Cells of `λ/μ`, row-major.
    pub fn boundary_cells(&self) -> Vec<Cell> {
        self.lambda.cells().into_iter().filter(|&c| !self.mu.contains(c)).collect()
    }

    pub fn mu_cells(&self) -> Vec<Cell> {
        self.mu.cells()
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.lambda, self.mu)
    }
}

/// The cell sets `Vert`, `Hor`, `C(μ)` and `μ̃`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecialSets {
    pub vert: CellSet,
    pub hor: CellSet,
    pub corners: CellSet,
    pub mu_tilde: CellSet,
}

pub fn special_sets(shape: &SkewShape) -> SpecialSets {
    let mu = shape.mu();
    let lam = shape.lambda();
    let vert = shape
        .boundary_cells()
        .into_iter()
        .filter(|&(i, j)| mu.contains((i - 1, j)) && shape.in_boundary((i, j - 1)))
        .collect();
    let hor = mu.cells().into_iter().filter(|&(i, j)| shape.in_boundary((i - 1, j + 1))).collect();
    let corners = mu
        .cells()
        .into_iter()
        .filter(|&(i, j)| !mu.contains((i + 1, j)) && !mu.contains((i, j + 1)))
        .collect();
    let mu_tilde = lam
        .cells()
        .into_iter()
        .filter(|&(i, j)| mu.contains((i, j)) || mu.contains((i - 1, j)) || mu.contains((i, j - 1)))
        .collect();
    SpecialSets { vert, hor, corners, mu_tilde }
}

/// Smallest staircase containing `μ` obtained by filling anti-diagonal
/// neighbours until nothing changes (`μ̂`). Positive coordinates only.
///
/// ```
/// use qtoda::shapes::{staircase_closure, Diagram};
/// let m = Diagram::new(vec![2, 2]).unwrap();
/// assert_eq!(staircase_closure(&m).parts(), &[3, 2, 1]);
/// ```
pub fn staircase_closure(mu: &Diagram) -> Diagram {
    let mut cur = mu.cell_set();
    loop {
        let mut next = cur.clone();
        for &(i, j) in &cur {
            for c in [(i - 1, j + 1), (i + 1, j - 1)] {
                if c.0 >= 1 && c.1 >= 1 {
                    next.insert(c);
                }
            }
        }
        if next.len() == cur.len() {
            break;
        }
        cur = next;
    }
    Diagram::from_cells(&cur).expect("closure of a diagram is a diagram")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: &[u32]) -> Diagram {
        Diagram::new(p.to_vec()).unwrap()
    }

    #[test]
    fn staircases() {
        assert_eq!(staircase(5).unwrap(), d(&[4, 3, 2, 1]));
        assert_eq!(staircase(1).unwrap(), Diagram::empty());
        assert_eq!(staircase(2).unwrap(), d(&[1]));
        assert!(staircase(0).is_err());
        assert!(is_staircase(&d(&[3, 2, 1])));
        assert!(!is_staircase(&d(&[2, 2])));
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Diagram::new(vec![1, 2]).is_err());
        assert!(Diagram::new(vec![2, 0, 1]).is_err());
        assert_eq!(Diagram::new(vec![2, 1, 0]).unwrap(), d(&[2, 1]));
        assert_eq!(Diagram::parse("").unwrap(), Diagram::empty());
        assert_eq!(Diagram::parse("4,3,2,1").unwrap().to_string(), "4,3,2,1");
    }

    #[test]
    fn interiors() {
        assert!(interior(&Diagram::empty()).is_empty());
        assert_eq!(interior(&d(&[3, 3, 3])), d(&[2, 2]).cell_set());
        for r in 1..6 {
            assert_eq!(interior(&staircase(r + 1).unwrap()), staircase(r).unwrap().cell_set());
        }
    }

    #[test]
    fn skew_validation() {
        assert!(SkewShape::new(d(&[3, 3, 3]), d(&[2, 2])).is_ok());
        assert_eq!(
            SkewShape::new(d(&[3, 3, 3]), d(&[3])).unwrap_err(),
            Error::MuNotInterior((1, 3))
        );
    }

    #[test]
    fn special_set_examples() {
        let s = special_sets(&SkewShape::new(d(&[3, 3, 3]), d(&[2, 2])).unwrap());
        assert_eq!(s.vert, [(3, 2)].into_iter().collect());
        assert_eq!(s.hor, [(2, 2)].into_iter().collect());
        assert_eq!(s.corners, [(2, 2)].into_iter().collect());
        let s = special_sets(&SkewShape::new(d(&[4, 4, 3, 2]), d(&[2, 1])).unwrap());
        assert!(s.vert.is_empty());
        let s = special_sets(&SkewShape::full(d(&[3, 2])));
        assert_eq!(s, SpecialSets::default());
    }

    #[test]
    fn closures() {
        assert_eq!(staircase_closure(&Diagram::empty()), Diagram::empty());
        assert_eq!(staircase_closure(&d(&[2, 2])), d(&[3, 2, 1]));
        assert_eq!(staircase_closure(&d(&[3, 2, 1])), d(&[3, 2, 1]));
        assert_eq!(staircase_closure(&d(&[3, 3])), d(&[4, 3, 2, 1]));
    }
}
