//! Finite cellular chain complexes over GF(2) with named cells.
//!
//! Boundary matrices use the column convention: the column of a d-cell in
//! `boundary(d)` lists the (d-1)-cells of its boundary.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::gf2::{Gf2Matrix, Gf2Vector, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellType {
    First,
    Second,
}

impl CellType {
    pub fn as_str(self) -> &'static str {
        match self {
            CellType::First => "first",
            CellType::Second => "second",
        }
    }
}

impl fmt::Display for CellType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub name: String,
    pub degree: usize,
    pub class_tag: Option<String>,
    pub type_tag: CellType,
    pub multiplicity: Option<u8>,
}

impl Cell {
    pub fn new(name: impl Into<String>, degree: usize) -> Self {
        Cell {
            name: name.into(),
            degree,
            class_tag: None,
            type_tag: CellType::First,
            multiplicity: None,
        }
    }

    pub fn with_class(mut self, tag: impl Into<String>) -> Self {
        self.class_tag = Some(tag.into());
        self
    }

    pub fn with_type(mut self, t: CellType) -> Self {
        self.type_tag = t;
        self
    }

    pub fn with_multiplicity(mut self, m: u8) -> Self {
        self.multiplicity = Some(m);
        self
    }
}

/// An element of C_d: a degree and the set of cells with coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub degree: usize,
    pub support: BTreeSet<String>,
}

impl Chain {
    /// Sums the given cells mod 2, so a repeated name cancels.
    pub fn new<I, S>(degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut support = BTreeSet::new();
        for t in terms {
            let t = t.into();
            if !support.remove(&t) {
                support.insert(t);
            }
        }
        Chain { degree, support }
    }

    pub fn zero(degree: usize) -> Self {
        Chain {
            degree,
            support: BTreeSet::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<&str> = self.support.iter().map(String::as_str).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A nonzero entry of `boundary(d) * boundary(d + 1)`: the (d+1)-cell
/// `higher` has a (d-1)-cell `lower` in the boundary of its boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Violation {
    pub degree: usize,
    pub higher: String,
    pub lower: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d{}∘d{} is nonzero at ({}, {})",
            self.degree,
            self.degree + 1,
            self.higher,
            self.lower
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("duplicate cell name {0}")]
    DuplicateCell(String),
    #[error("cell {name} is listed under degree {listed} but has degree {degree}")]
    MisplacedCell {
        name: String,
        listed: usize,
        degree: usize,
    },
    #[error("cell {name} has degree {degree}, above the maximum {max}")]
    DegreeTooHigh {
        name: String,
        degree: usize,
        max: usize,
    },
    #[error("boundary {degree} is {found_rows}x{found_cols}, expected {rows}x{cols}")]
    BoundaryShape {
        degree: usize,
        rows: usize,
        cols: usize,
        found_rows: usize,
        found_cols: usize,
    },
    #[error("expected {expected} boundary matrices, found {found}")]
    BoundaryCount { expected: usize, found: usize },
    #[error("unknown cell {0}")]
    UnknownCell(String),
    #[error("cell {name} has degree {actual}, not {expected}")]
    WrongDegree {
        name: String,
        expected: usize,
        actual: usize,
    },
    #[error("boundary of {0} is already set")]
    DuplicateBoundary(String),
    #[error("complex is not valid: {} violation(s), first {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
    #[error("not a subcomplex: boundary of {} meets dropped cell {} ({} such pair(s))", .0[0].0, .0[0].1, .0.len())]
    Closure(Vec<(String, String)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHomology {
    pub cells: usize,
    /// Rank of the boundary map into this degree.
    pub rank_in: usize,
    /// Rank of the boundary map out of this degree.
    pub rank_out: usize,
    pub betti: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyReport {
    pub degrees: Vec<DegreeHomology>,
    pub euler_characteristic: i64,
}

impl HomologyReport {
    pub fn betti_numbers(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }
}

/// Outcome of checking a list of chains against a basis condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListCheck {
    pub degree: usize,
    pub count: usize,
    pub expected: usize,
    /// Positions of chains that are not cycles.
    pub non_cycles: Vec<usize>,
    /// Positions of chains dependent on the ones before them.
    pub dependent: Vec<usize>,
}

impl ListCheck {
    pub fn passed(&self) -> bool {
        self.non_cycles.is_empty() && self.dependent.is_empty() && self.count == self.expected
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    name: String,
    cells: Vec<Vec<Cell>>,
    /// `boundaries[d - 1]` is the boundary map out of degree `d`.
    boundaries: Vec<Gf2Matrix>,
    index: HashMap<String, (usize, usize)>,
}

impl ChainComplex {
    /// Assembles a complex from cells grouped by degree (`cells[d]` holds the
    /// d-cells) and the boundary matrices for degrees `1..cells.len()`.
    pub fn new(
        name: impl Into<String>,
        cells: Vec<Vec<Cell>>,
        boundaries: Vec<Gf2Matrix>,
    ) -> Result<Self, ComplexError> {
        let mut cells = cells;
        if cells.is_empty() {
            cells.push(Vec::new());
        }
        let mut index = HashMap::new();
        for (d, group) in cells.iter().enumerate() {
            for (k, c) in group.iter().enumerate() {
                if c.degree != d {
                    return Err(ComplexError::MisplacedCell {
                        name: c.name.clone(),
                        listed: d,
                        degree: c.degree,
                    });
                }
                if index.insert(c.name.clone(), (d, k)).is_some() {
                    return Err(ComplexError::DuplicateCell(c.name.clone()));
                }
            }
        }
        if boundaries.len() != cells.len() - 1 {
            return Err(ComplexError::BoundaryCount {
                expected: cells.len() - 1,
                found: boundaries.len(),
            });
        }
        for (k, m) in boundaries.iter().enumerate() {
            let d = k + 1;
            let (rows, cols) = (cells[d - 1].len(), cells[d].len());
            if m.n_rows() != rows || m.n_cols() != cols {
                return Err(ComplexError::BoundaryShape {
                    degree: d,
                    rows,
                    cols,
                    found_rows: m.n_rows(),
                    found_cols: m.n_cols(),
                });
            }
        }
        Ok(ChainComplex {
            name: name.into(),
            cells,
            boundaries,
            index,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn max_degree(&self) -> usize {
        self.cells.len() - 1
    }

    /// The d-cells in declaration order; empty above the top degree.
    pub fn cells(&self, d: usize) -> &[Cell] {
        self.cells.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cell_count(&self, d: usize) -> usize {
        self.cells(d).len()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// All cells, degree by degree.
    pub fn all_cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().flatten()
    }

    /// The boundary map out of degree `d`, for `1 <= d <= max_degree`.
    pub fn boundary(&self, d: usize) -> &Gf2Matrix {
        assert!(
            d >= 1 && d <= self.max_degree(),
            "no boundary map out of degree {d}"
        );
        &self.boundaries[d - 1]
    }

    /// Rank of the boundary map out of degree `d`; zero outside `1..=max`.
    pub fn boundary_rank(&self, d: usize) -> usize {
        if d == 0 || d > self.max_degree() {
            0
        } else {
            self.boundary(d).rank()
        }
    }

    /// Degree and position of a cell.
    pub fn locate(&self, name: &str) -> Option<(usize, usize)> {
        self.index.get(name).copied()
    }

    pub fn cell(&self, name: &str) -> Option<&Cell> {
        self.locate(name).map(|(d, k)| &self.cells[d][k])
    }

    /// Names of the cells in the boundary of `name`, in declaration order.
    pub fn boundary_of_cell(&self, name: &str) -> Result<Vec<&str>, ComplexError> {
        let (d, k) = self
            .locate(name)
            .ok_or_else(|| ComplexError::UnknownCell(name.to_string()))?;
        if d == 0 {
            return Ok(Vec::new());
        }
        Ok(self
            .boundary(d)
            .column(k)
            .ones()
            .map(|i| self.cells[d - 1][i].name.as_str())
            .collect())
    }

    /// Every nonzero entry of every composite `boundary(d) * boundary(d + 1)`.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for d in 1..self.max_degree() {
            let prod = self
                .boundary(d)
                .mul(self.boundary(d + 1))
                .expect("shapes are checked at construction");
            for (i, j) in prod.nonzero_entries() {
                out.push(Violation {
                    degree: d,
                    higher: self.cells[d + 1][j].name.clone(),
                    lower: self.cells[d - 1][i].name.clone(),
                });
            }
        }
        out.sort_by(|a, b| {
            let ka = (a.degree, self.index[&a.higher].1, self.index[&a.lower].1);
            let kb = (b.degree, self.index[&b.higher].1, self.index[&b.lower].1);
            ka.cmp(&kb)
        });
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Betti numbers by rank-nullity. Refuses complexes that fail `validate`.
    pub fn betti(&self) -> Result<HomologyReport, ComplexError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(ComplexError::Invalid(violations));
        }
        let top = self.max_degree();
        let ranks: Vec<usize> = (0..=top + 1).map(|d| self.boundary_rank(d)).collect();
        let degrees = (0..=top)
            .map(|d| {
                let cells = self.cell_count(d);
                DegreeHomology {
                    cells,
                    rank_in: ranks[d + 1],
                    rank_out: ranks[d],
                    betti: cells - ranks[d] - ranks[d + 1],
                }
            })
            .collect();
        Ok(HomologyReport {
            degrees,
            euler_characteristic: self.euler(),
        })
    }

    /// Alternating count of cells.
    pub fn euler(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(d, c)| {
                if d % 2 == 0 {
                    c.len() as i64
                } else {
                    -(c.len() as i64)
                }
            })
            .sum()
    }

    fn closure_witnesses(&self, keep: &[Vec<bool>]) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for d in 1..=self.max_degree() {
            let m = self.boundary(d);
            for (k, c) in self.cells[d].iter().enumerate() {
                if !keep[d][k] {
                    continue;
                }
                for i in m.column(k).ones() {
                    if !keep[d - 1][i] {
                        out.push((c.name.clone(), self.cells[d - 1][i].name.clone()));
                    }
                }
            }
        }
        out
    }

    fn mask(&self, keep: impl Fn(&Cell) -> bool) -> Vec<Vec<bool>> {
        self.cells
            .iter()
            .map(|g| g.iter().map(&keep).collect())
            .collect()
    }

    fn restrict(&self, name: String, mask: &[Vec<bool>]) -> ChainComplex {
        let picked: Vec<Vec<usize>> = mask
            .iter()
            .map(|m| (0..m.len()).filter(|&k| m[k]).collect())
            .collect();
        let cells = picked
            .iter()
            .enumerate()
            .map(|(d, ks)| ks.iter().map(|&k| self.cells[d][k].clone()).collect())
            .collect();
        let boundaries = (1..=self.max_degree())
            .map(|d| self.boundary(d).select(&picked[d - 1], &picked[d]))
            .collect();
        ChainComplex::new(name, cells, boundaries).expect("restriction preserves shapes")
    }

    /// The cells satisfying `keep` with every boundary map restricted to
    /// them. No closure check is made, so the result need not be valid.
    pub fn induced(&self, name: impl Into<String>, keep: impl Fn(&Cell) -> bool) -> ChainComplex {
        self.restrict(name.into(), &self.mask(keep))
    }

    /// The subcomplex on the cells satisfying `keep`. Fails if a kept cell has
    /// a dropped cell in its boundary.
    pub fn subcomplex(&self, keep: impl Fn(&Cell) -> bool) -> Result<ChainComplex, ComplexError> {
        let mask = self.mask(keep);
        let w = self.closure_witnesses(&mask);
        if !w.is_empty() {
            return Err(ComplexError::Closure(w));
        }
        Ok(self.restrict(self.name.clone(), &mask))
    }

    /// The quotient by the subcomplex on the cells satisfying `keep`: the
    /// dropped cells, with boundaries taken modulo the kept ones.
    pub fn quotient(&self, keep: impl Fn(&Cell) -> bool) -> Result<ChainComplex, ComplexError> {
        let mask = self.mask(keep);
        let w = self.closure_witnesses(&mask);
        if !w.is_empty() {
            return Err(ComplexError::Closure(w));
        }
        let inverse: Vec<Vec<bool>> = mask
            .iter()
            .map(|m| m.iter().map(|b| !b).collect())
            .collect();
        Ok(self.restrict(format!("{}/sub", self.name), &inverse))
    }

    /// Betti numbers of the pair (self, sub), computed on the quotient complex.
    pub fn relative_betti(&self, keep: impl Fn(&Cell) -> bool) -> Result<Vec<usize>, ComplexError> {
        Ok(self.quotient(keep)?.betti()?.betti_numbers())
    }

    /// The coordinate vector of a chain in C_d.
    pub fn chain_vector(&self, c: &Chain) -> Result<Gf2Vector, ComplexError> {
        let mut idx = Vec::with_capacity(c.support.len());
        for n in &c.support {
            let (d, k) = self
                .locate(n)
                .ok_or_else(|| ComplexError::UnknownCell(n.clone()))?;
            if d != c.degree {
                return Err(ComplexError::WrongDegree {
                    name: n.clone(),
                    expected: c.degree,
                    actual: d,
                });
            }
            idx.push(k);
        }
        Ok(Gf2Vector::from_indices(self.cell_count(c.degree), idx))
    }

    pub fn chain_from_vector(&self, degree: usize, v: &Gf2Vector) -> Chain {
        Chain::new(degree, v.ones().map(|k| self.cells[degree][k].name.clone()))
    }

    pub fn boundary_chain(&self, c: &Chain) -> Result<Chain, ComplexError> {
        let v = self.chain_vector(c)?;
        if c.degree == 0 || c.degree > self.max_degree() {
            return Ok(Chain::zero(c.degree.saturating_sub(1)));
        }
        let b = self
            .boundary(c.degree)
            .mul_vec(&v)
            .expect("chain vector has the cell count as length");
        Ok(self.chain_from_vector(c.degree - 1, &b))
    }

    pub fn is_cycle(&self, c: &Chain) -> Result<bool, ComplexError> {
        Ok(self.boundary_chain(c)?.is_zero())
    }

    fn check_list(
        &self,
        degree: usize,
        chains: &[Chain],
        mut span: Span,
        expected: usize,
    ) -> Result<ListCheck, ComplexError> {
        let mut non_cycles = Vec::new();
        let mut dependent = Vec::new();
        for (k, c) in chains.iter().enumerate() {
            if c.degree != degree {
                if let Some(n) = c.support.iter().next() {
                    return Err(ComplexError::WrongDegree {
                        name: n.clone(),
                        expected: degree,
                        actual: c.degree,
                    });
                }
            }
            let c = Chain {
                degree,
                support: c.support.clone(),
            };
            if !self.is_cycle(&c)? {
                non_cycles.push(k);
            }
            let v = self.chain_vector(&c)?;
            if !span.insert(&v).expect("lengths agree") {
                dependent.push(k);
            }
        }
        Ok(ListCheck {
            degree,
            count: chains.len(),
            expected,
            non_cycles,
            dependent,
        })
    }

    fn boundary_span(&self, degree: usize) -> Span {
        let mut span = Span::new(self.cell_count(degree));
        if degree < self.max_degree() {
            let m = self.boundary(degree + 1);
            for j in 0..m.n_cols() {
                span.insert(&m.column(j)).expect("lengths agree");
            }
        }
        span
    }

    /// Checks that `chains` are cycles whose classes form a basis of H_d.
    pub fn check_homology_basis(
        &self,
        degree: usize,
        chains: &[Chain],
    ) -> Result<ListCheck, ComplexError> {
        let report = self.betti()?;
        let expected = report.degrees.get(degree).map_or(0, |h| h.betti);
        self.check_list(degree, chains, self.boundary_span(degree), expected)
    }

    pub fn verify_homology_basis(
        &self,
        degree: usize,
        chains: &[Chain],
    ) -> Result<bool, ComplexError> {
        Ok(self.check_homology_basis(degree, chains)?.passed())
    }

    /// Dimension of the kernel of the boundary map out of degree `d`.
    pub fn cycle_rank(&self, degree: usize) -> usize {
        self.cell_count(degree) - self.boundary_rank(degree)
    }

    /// Checks that `chains` form a basis of the cycles in degree `d`.
    pub fn check_kernel_list(
        &self,
        degree: usize,
        chains: &[Chain],
    ) -> Result<ListCheck, ComplexError> {
        let span = Span::new(self.cell_count(degree));
        self.check_list(degree, chains, span, self.cycle_rank(degree))
    }

    pub fn verify_kernel_list(
        &self,
        degree: usize,
        chains: &[Chain],
    ) -> Result<bool, ComplexError> {
        Ok(self.check_kernel_list(degree, chains)?.passed())
    }

    /// A basis of the cycles in degree `d`, in the deterministic order of
    /// `Gf2Matrix::kernel_basis`.
    pub fn cycle_basis(&self, degree: usize) -> Vec<Chain> {
        let n = self.cell_count(degree);
        let vs = if degree == 0 || degree > self.max_degree() {
            (0..n).map(|k| Gf2Vector::from_indices(n, [k])).collect()
        } else {
            self.boundary(degree).kernel_basis()
        };
        vs.iter()
            .map(|v| self.chain_from_vector(degree, v))
            .collect()
    }
}
