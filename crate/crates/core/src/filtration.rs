//! Filtrations by cell level and the first page of their spectral sequence.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::{Cell, CellType, ChainComplex, ComplexError};

/// Multiplicity of each CD3 cell class.
pub const CD3_CLASS_MULTIPLICITY: [(&str, u8); 28] = [
    ("A", 6),
    ("B", 6),
    ("D", 6),
    ("E", 6),
    ("a", 6),
    ("e", 6),
    ("g", 6),
    ("h", 6),
    ("i", 6),
    ("X", 6),
    ("Y", 6),
    ("J", 6),
    ("S", 6),
    ("C", 5),
    ("b", 5),
    ("c", 5),
    ("k", 5),
    ("U", 5),
    ("V", 5),
    ("Z", 5),
    ("T", 5),
    ("Ups", 5),
    ("Th", 5),
    ("d", 4),
    ("W", 4),
    ("Om", 4),
    ("Lam", 4),
    ("nabla", 4),
];

/// Multiplicity of each CD2 cell class.
pub const CD2_CLASS_MULTIPLICITY: [(&str, u8); 11] = [
    ("tripod", 3),
    ("star_chord_end", 3),
    ("double_star", 3),
    ("disjoint", 4),
    ("nested", 4),
    ("crossing", 4),
    ("chord_star", 4),
    ("double_p", 4),
    ("double_m", 4),
    ("two_stars", 4),
    ("circ_star", 4),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("cell {cell} has no multiplicity class (class tag {class:?})")]
    Classification { cell: String, class: Option<String> },
    #[error("level increases along the boundary of {} at {} ({} such pair(s))", .0[0].0, .0[0].1, .0.len())]
    NotMonotone(Vec<(String, String)>),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Multiplicity of a class and its filtration level (the lowest multiplicity
/// of the same complex is level 0).
pub fn class_multiplicity(tag: &str) -> Option<(u8, u32)> {
    if let Some((_, m)) = CD3_CLASS_MULTIPLICITY.iter().find(|(t, _)| *t == tag) {
        return Some((*m, u32::from(*m - 4)));
    }
    CD2_CLASS_MULTIPLICITY
        .iter()
        .find(|(t, _)| *t == tag)
        .map(|(_, m)| (*m, u32::from(*m - 3)))
}

/// Filtration level of a cell from its class tag.
pub fn multiplicity_key(cell: &Cell) -> Result<u32, FiltrationError> {
    cell.class_tag
        .as_deref()
        .and_then(class_multiplicity)
        .map(|(_, level)| level)
        .ok_or_else(|| FiltrationError::Classification {
            cell: cell.name.clone(),
            class: cell.class_tag.clone(),
        })
}

/// Second-type cells at level 0, first-type cells at level 1.
pub fn type_key(cell: &Cell) -> Result<u32, FiltrationError> {
    Ok(match cell.type_tag {
        CellType::Second => 0,
        CellType::First => 1,
    })
}

/// Cells whose `multiplicity` attribute disagrees with their class table.
pub fn multiplicity_mismatches(x: &ChainComplex) -> Vec<String> {
    x.all_cells()
        .filter(|c| {
            let table = c.class_tag.as_deref().and_then(class_multiplicity);
            match (c.multiplicity, table) {
                (Some(m), Some((t, _))) => m != t,
                (Some(_), None) => true,
                (None, _) => false,
            }
        })
        .map(|c| c.name.clone())
        .collect()
}

/// Pairs `(cell, boundary cell)` where the boundary cell has a higher level.
pub fn monotonicity_violations<F>(
    x: &ChainComplex,
    key: F,
) -> Result<Vec<(String, String)>, FiltrationError>
where
    F: Fn(&Cell) -> Result<u32, FiltrationError>,
{
    let mut out = Vec::new();
    for c in x.all_cells() {
        let lc = key(c)?;
        for b in x.boundary_of_cell(&c.name)? {
            let cb = x.cell(b).expect("boundary cells exist");
            if key(cb)? > lc {
                out.push((c.name.clone(), b.to_string()));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Filtration {
    base: ChainComplex,
    level: BTreeMap<String, u32>,
    levels: Vec<u32>,
}

impl Filtration {
    /// Fails if some cell has a boundary cell of higher level.
    pub fn new<F>(base: ChainComplex, key: F) -> Result<Self, FiltrationError>
    where
        F: Fn(&Cell) -> Result<u32, FiltrationError>,
    {
        let v = monotonicity_violations(&base, &key)?;
        if !v.is_empty() {
            return Err(FiltrationError::NotMonotone(v));
        }
        let mut level = BTreeMap::new();
        for c in base.all_cells() {
            level.insert(c.name.clone(), key(c)?);
        }
        let mut levels: Vec<u32> = level.values().copied().collect();
        levels.sort_unstable();
        levels.dedup();
        Ok(Filtration {
            base,
            level,
            levels,
        })
    }

    pub fn by_multiplicity(base: ChainComplex) -> Result<Self, FiltrationError> {
        Self::new(base, multiplicity_key)
    }

    pub fn by_type(base: ChainComplex) -> Result<Self, FiltrationError> {
        Self::new(base, type_key)
    }

    pub fn base(&self) -> &ChainComplex {
        &self.base
    }

    /// Distinct levels in increasing order; filtration index `p` refers to
    /// `levels()[p]`.
    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn level_of(&self, name: &str) -> Option<u32> {
        self.level.get(name).copied()
    }

    /// The subcomplex of cells with level at most `levels()[p]`.
    pub fn stage(&self, p: usize) -> ChainComplex {
        let top = self.levels[p];
        self.base
            .subcomplex(|c| self.level[&c.name] <= top)
            .expect("monotone keys give subcomplexes")
    }
}

/// Dimensions of E¹_{p,q} = H_{p+q}(stage p, stage p-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E1Page {
    entries: BTreeMap<(usize, i64), usize>,
    columns: usize,
}

impl E1Page {
    pub fn get(&self, p: usize, q: i64) -> usize {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }

    /// Nonzero entries as `((p, q), dim)`, ordered by `p` then `q`.
    pub fn nonzero(&self) -> Vec<((usize, i64), usize)> {
        self.entries
            .iter()
            .filter(|(_, v)| **v > 0)
            .map(|(k, v)| (*k, *v))
            .collect()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Column `p` indexed by total degree `p + q`.
    pub fn column(&self, p: usize, max_degree: usize) -> Vec<usize> {
        (0..=max_degree)
            .map(|n| self.get(p, n as i64 - p as i64))
            .collect()
    }

    pub fn euler(&self) -> i64 {
        self.entries
            .iter()
            .map(|(&(p, q), &v)| {
                let s = if (p as i64 + q).rem_euclid(2) == 0 {
                    1
                } else {
                    -1
                };
                s * v as i64
            })
            .sum()
    }
}

/// Computes E¹ from the associated graded complexes: for each level, the
/// cells of exactly that level with the boundary restricted to them.
pub fn e1_page(f: &Filtration) -> Result<E1Page, FiltrationError> {
    let x = f.base();
    let mut entries = BTreeMap::new();
    for (p, &lv) in f.levels().iter().enumerate() {
        let graded = x.induced(format!("{}/gr{p}", x.name()), |c| f.level[&c.name] == lv);
        let b = graded.betti()?.betti_numbers();
        for (n, v) in b.into_iter().enumerate() {
            entries.insert((p, n as i64 - p as i64), v);
        }
    }
    Ok(E1Page {
        entries,
        columns: f.levels().len(),
    })
}

/// Whether the second-type cells form a subcomplex.
pub fn type_subcomplex_check(x: &ChainComplex) -> bool {
    x.subcomplex(|c| c.type_tag == CellType::Second).is_ok()
}
