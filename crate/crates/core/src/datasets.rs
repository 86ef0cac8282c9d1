//! Built-in transcriptions of the complexes CD1, CD2 and CD3, and the
//! cross-checking of two encodings of the same complex.
//!
//! CD3 ships in two independent encodings, one read from the boundary formula
//! listings and one from the incidence tables, both verbatim, plus a
//! corrected file produced by reconciling the two. Cell names are ASCII:
//! `bar_` marks a second-type cell, subscripts are joined by `_`, a `+`/`-`
//! superscript becomes `_p`/`_m`, and Greek letters are `Ups`, `Om`, `Lam`,
//! `Th`, `nabla`. CD2 cells are named by position in the pictorial listing.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::chc::{parse_chc, ParseError};
use crate::combinatorics::Matching;
use crate::complex::ChainComplex;
use crate::gf2::Gf2Matrix;

const CD1: &str = include_str!("../data/cd1.chc");
const CD2: &str = include_str!("../data/cd2.chc");
const CD3_FORMULAS: &str = include_str!("../data/cd3_formulas.chc");
const CD3_MATRICES: &str = include_str!("../data/cd3_matrices.chc");
const CD3_CORRECTED: &str = include_str!("../data/cd3_corrected.chc");
const CD3_TOP_CELLS: &str = include_str!("../data/cd3_top_cells.tsv");

/// Built-in chains files, by name.
pub const BUILTIN_CHAINS: [(&str, &str); 5] = [
    (
        "cd2_generators",
        include_str!("../data/cd2_generators.chains"),
    ),
    ("cd3_homology", include_str!("../data/cd3_homology.chains")),
    ("cd3_ker2", include_str!("../data/cd3_ker2.chains")),
    ("cd3_ker3", include_str!("../data/cd3_ker3.chains")),
    (
        "cd3_ker3_printed",
        include_str!("../data/cd3_ker3_printed.chains"),
    ),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComplexName {
    CD1,
    CD2,
    CD3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    Formulas,
    Matrices,
}

impl fmt::Display for ComplexName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplexName::CD1 => "CD1",
            ComplexName::CD2 => "CD2",
            ComplexName::CD3 => "CD3",
        })
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Formulas => "formulas",
            Encoding::Matrices => "matrices",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatasetError {
    #[error("no built-in dataset {name} in encoding {encoding}")]
    Lookup {
        name: ComplexName,
        encoding: Encoding,
    },
    #[error("unknown built-in selector {0:?}")]
    Selector(String),
    #[error("{file}: {error}")]
    Parse { file: String, error: ParseError },
    #[error("cell inventories differ: {0}")]
    Alignment(String),
    #[error("{0} discrepancies are too many to enumerate readings")]
    TooManyDiscrepancies(usize),
    #[error("no reading of the discrepancies gives a valid complex")]
    Unresolved,
}

/// Raw text of a built-in dataset file.
pub fn source_text(name: ComplexName, encoding: Encoding) -> Option<&'static str> {
    match (name, encoding) {
        (ComplexName::CD1, Encoding::Formulas) => Some(CD1),
        (ComplexName::CD2, Encoding::Formulas) => Some(CD2),
        (ComplexName::CD3, Encoding::Formulas) => Some(CD3_FORMULAS),
        (ComplexName::CD3, Encoding::Matrices) => Some(CD3_MATRICES),
        _ => None,
    }
}

pub fn corrected_text() -> &'static str {
    CD3_CORRECTED
}

fn parse_named(file: &str, text: &str) -> Result<ChainComplex, DatasetError> {
    parse_chc(text).map_err(|error| DatasetError::Parse {
        file: file.to_string(),
        error,
    })
}

/// Loads a built-in complex. The result is not validated.
pub fn load_builtin(name: ComplexName, encoding: Encoding) -> Result<ChainComplex, DatasetError> {
    let text = source_text(name, encoding).ok_or(DatasetError::Lookup { name, encoding })?;
    parse_named(&format!("{name}:{encoding}"), text)
}

/// Loads the reconciled CD3 complex.
pub fn load_corrected_cd3() -> Result<ChainComplex, DatasetError> {
    parse_named("CD3:corrected", CD3_CORRECTED)
}

/// A built-in complex addressed as `CD1`, `CD2`, `CD3`, optionally followed
/// by `:formulas`, `:matrices` or `:corrected`. A bare `CD3` is the corrected
/// complex; bare `CD1` and `CD2` are their formula encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Source(ComplexName, Encoding),
    CorrectedCd3,
}

impl FromStr for Builtin {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DatasetError::Selector(s.to_string());
        let (name, variant) = match s.split_once(':') {
            Some((n, v)) => (n, Some(v)),
            None => (s, None),
        };
        let name = match name {
            "CD1" => ComplexName::CD1,
            "CD2" => ComplexName::CD2,
            "CD3" => ComplexName::CD3,
            _ => return Err(bad()),
        };
        Ok(match (name, variant) {
            (ComplexName::CD3, None | Some("corrected")) => Builtin::CorrectedCd3,
            (_, None | Some("formulas")) => Builtin::Source(name, Encoding::Formulas),
            (_, Some("matrices")) => Builtin::Source(name, Encoding::Matrices),
            _ => return Err(bad()),
        })
    }
}

impl Builtin {
    pub fn load(self) -> Result<ChainComplex, DatasetError> {
        match self {
            Builtin::Source(n, e) => load_builtin(n, e),
            Builtin::CorrectedCd3 => load_corrected_cd3(),
        }
    }
}

pub fn builtin_chains(name: &str) -> Option<&'static str> {
    BUILTIN_CHAINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
}

/// The six-dimensional CD3 cells with their chord diagrams.
pub fn top_cell_matchings() -> Vec<(String, Matching)> {
    CD3_TOP_CELLS
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (name, m) = l.split_once('\t').expect("tab-separated table");
            (name.to_string(), m.parse().expect("valid matching"))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// An incidence present in one encoding and absent from the other.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Discrepancy {
    /// Degree of the higher cell.
    pub degree: usize,
    pub higher: String,
    pub lower: String,
    pub present_in: Side,
}

fn check_alignment(a: &ChainComplex, b: &ChainComplex) -> Result<(), DatasetError> {
    for c in a.all_cells() {
        match b.cell(&c.name) {
            None => {
                return Err(DatasetError::Alignment(format!(
                    "{} is missing from the second complex",
                    c.name
                )))
            }
            Some(o) if o.degree != c.degree => {
                return Err(DatasetError::Alignment(format!(
                    "{} has degree {} in the first complex and {} in the second",
                    c.name, c.degree, o.degree
                )))
            }
            Some(_) => {}
        }
    }
    if let Some(c) = b.all_cells().find(|c| a.cell(&c.name).is_none()) {
        return Err(DatasetError::Alignment(format!(
            "{} is missing from the first complex",
            c.name
        )));
    }
    Ok(())
}

fn incidences(x: &ChainComplex) -> HashSet<(String, String)> {
    let mut out = HashSet::new();
    for d in 1..=x.max_degree() {
        for (i, j) in x.boundary(d).nonzero_entries() {
            out.insert((x.cells(d)[j].name.clone(), x.cells(d - 1)[i].name.clone()));
        }
    }
    out
}

/// Boundary incidences on which `a` and `b` disagree, ordered by degree and
/// then by the cell order of `a`.
pub fn reconcile(a: &ChainComplex, b: &ChainComplex) -> Result<Vec<Discrepancy>, DatasetError> {
    check_alignment(a, b)?;
    let (ia, ib) = (incidences(a), incidences(b));
    let mut out: Vec<Discrepancy> = ia
        .symmetric_difference(&ib)
        .map(|(h, l)| Discrepancy {
            degree: a.locate(h).unwrap().0,
            higher: h.clone(),
            lower: l.clone(),
            present_in: if ia.contains(&(h.clone(), l.clone())) {
                Side::A
            } else {
                Side::B
            },
        })
        .collect();
    out.sort_by_key(|x| {
        (
            x.degree,
            a.locate(&x.higher).unwrap().1,
            a.locate(&x.lower).unwrap().1,
        )
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedEntry {
    pub discrepancy: Discrepancy,
    /// Whether the incidence is present in the chosen reading.
    pub present: bool,
    /// Whether the other reading of this entry also occurs in a valid complex.
    pub ambiguous: bool,
}

#[derive(Debug, Clone)]
pub struct Resolution {
    pub entries: Vec<ResolvedEntry>,
    pub complex: ChainComplex,
}

/// Largest discrepancy count for which every combination of readings is tried.
pub const MAX_RESOLVABLE: usize = 16;

fn with_incidences(
    a: &ChainComplex,
    present: &HashMap<(usize, usize, usize), bool>,
) -> ChainComplex {
    let cells = (0..=a.max_degree()).map(|d| a.cells(d).to_vec()).collect();
    let boundaries = (1..=a.max_degree())
        .map(|d| {
            let m = a.boundary(d);
            let mut entries: HashSet<(usize, usize)> = m.nonzero_entries().into_iter().collect();
            for (&(dd, i, j), &on) in present {
                if dd == d {
                    if on {
                        entries.insert((i, j));
                    } else {
                        entries.remove(&(i, j));
                    }
                }
            }
            Gf2Matrix::from_triples(
                m.n_rows(),
                m.n_cols(),
                entries.into_iter().map(|(i, j)| (i, j, 1)),
            )
        })
        .collect();
    ChainComplex::new(a.name(), cells, boundaries).expect("same shapes as a")
}

/// Chooses, for each discrepancy, whether the incidence is present.
///
/// Every combination of readings is tried on the cell inventory of `a`. Only
/// combinations giving a valid complex are kept; among those the one that
/// agrees with `b` on the most entries wins. An entry is ambiguous when both
/// of its readings occur in some valid combination.
pub fn resolve(
    a: &ChainComplex,
    b: &ChainComplex,
    discrepancies: &[Discrepancy],
) -> Result<Resolution, DatasetError> {
    check_alignment(a, b)?;
    let n = discrepancies.len();
    if n > MAX_RESOLVABLE {
        return Err(DatasetError::TooManyDiscrepancies(n));
    }
    let pos: Vec<(usize, usize, usize)> = discrepancies
        .iter()
        .map(|x| {
            let (d, j) = a.locate(&x.higher).expect("aligned");
            let (_, i) = a.locate(&x.lower).expect("aligned");
            (d, i, j)
        })
        .collect();
    let reading = |mask: u32| -> HashMap<(usize, usize, usize), bool> {
        pos.iter()
            .enumerate()
            .map(|(k, &p)| (p, mask >> k & 1 == 1))
            .collect()
    };
    let b_mask: u32 = discrepancies
        .iter()
        .enumerate()
        .filter(|(_, x)| x.present_in == Side::B)
        .map(|(k, _)| 1 << k)
        .sum();
    let valid: Vec<u32> = (0..1u32 << n)
        .filter(|&m| with_incidences(a, &reading(m)).is_valid())
        .collect();
    let best = *valid
        .iter()
        .min_by_key(|&&m| ((m ^ b_mask).count_ones(), m))
        .ok_or(DatasetError::Unresolved)?;
    let entries = discrepancies
        .iter()
        .enumerate()
        .map(|(k, x)| ResolvedEntry {
            discrepancy: x.clone(),
            present: best >> k & 1 == 1,
            ambiguous: valid.iter().any(|&m| (m ^ best) >> k & 1 == 1),
        })
        .collect();
    Ok(Resolution {
        entries,
        complex: with_incidences(a, &reading(best)),
    })
}
