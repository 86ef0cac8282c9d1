//! Chord diagrams: perfect matchings of points on a circle and cell counts.

use std::fmt;

use thiserror::Error;

use crate::complex::{CellType, ChainComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("pair ({0}, {1}) is not a chord")]
    BadPair(u8, u8),
    #[error("pairs do not partition 1..{0}")]
    NotPerfect(usize),
    #[error("cannot read a matching from {0:?}")]
    Syntax(String),
    #[error("expected a matching with 2 chords, found {0}")]
    Arity(usize),
}

/// A perfect matching of the points `1..=2k` in circular order. Pairs are
/// stored with the smaller point first, sorted by that point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    pairs: Vec<(u8, u8)>,
}

impl Matching {
    pub fn new(pairs: impl IntoIterator<Item = (u8, u8)>) -> Result<Self, MatchingError> {
        let mut pairs: Vec<(u8, u8)> = pairs
            .into_iter()
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        for &(a, b) in &pairs {
            if a == b || a == 0 {
                return Err(MatchingError::BadPair(a, b));
            }
        }
        pairs.sort_unstable();
        let n = 2 * pairs.len();
        let mut seen = vec![false; n + 1];
        for &(a, b) in &pairs {
            for p in [a, b] {
                let p = p as usize;
                if p > n || seen[p] {
                    return Err(MatchingError::NotPerfect(n));
                }
                seen[p] = true;
            }
        }
        Ok(Matching { pairs })
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|&(a, b)| {
                if b < 10 {
                    format!("{a}{b}")
                } else {
                    format!("{a}-{b}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl std::str::FromStr for Matching {
    type Err = MatchingError;

    /// Reads the `Display` form: `12 34 56`, or `1-10 ...` for points above 9.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MatchingError::Syntax(s.to_string());
        let mut pairs = Vec::new();
        for tok in s.split_whitespace() {
            let (a, b) = match tok.split_once('-') {
                Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
                None => {
                    let d: Vec<u8> = tok
                        .chars()
                        .map(|c| c.to_digit(10).map(|v| v as u8))
                        .collect::<Option<_>>()
                        .ok_or_else(bad)?;
                    match d.as_slice() {
                        [a, b] => (*a, *b),
                        _ => return Err(bad()),
                    }
                }
            };
            pairs.push((a, b));
        }
        Matching::new(pairs)
    }
}

/// All perfect matchings of `1..=2k`, in lexicographic order of pair lists.
pub fn enumerate_matchings(k: usize) -> Vec<Matching> {
    fn go(free: &mut Vec<u8>, acc: &mut Vec<(u8, u8)>, out: &mut Vec<Matching>) {
        if free.is_empty() {
            out.push(Matching { pairs: acc.clone() });
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            acc.push((a, b));
            go(free, acc, out);
            acc.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    assert!(k <= 127, "too many chords");
    let mut out = Vec::new();
    go(&mut (1..=2 * k as u8).collect(), &mut Vec::new(), &mut out);
    out
}

/// (2k - 1)!!, the number of perfect matchings of 2k points.
pub fn matching_count(k: usize) -> u64 {
    (1..=k as u64).map(|i| 2 * i - 1).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairClass {
    Disjoint,
    Crossing,
    Nested,
}

/// How the two chords of a 2-chord diagram sit relative to each other.
pub fn classify_pair(m: &Matching) -> Result<PairClass, MatchingError> {
    let [(a, b), (c, d)] = m.pairs() else {
        return Err(MatchingError::Arity(m.k()));
    };
    debug_assert!(a < c);
    Ok(if b < c {
        PairClass::Disjoint
    } else if b < d {
        PairClass::Crossing
    } else {
        PairClass::Nested
    })
}

/// Cell counts by dimension and type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCensus {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl CellCensus {
    pub fn total(&self, d: usize) -> usize {
        self.first.get(d).unwrap_or(&0) + self.second.get(d).unwrap_or(&0)
    }

    pub fn totals(&self) -> Vec<usize> {
        (0..self.first.len()).map(|d| self.total(d)).collect()
    }

    pub fn first_total(&self) -> usize {
        self.first.iter().sum()
    }

    pub fn second_total(&self) -> usize {
        self.second.iter().sum()
    }
}

pub fn census(x: &ChainComplex) -> CellCensus {
    let n = x.max_degree() + 1;
    let mut c = CellCensus {
        first: vec![0; n],
        second: vec![0; n],
    };
    for cell in x.all_cells() {
        match cell.type_tag {
            CellType::First => c.first[cell.degree] += 1,
            CellType::Second => c.second[cell.degree] += 1,
        }
    }
    c
}

/// Limit multigraph types of colliding chord endpoints in the three-chord
/// space, as `(vertex count, number of types)`.
pub const DEGENERATION_GRAPH_TYPES: [(usize, usize); 5] = [(2, 5), (3, 8), (4, 5), (5, 2), (6, 1)];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_matchings(0).len(), 1);
        assert_eq!(enumerate_matchings(1).len(), 1);
        let two: Vec<String> = enumerate_matchings(2)
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(two, ["12 34", "13 24", "14 23"]);
        assert_eq!(enumerate_matchings(3).len(), 15);
    }

    #[test]
    fn counts_follow_double_factorial() {
        for k in 0..=6 {
            assert_eq!(enumerate_matchings(k).len() as u64, matching_count(k));
        }
        assert_eq!(matching_count(8), 2_027_025);
    }

    #[test]
    fn pair_classes() {
        let c = |s: &str| classify_pair(&s.parse().unwrap()).unwrap();
        assert_eq!(c("12 34"), PairClass::Disjoint);
        assert_eq!(c("13 24"), PairClass::Crossing);
        assert_eq!(c("14 23"), PairClass::Nested);
        let three: Matching = "12 34 56".parse().unwrap();
        assert_eq!(classify_pair(&three), Err(MatchingError::Arity(3)));
    }

    #[test]
    fn matching_validation() {
        assert!(Matching::new([(1, 2), (2, 3)]).is_err());
        assert!(Matching::new([(1, 5), (2, 3)]).is_err());
        assert!("1x 34".parse::<Matching>().is_err());
        let m: Matching = "1-10 2-3 4-5 6-7 8-9".parse().unwrap();
        assert_eq!(m.to_string(), "1-10 23 45 67 89");
    }

    #[test]
    fn degeneration_constants() {
        let total: usize = DEGENERATION_GRAPH_TYPES.iter().map(|(_, n)| n).sum();
        assert_eq!(total, 21);
    }
}
