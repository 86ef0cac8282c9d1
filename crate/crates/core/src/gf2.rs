//! Dense bit-packed linear algebra over the two-element field.
//!
//! Rows are stored as runs of `u64` words. Bits past the logical width of a
//! row are always zero, so whole-word comparisons and XORs are exact.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("cannot multiply a {a_rows}x{a_cols} matrix by a {b_rows}x{b_cols} matrix")]
    Product {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },
    #[error("vector of length {found} used where length {expected} is required")]
    Length { expected: usize, found: usize },
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Gf2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from the positions of its 1-entries. Repeated positions
    /// cancel in pairs.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            assert!(i < len, "index {i} out of range for length {len}");
            v.words[i / WORD] ^= 1 << (i % WORD);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions of the 1-entries in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        ones_in(&self.words)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.ones().next()
    }

    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        assert_eq!(self.len, other.len, "vector lengths differ");
        xor_into(&mut self.words, &other.words);
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "Gf2Vector[{s}]")
    }
}

fn ones_in(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(k * WORD + t)
        })
    })
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// A dense matrix over GF(2), immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    n_rows: usize,
    n_cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        let stride = words_for(n_cols);
        Gf2Matrix {
            n_rows,
            n_cols,
            stride,
            data: vec![0; stride * n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triples(n, n, (0..n).map(|i| (i, i, 1)))
    }

    /// Builds a matrix from `(row, col, value)` triples. Values are reduced
    /// mod 2 and accumulated with XOR, so the order of triples is irrelevant.
    pub fn from_triples<I>(n_rows: usize, n_cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, u8)>,
    {
        let mut m = Self::zeros(n_rows, n_cols);
        for (i, j, v) in entries {
            assert!(
                i < n_rows && j < n_cols,
                "entry ({i}, {j}) outside a {n_rows}x{n_cols} matrix"
            );
            if v & 1 == 1 {
                m.data[i * m.stride + j / WORD] ^= 1 << (j % WORD);
            }
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries.
    pub fn from_dense(n_cols: usize, rows: &[Vec<u8>]) -> Self {
        let n_rows = rows.len();
        Self::from_triples(
            n_rows,
            n_cols,
            rows.iter().enumerate().flat_map(|(i, r)| {
                assert_eq!(r.len(), n_cols, "row {i} has the wrong length");
                r.iter().enumerate().map(move |(j, v)| (i, j, *v))
            }),
        )
    }

    /// Builds a matrix with at most 64 columns from packed rows: bit `j` of
    /// `rows[i]` is entry `(i, j)`.
    pub fn from_row_bits(n_cols: usize, rows: &[u64]) -> Self {
        assert!(n_cols <= WORD, "packed rows hold at most {WORD} columns");
        let mask = if n_cols == WORD {
            !0
        } else {
            (1u64 << n_cols) - 1
        };
        assert!(
            rows.iter().all(|r| r & !mask == 0),
            "row bits beyond column {n_cols}"
        );
        let data = if n_cols == 0 {
            Vec::new()
        } else {
            rows.to_vec()
        };
        Gf2Matrix {
            n_rows: rows.len(),
            n_cols,
            stride: words_for(n_cols),
            data,
        }
    }

    /// Builds the `n_rows x columns.len()` matrix with the given columns.
    pub fn from_columns(n_rows: usize, columns: &[Gf2Vector]) -> Self {
        Self::from_triples(
            n_rows,
            columns.len(),
            columns.iter().enumerate().flat_map(|(j, c)| {
                assert_eq!(c.len(), n_rows, "column {j} has the wrong length");
                c.ones().map(move |i| (i, j, 1))
            }),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.n_rows && j < self.n_cols);
        self.data[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> Gf2Vector {
        Gf2Vector {
            len: self.n_cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> Gf2Vector {
        Gf2Vector::from_indices(self.n_rows, (0..self.n_rows).filter(|&i| self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|w| *w == 0)
    }

    /// All `(row, col)` positions holding a 1, row-major.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize)> {
        (0..self.n_rows)
            .flat_map(|i| ones_in(self.row_words(i)).map(move |j| (i, j)))
            .collect()
    }

    pub fn transpose(&self) -> Gf2Matrix {
        Self::from_triples(
            self.n_cols,
            self.n_rows,
            self.nonzero_entries().into_iter().map(|(i, j)| (j, i, 1)),
        )
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Gf2Matrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if self.get(i, j) {
                    m.data[a * m.stride + b / WORD] |= 1 << (b % WORD);
                }
            }
        }
        m
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, ShapeError> {
        if self.n_cols != other.n_rows {
            return Err(ShapeError::Product {
                a_rows: self.n_rows,
                a_cols: self.n_cols,
                b_rows: other.n_rows,
                b_cols: other.n_cols,
            });
        }
        let mut out = Self::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            let dst = i * out.stride;
            for k in ones_in(self.row_words(i)) {
                xor_into(&mut out.data[dst..dst + out.stride], other.row_words(k));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Gf2Vector) -> Result<Gf2Vector, ShapeError> {
        if v.len() != self.n_cols {
            return Err(ShapeError::Length {
                expected: self.n_cols,
                found: v.len(),
            });
        }
        Ok(Gf2Vector::from_indices(
            self.n_rows,
            (0..self.n_rows).filter(|&i| {
                self.row_words(i)
                    .iter()
                    .zip(&v.words)
                    .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                    & 1
                    == 1
            }),
        ))
    }

    fn is_narrow(&self) -> bool {
        self.stride == 1 && self.n_rows <= WORD
    }

    /// Reduced row echelon form with its pivot columns.
    ///
    /// Pivots are chosen by scanning columns left to right and, within a
    /// column, the remaining rows top to bottom.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let s = m.stride;
        let mut pivots = Vec::new();
        let mut top = 0;
        for j in 0..m.n_cols {
            if top == m.n_rows {
                break;
            }
            let (w, bit) = (j / WORD, 1u64 << (j % WORD));
            let Some(p) = (top..m.n_rows).find(|&i| m.data[i * s + w] & bit != 0) else {
                continue;
            };
            if p != top {
                for k in 0..s {
                    m.data.swap(p * s + k, top * s + k);
                }
            }
            let pivot_row = m.data[top * s..(top + 1) * s].to_vec();
            for i in 0..m.n_rows {
                if i != top && m.data[i * s + w] & bit != 0 {
                    xor_into(&mut m.data[i * s..(i + 1) * s], &pivot_row);
                }
            }
            pivots.push(j);
            top += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.is_narrow() {
            let mut m = [0u64; WORD];
            m[..self.n_rows].copy_from_slice(&self.data);
            let mut order = [0u8; WORD + 1];
            return narrow_rref(&mut m[..self.n_rows], self.n_cols, &mut order).count_ones()
                as usize;
        }
        self.rref().1.len()
    }

    /// A basis of the null space, one vector per free column in increasing
    /// order; the vector for free column `f` has a 1 at `f` and zeros at every
    /// other free column.
    pub fn kernel_basis(&self) -> Vec<Gf2Vector> {
        if self.is_narrow() {
            let mut r = [0u64; WORD];
            r[..self.n_rows].copy_from_slice(&self.data);
            let mut order = [0u8; WORD + 1];
            let mask = narrow_rref(&mut r[..self.n_rows], self.n_cols, &mut order);
            return (0..self.n_cols)
                .filter(|&f| mask >> f & 1 == 0)
                .map(|f| {
                    let mut w = 1u64 << f;
                    let mut rest = mask;
                    for &k in &order[..mask.count_ones() as usize] {
                        let p = rest.trailing_zeros();
                        rest &= rest - 1;
                        w |= (r[k as usize] >> f & 1) << p;
                    }
                    Gf2Vector {
                        len: self.n_cols,
                        words: vec![w],
                    }
                })
                .collect();
        }
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.n_cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.n_cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                Gf2Vector::from_indices(
                    self.n_cols,
                    std::iter::once(f).chain(
                        pivots
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| r.get(*k, f))
                            .map(|(_, &p)| p),
                    ),
                )
            })
            .collect()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.n_rows, self.n_cols)?;
        for i in 0..self.n_rows {
            let s: String = (0..self.n_cols)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Reduced row echelon form of at most 64 single-word rows, in place and
/// without data-dependent branches. Returns a mask of the pivot columns;
/// `order[k]` is the row holding the `k`-th pivot. Rows are not moved, which
/// leaves the reduced form itself unchanged since it is unique.
fn narrow_rref(m: &mut [u64], n_cols: usize, order: &mut [u8; WORD + 1]) -> u64 {
    let n = m.len();
    if n == 0 {
        return 0;
    }
    let mut free = if n == WORD { !0 } else { (1u64 << n) - 1 };
    let mut pivots = 0u64;
    let mut rank = 0;
    for j in 0..n_cols {
        let mut holders = 0u64;
        for (i, r) in m.iter().enumerate() {
            holders |= (r >> j & 1) << i;
        }
        let cand = holders & free;
        let p = cand.trailing_zeros() as usize;
        let has = u64::from(cand != 0);
        let pivot = m[p % WORD] & has.wrapping_neg();
        for (i, r) in m.iter_mut().enumerate() {
            let hit = (*r >> j & 1) & u64::from(i != p);
            *r ^= pivot & hit.wrapping_neg();
        }
        free &= !(cand & cand.wrapping_neg());
        order[rank] = p as u8;
        rank += has as usize;
        pivots |= has << j;
    }
    pivots
}

/// An incrementally built echelon basis of a subspace of GF(2)^n.
#[derive(Debug, Clone)]
pub struct Span {
    len: usize,
    by_pivot: BTreeMap<usize, Gf2Vector>,
}

impl Span {
    pub fn new(len: usize) -> Self {
        Span {
            len,
            by_pivot: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.by_pivot.len()
    }

    fn reduce(&self, v: &Gf2Vector) -> Result<Gf2Vector, ShapeError> {
        if v.len() != self.len {
            return Err(ShapeError::Length {
                expected: self.len,
                found: v.len(),
            });
        }
        let mut r = v.clone();
        for (&p, b) in &self.by_pivot {
            if r.get(p) {
                r.xor_assign(b);
            }
        }
        Ok(r)
    }

    /// Adds `v`; returns whether it was independent of the current span.
    pub fn insert(&mut self, v: &Gf2Vector) -> Result<bool, ShapeError> {
        let r = self.reduce(v)?;
        match r.first_one() {
            Some(p) => {
                self.by_pivot.insert(p, r);
                Ok(true)
            }
            None => Ok(false),
        }
    }

    pub fn contains(&self, v: &Gf2Vector) -> Result<bool, ShapeError> {
        Ok(self.reduce(v)?.is_zero())
    }
}

/// Whether `v` is a GF(2) combination of `basis`.
pub fn in_span(v: &Gf2Vector, basis: &[Gf2Vector]) -> Result<bool, ShapeError> {
    let mut span = Span::new(v.len());
    for b in basis {
        span.insert(b)?;
    }
    span.contains(v)
}
