//! Reference implementations used as oracles. They share no code with the
//! library's linear algebra.

#![allow(dead_code)]

use cellhom::ChainComplex;

/// Rank over GF(2) of a matrix given as rows of bytes, by plain Gaussian
/// elimination.
pub fn naive_rank(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| r.iter().map(|v| v & 1).collect())
        .collect();
    let n_cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..n_cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] == 1 {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank from the size of the column span, enumerating every combination of
/// columns. Columns are bit masks over at most 32 rows.
pub fn brute_rank(columns: &[u32]) -> usize {
    let mut images = std::collections::HashSet::new();
    for mask in 0u32..1 << columns.len() {
        let mut v = 0;
        for (j, c) in columns.iter().enumerate() {
            if mask >> j & 1 == 1 {
                v ^= c;
            }
        }
        images.insert(v);
    }
    images.len().trailing_zeros() as usize
}

/// Number of column combinations that sum to zero.
pub fn brute_kernel_size(columns: &[u32]) -> usize {
    (0u32..1 << columns.len())
        .filter(|mask| {
            columns
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .fold(0, |a, (_, c)| a ^ c)
                == 0
        })
        .count()
}

/// Dense rows of the boundary map out of degree `d`.
pub fn dense_boundary(x: &ChainComplex, d: usize) -> Vec<Vec<u8>> {
    let m = x.boundary(d);
    (0..m.n_rows())
        .map(|i| (0..m.n_cols()).map(|j| m.get(i, j) as u8).collect())
        .collect()
}

/// Betti numbers by naive elimination on each boundary map.
pub fn naive_betti(x: &ChainComplex) -> Vec<usize> {
    let top = x.max_degree();
    let rank = |d: usize| {
        if d == 0 || d > top {
            0
        } else {
            naive_rank(&dense_boundary(x, d))
        }
    };
    (0..=top)
        .map(|d| x.cell_count(d) - rank(d) - rank(d + 1))
        .collect()
}

/// Betti numbers by enumerating every chain: |cycles| / |boundaries| in each
/// degree. Only for complexes with at most ~20 cells per degree.
pub fn exhaustive_betti(x: &ChainComplex) -> Vec<usize> {
    let top = x.max_degree();
    let col_masks = |d: usize| -> Vec<u32> {
        let m = x.boundary(d);
        (0..m.n_cols())
            .map(|j| {
                (0..m.n_rows())
                    .filter(|&i| m.get(i, j))
                    .map(|i| 1u32 << i)
                    .sum()
            })
            .collect()
    };
    (0..=top)
        .map(|d| {
            let n = x.cell_count(d);
            let cycles = if d == 0 {
                1usize << n
            } else {
                brute_kernel_size(&col_masks(d))
            };
            let boundaries = if d == top {
                1
            } else {
                1usize << brute_rank(&col_masks(d + 1))
            };
            (cycles / boundaries).trailing_zeros() as usize
        })
        .collect()
}

/// A random valid complex with at most `max_cells` cells and top degree at
/// most 3. Each boundary column is a random cycle of the map below it.
pub fn random_complex<R: rand::Rng>(rng: &mut R, max_cells: usize) -> ChainComplex {
    let top = rng.gen_range(0..=3usize);
    let mut counts = vec![0usize; top + 1];
    let total = rng.gen_range(1..=max_cells);
    for _ in 0..total {
        counts[rng.gen_range(0..=top)] += 1;
    }
    random_complex_with_counts(rng, &counts, true)
}

/// A random complex with the given cell counts. With `valid`, boundary
/// columns are drawn from the cycles of the map below; otherwise they are
/// arbitrary.
pub fn random_complex_with_counts<R: rand::Rng>(
    rng: &mut R,
    counts: &[usize],
    valid: bool,
) -> ChainComplex {
    use cellhom::{Cell, CellType, Gf2Matrix};
    let cells: Vec<Vec<Cell>> = counts
        .iter()
        .enumerate()
        .map(|(d, &n)| {
            (0..n)
                .map(|k| {
                    let t = if rng.gen_bool(0.5) {
                        CellType::First
                    } else {
                        CellType::Second
                    };
                    Cell::new(format!("c{d}_{k}"), d).with_type(t)
                })
                .collect()
        })
        .collect();
    let mut dense: Vec<Vec<Vec<u8>>> = Vec::new();
    for d in 1..counts.len() {
        let (rows, cols) = (counts[d - 1], counts[d]);
        let candidates: Vec<u32> = (0u32..1 << rows)
            .filter(|&v| {
                !valid
                    || d == 1
                    || dense[d - 2].iter().all(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(i, b)| **b == 1 && v >> i & 1 == 1)
                            .count()
                            % 2
                            == 0
                    })
            })
            .collect();
        let picks: Vec<u32> = (0..cols)
            .map(|_| candidates[rng.gen_range(0..candidates.len())])
            .collect();
        dense.push(
            (0..rows)
                .map(|i| picks.iter().map(|v| (v >> i & 1) as u8).collect())
                .collect(),
        );
    }
    let boundaries = dense
        .iter()
        .zip(counts.windows(2))
        .map(|(rows, w)| Gf2Matrix::from_dense(w[1], rows))
        .collect();
    ChainComplex::new("random", cells, boundaries).unwrap()
}

/// The same complex with the cells of each degree reordered by a random
/// permutation and renamed.
pub fn permuted<R: rand::Rng>(rng: &mut R, x: &ChainComplex) -> ChainComplex {
    use cellhom::Gf2Matrix;
    use rand::seq::SliceRandom;
    let perms: Vec<Vec<usize>> = (0..=x.max_degree())
        .map(|d| {
            let mut p: Vec<usize> = (0..x.cell_count(d)).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    let cells = perms
        .iter()
        .enumerate()
        .map(|(d, p)| {
            p.iter()
                .map(|&k| {
                    let mut c = x.cells(d)[k].clone();
                    c.name = format!("r_{}", c.name);
                    c
                })
                .collect()
        })
        .collect();
    let boundaries = (1..=x.max_degree())
        .map(|d| x.boundary(d).select(&perms[d - 1], &perms[d]))
        .collect::<Vec<Gf2Matrix>>();
    ChainComplex::new("permuted", cells, boundaries).unwrap()
}

/// Number of distinct sums of subsets of `vs`, a power of two, for vectors
/// of at most 5 bits.
fn span_size(vs: &[u32]) -> u32 {
    let mut span: u32 = 1;
    for &c in vs {
        let mut out = span;
        for v in 0..32 {
            if span >> v & 1 == 1 {
                out |= 1 << (v ^ c as usize);
            }
        }
        span = out;
    }
    span.count_ones()
}

/// Checks rank and kernel basis of one matrix, given by its columns as bit
/// masks, against the oracle rank.
fn check_matrix(n_rows: usize, columns: &[u32], oracle_rank: usize) -> Result<(), String> {
    use cellhom::Gf2Matrix;
    let mut rows = [0u64; 32];
    for (j, &c) in columns.iter().enumerate() {
        for (i, row) in rows.iter_mut().enumerate().take(n_rows) {
            *row |= u64::from(c >> i & 1) << j;
        }
    }
    let m = Gf2Matrix::from_row_bits(columns.len(), &rows[..n_rows]);
    let rank = m.rank();
    if rank != oracle_rank {
        return Err(format!("rank {rank} != oracle {oracle_rank} for {m:?}"));
    }
    let kernel = m.kernel_basis();
    if kernel.len() + rank != columns.len() {
        return Err(format!("kernel has {} vectors for {m:?}", kernel.len()));
    }
    let as_masks: Vec<u32> = kernel
        .iter()
        .map(|v| v.ones().map(|j| 1u32 << j).sum())
        .collect();
    for k in &as_masks {
        let image = columns
            .iter()
            .enumerate()
            .filter(|(j, _)| k >> j & 1 == 1)
            .fold(0, |a, (_, c)| a ^ c);
        if image != 0 {
            return Err(format!("kernel vector {k:b} is not in the kernel of {m:?}"));
        }
    }
    let independent = if columns.len() <= 5 {
        span_size(&as_masks) == 1 << as_masks.len()
    } else {
        brute_rank(&as_masks) == as_masks.len()
    };
    if !independent {
        return Err(format!("kernel basis of {m:?} is dependent"));
    }
    Ok(())
}

/// Runs `check_matrix` on every matrix with at most `max` rows and columns
/// whose shape passes `shape`.
/// The oracle rank comes from the span of all column combinations, built up
/// one column at a time and shared between matrices with common leading
/// columns. Returns the number of matrices checked.
pub fn exhaustive_matrix_check(
    max: usize,
    shape: impl Fn(usize, usize) -> bool,
) -> Result<usize, String> {
    fn extend(span: u32, c: u32) -> u32 {
        let mut out = span;
        for v in 0..32 {
            if span >> v & 1 == 1 {
                out |= 1 << (v ^ c as usize);
            }
        }
        out
    }
    fn go(
        n_rows: usize,
        n_cols: usize,
        cols: &mut Vec<u32>,
        span: u32,
        count: &mut usize,
    ) -> Result<(), String> {
        if cols.len() == n_cols {
            *count += 1;
            return check_matrix(n_rows, cols, span.count_ones().trailing_zeros() as usize);
        }
        for c in 0..1u32 << n_rows {
            cols.push(c);
            go(n_rows, n_cols, cols, extend(span, c), count)?;
            cols.pop();
        }
        Ok(())
    }
    assert!(max <= 5);
    let mut count = 0;
    for r in 0..=max {
        for c in (0..=max).filter(|&c| shape(r, c)) {
            go(r, c, &mut Vec::new(), 1, &mut count)?;
        }
    }
    Ok(count)
}

/// Random `n x n` matrices checked against the enumeration oracle.
pub fn random_matrix_check<R: rand::Rng>(
    rng: &mut R,
    n: usize,
    instances: usize,
) -> Result<(), String> {
    for _ in 0..instances {
        let cols: Vec<u32> = (0..n).map(|_| rng.gen_range(0..1u32 << n)).collect();
        check_matrix(n, &cols, brute_rank(&cols))?;
    }
    Ok(())
}
