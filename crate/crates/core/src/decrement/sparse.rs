//! Large all-zero blocks of sparse low-rank matrices.
//!
//! When `p ≤ 1/(8r)`, fewer than `n/2` rows (and columns) have more than
//! `n/(4r)` ones. Removing them and greedily growing a permutation submatrix
//! either reaches size `r + 1`, which is impossible at rank `r`, or leaves an
//! all-zero block with at least `n/4` rows and columns.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::weighted::WeightedBinaryMatrix;
use crate::BinaryMatrix;

/// A `k × k` permutation submatrix: `M[rows[s], cols[t]] = 1` exactly when
/// `s = t`. Certifies `rank(M) ≥ k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl PermutationWitness {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn verify(&self, m: &BinaryMatrix) -> bool {
        self.rows.len() == self.cols.len()
            && self.rows.iter().enumerate().all(|(s, &i)| {
                self.cols
                    .iter()
                    .enumerate()
                    .all(|(t, &j)| i < m.m() && j < m.n() && m.get(i, j) == (s == t))
            })
    }
}

/// Either an all-zero block or a permutation submatrix of size `r + 1`, as
/// base indices. A zero block keeps every copy of its base rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SparseOutcome {
    Zero { rows: Vec<usize>, cols: Vec<usize> },
    Permutation(PermutationWitness),
}

/// The greedy procedure on an implicit square matrix with `p ≤ 1/(8r)`.
pub fn sparse_zero_block(w: &WeightedBinaryMatrix, r: usize) -> Result<SparseOutcome> {
    if !w.is_square() {
        return Err(Error::Precondition(
            "sparse zero block needs a square (implicit) matrix".into(),
        ));
    }
    let n = w.rows() as u128;
    if r > 0 && 8 * r as u128 * w.ones() as u128 > n * n {
        return Err(Error::Precondition(format!(
            "density {}/{} exceeds 1/(8r) for r = {r}",
            w.ones(),
            n * n
        )));
    }
    let b = w.base();
    let heavy = |deg: u64| deg as u128 * 4 * r as u128 > n;
    let mut alive_r: Vec<bool> = w.row_degrees().iter().map(|&d| !heavy(d)).collect();
    let mut alive_c: Vec<bool> = w.col_degrees().iter().map(|&d| !heavy(d)).collect();
    let t = b.transpose();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    loop {
        let found = first_one(b, &alive_r, &alive_c);
        let Some((i, j)) = found else {
            let rows = (0..b.m()).filter(|&i| alive_r[i]).collect();
            let cols = (0..b.n()).filter(|&j| alive_c[j]).collect();
            return Ok(SparseOutcome::Zero { rows, cols });
        };
        pairs.push((i, j));
        if pairs.len() > r {
            let (rows, cols) = pairs.into_iter().unzip();
            return Ok(SparseOutcome::Permutation(PermutationWitness { rows, cols }));
        }
        for i2 in set_bits(t.row_words(j)) {
            alive_r[i2] = false;
        }
        for j2 in set_bits(b.row_words(i)) {
            alive_c[j2] = false;
        }
    }
}

fn set_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(k * 64 + b)
        })
    })
}

fn first_one(b: &BinaryMatrix, alive_r: &[bool], alive_c: &[bool]) -> Option<(usize, usize)> {
    let cols: Vec<usize> = (0..b.n()).filter(|&j| alive_c[j]).collect();
    let mask = b.col_mask(&cols);
    (0..b.m()).filter(|&i| alive_r[i]).find_map(|i| {
        b.row_words(i)
            .iter()
            .zip(&mask)
            .enumerate()
            .find(|(_, (w, m))| *w & *m != 0)
            .map(|(k, (w, m))| (i, k * 64 + (w & m).trailing_zeros() as usize))
    })
}

/// [`sparse_zero_block`] on a dense square matrix. The zero block is
/// returned in full, every surviving row and column.
pub fn zero_submatrix_sparse(m: &BinaryMatrix, r: usize) -> Result<SparseOutcome> {
    sparse_zero_block(&WeightedBinaryMatrix::unit(m.clone()), r)
}
