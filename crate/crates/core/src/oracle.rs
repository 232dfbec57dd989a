//! Exact discrepancy by subset enumeration.
//!
//! For a fixed row set `X` the discrepancy `disc(X, Y)` is additive over the
//! columns of `Y`, so the best `Y` is read off the column scores
//! `s_j(X) = Σ_{i∈X} (M_ij − p)`. Enumerating `X` over the smaller side makes
//! every routine here exact at cost `O(2^min(m,n) · mn)`.
//!
//! All arithmetic is done on integers scaled by `mn`, which is the
//! denominator of `p`. Ties are broken towards the lexicographically smallest
//! row set (compared as sorted index lists) and, inside a row set, towards the
//! lowest column index.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;
use crate::Rational;

pub const DEFAULT_ORACLE_LIMIT: usize = 26;

/// Hard ceiling on the enumerated dimension regardless of configuration.
const MAX_ENUMERATION: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A combinatorial rectangle `X × Y` with its exact discrepancy
/// `|M[X×Y]| − p|X||Y|`. Index lists are sorted and zero-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rectangle {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: Rational,
}

/// Wire form of a rectangle certificate.
#[derive(Clone, Debug, Serialize)]
pub struct RectangleJson {
    pub sign: Sign,
    #[serde(rename = "X")]
    pub rows: Vec<usize>,
    #[serde(rename = "Y")]
    pub cols: Vec<usize>,
    pub value_num: i128,
    pub value_den: i128,
}

impl Rectangle {
    pub fn empty() -> Self {
        Self {
            rows: Vec::new(),
            cols: Vec::new(),
            value: Rational::from_integer(0),
        }
    }

    pub fn to_json(&self, sign: Sign) -> RectangleJson {
        RectangleJson {
            sign,
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            value_num: *self.value.numer(),
            value_den: *self.value.denom(),
        }
    }

    /// Recomputes the value from the matrix; used to validate certificates.
    pub fn verify(&self, m: &BinaryMatrix) -> Result<bool> {
        Ok(disc_value(m, &self.rows, &self.cols)? == self.value)
    }
}

/// A pair of sign vectors with the bilinear value `xᵀ(M − pJ)y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignVectorPair {
    pub x: Vec<i8>,
    pub y: Vec<i8>,
    #[serde(serialize_with = "crate::serialize_ratio")]
    pub value: Rational,
}

impl SignVectorPair {
    pub fn recompute(&self, m: &BinaryMatrix) -> Rational {
        bilinear_value(m, &self.x, &self.y)
    }
}

/// `disc(X, Y) = |M[X × Y]| − p|X||Y|`, exactly. Empty sets are allowed.
pub fn disc_value(m: &BinaryMatrix, rows: &[usize], cols: &[usize]) -> Result<Rational> {
    crate::matrix::check_index_set(rows, m.m())?;
    crate::matrix::check_index_set(cols, m.n())?;
    let cells = (m.m() * m.n()) as i128;
    let count = m.count_in(rows, cols) as i128;
    let num = cells * count - m.ones() as i128 * rows.len() as i128 * cols.len() as i128;
    Ok(Rational::new(num, cells))
}

/// `xᵀ(M − pJ)y` for arbitrary integer vectors.
pub fn bilinear_value(m: &BinaryMatrix, x: &[i8], y: &[i8]) -> Rational {
    assert_eq!(x.len(), m.m());
    assert_eq!(y.len(), m.n());
    let cells = (m.m() * m.n()) as i128;
    let sx: i128 = x.iter().map(|&v| v as i128).sum();
    let sy: i128 = y.iter().map(|&v| v as i128).sum();
    let mut acc = 0i128;
    for (i, &xi) in x.iter().enumerate() {
        for (j, &yj) in y.iter().enumerate() {
            if m.get(i, j) {
                acc += xi as i128 * yj as i128;
            }
        }
    }
    Rational::new(cells * acc - m.ones() as i128 * sx * sy, cells)
}

/// Column-major view of the enumerated side: one row bitmask per column.
struct Enumeration {
    /// `true` when the input was transposed so rows are the smaller side.
    transposed: bool,
    k: usize,
    cols: Vec<u64>,
    col_deg: Vec<i64>,
    cells: i64,
    ones: i64,
}

impl Enumeration {
    fn new(m: &BinaryMatrix, limit: usize) -> Result<Self> {
        let transposed = m.m() > m.n();
        let k = m.m().min(m.n());
        let limit = limit.min(MAX_ENUMERATION);
        if k > limit {
            return Err(Error::Capacity {
                what: "oracle dimension",
                size: k as u128,
                limit: limit as u128,
                hint: "; use the heuristic or spectral path",
            });
        }
        let other = m.m().max(m.n());
        let get = |row: usize, col: usize| {
            if transposed {
                m.get(col, row)
            } else {
                m.get(row, col)
            }
        };
        let cols: Vec<u64> = (0..other)
            .map(|j| (0..k).filter(|&i| get(i, j)).fold(0u64, |acc, i| acc | 1 << i))
            .collect();
        let col_deg = cols.iter().map(|c| c.count_ones() as i64).collect();
        Ok(Self {
            transposed,
            k,
            cols,
            col_deg,
            cells: (m.m() * m.n()) as i64,
            ones: m.ones() as i64,
        })
    }

    /// Scaled column scores `mn · s_j(X)` for the row set `mask`.
    #[inline]
    fn scores(&self, mask: u64, out: &mut Vec<i64>) {
        let size = mask.count_ones() as i64;
        let base = self.ones * size;
        out.clear();
        out.extend(
            self.cols
                .iter()
                .map(|&c| self.cells * (c & mask).count_ones() as i64 - base),
        );
    }

    fn blocks(&self) -> Vec<(u64, u64)> {
        let total = 1u64 << self.k;
        let nblocks = total.min(1024);
        let step = total / nblocks;
        (0..nblocks).map(|b| (b * step, (b + 1) * step)).collect()
    }

    fn mask_to_vec(mask: u64) -> Vec<usize> {
        (0..64).filter(|i| mask >> i & 1 == 1).collect()
    }

    fn finish(&self, enumerated: Vec<usize>, other: Vec<usize>, num: i64) -> Rectangle {
        let value = Rational::new(num as i128, self.cells as i128);
        let (rows, cols) = if self.transposed {
            (other, enumerated)
        } else {
            (enumerated, other)
        };
        Rectangle { rows, cols, value }
    }
}

/// True when `a` precedes `b` as sorted index lists.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let t = diff.trailing_zeros();
    let above = if t == 63 { 0 } else { !0u64 << (t + 1) };
    if a >> t & 1 == 1 {
        b & above != 0
    } else {
        a & above == 0
    }
}

#[derive(Clone, Copy)]
struct Best {
    value: i64,
    mask: u64,
}

impl Best {
    fn better(self, other: Best) -> Best {
        if other.value > self.value || (other.value == self.value && lex_less(other.mask, self.mask)) {
            other
        } else {
            self
        }
    }
}

fn search(blocks: &[(u64, u64)], eval: impl Fn(u64, &mut Vec<i64>) -> Option<i64> + Sync) -> Option<Best> {
    blocks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut scratch = Vec::new();
            let mut best: Option<Best> = None;
            for mask in lo..hi {
                if let Some(value) = eval(mask, &mut scratch) {
                    let cand = Best { value, mask };
                    best = Some(match best {
                        None => cand,
                        Some(b) => b.better(cand),
                    });
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .reduce(Best::better)
}

/// The rectangle maximizing `disc(X, Y)` (sign `+`) or minimizing it (sign `−`).
/// `disc⁺(M)` is the returned value, `disc⁻(M)` its negation.
pub fn best_rect(m: &BinaryMatrix, sign: Sign, limit: usize) -> Result<Rectangle> {
    let e = Enumeration::new(m, limit)?;
    let f = sign.factor();
    let best = search(&e.blocks(), |mask, scratch| {
        e.scores(mask, scratch);
        Some(scratch.iter().map(|&s| (f * s).max(0)).sum())
    })
    .expect("at least the empty set is enumerated");
    let mut scratch = Vec::new();
    e.scores(best.mask, &mut scratch);
    let other: Vec<usize> = (0..scratch.len()).filter(|&j| f * scratch[j] > 0).collect();
    Ok(e.finish(Enumeration::mask_to_vec(best.mask), other, f * best.value))
}

/// `disc⁺(M)`.
pub fn disc_plus(m: &BinaryMatrix, limit: usize) -> Result<Rational> {
    Ok(best_rect(m, Sign::Plus, limit)?.value)
}

/// `disc⁻(M)`, returned as a nonnegative number.
pub fn disc_minus(m: &BinaryMatrix, limit: usize) -> Result<Rational> {
    Ok(-best_rect(m, Sign::Minus, limit)?.value)
}

/// `disc(M) = max(disc⁺, disc⁻)`.
pub fn disc(m: &BinaryMatrix, limit: usize) -> Result<Rational> {
    Ok(disc_plus(m, limit)?.max(disc_minus(m, limit)?))
}

/// Best rectangle with `|X| = m/2` and `|Y| = n/2`. Both dimensions must be even.
pub fn best_half_rect(m: &BinaryMatrix, sign: Sign, limit: usize) -> Result<Rectangle> {
    if !m.m().is_multiple_of(2) || !m.n().is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "half rectangles need even dimensions, got {}x{}",
            m.m(),
            m.n()
        )));
    }
    best_sized_rect(m, sign, m.m() / 2, m.n() / 2, limit)
}

/// Best rectangle with exactly `row_size` rows and `col_size` columns.
pub fn best_sized_rect(
    m: &BinaryMatrix,
    sign: Sign,
    row_size: usize,
    col_size: usize,
    limit: usize,
) -> Result<Rectangle> {
    if row_size > m.m() || col_size > m.n() {
        return Err(Error::InvalidInput("rectangle size exceeds matrix".into()));
    }
    let e = Enumeration::new(m, limit)?;
    let (k_enum, k_other) = if e.transposed {
        (col_size, row_size)
    } else {
        (row_size, col_size)
    };
    let f = sign.factor();
    let best = search(&e.blocks(), |mask, scratch| {
        if mask.count_ones() as usize != k_enum {
            return None;
        }
        e.scores(mask, scratch);
        for s in scratch.iter_mut() {
            *s *= f;
        }
        Some(top_sum(scratch, k_other))
    })
    .expect("a subset of the requested size exists");
    let mut scratch = Vec::new();
    e.scores(best.mask, &mut scratch);
    let mut order: Vec<usize> = (0..scratch.len()).collect();
    order.sort_by_key(|&j| (-f * scratch[j], j));
    let mut other = order[..k_other].to_vec();
    other.sort_unstable();
    Ok(e.finish(Enumeration::mask_to_vec(best.mask), other, f * best.value))
}

fn top_sum(values: &mut [i64], k: usize) -> i64 {
    if k == 0 {
        return 0;
    }
    if k < values.len() {
        values.select_nth_unstable_by(k - 1, |a, b| b.cmp(a));
    }
    values[..k].iter().sum()
}

/// `disc₀⁺(M) = max xᵀ(M − pJ)y` over `x ∈ [−1,1]^m`, `y ∈ [−1,1]^n`.
/// The maximum sits at a vertex; for fixed `x` the best `y_j` is the sign of
/// the column score (`+1` on ties).
pub fn disc0_plus(m: &BinaryMatrix, limit: usize) -> Result<SignVectorPair> {
    let e = Enumeration::new(m, limit)?;
    let k = e.k as i64;
    let score = |mask: u64, j: usize, c: u64| -> i64 {
        let plus = mask.count_ones() as i64;
        let inside = (c & mask).count_ones() as i64;
        e.cells * (2 * inside - e.col_deg[j]) - e.ones * (2 * plus - k)
    };
    let best = search(&e.blocks(), |mask, _| {
        Some(e.cols.iter().enumerate().map(|(j, &c)| score(mask, j, c).abs()).sum())
    })
    .expect("nonempty enumeration");
    let enumerated: Vec<i8> = (0..e.k).map(|i| if best.mask >> i & 1 == 1 { 1 } else { -1 }).collect();
    let other: Vec<i8> = e
        .cols
        .iter()
        .enumerate()
        .map(|(j, &c)| if score(best.mask, j, c) >= 0 { 1 } else { -1 })
        .collect();
    let (x, y) = if e.transposed {
        (other, enumerated)
    } else {
        (enumerated, other)
    };
    Ok(SignVectorPair {
        x,
        y,
        value: Rational::new(best.value as i128, e.cells as i128),
    })
}
