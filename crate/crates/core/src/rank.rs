//! Exact rank over the rationals.
//!
//! Fraction-free (Bareiss) elimination keeps every intermediate entry equal
//! to a minor of the input, so divisions are exact. The elimination runs on
//! `i128` while it can and restarts on big integers when a minor overflows.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::matrix::BinaryMatrix;

/// Order in which columns are scanned and pivot rows chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    /// Columns left to right, first nonzero row below the current one.
    Forward,
    /// Columns right to left, last nonzero row.
    Reverse,
}

impl BinaryMatrix {
    /// Exact rank over the reals. Duplicate rows and columns are removed
    /// first; they never change the rank.
    pub fn rank(&self) -> usize {
        self.rank_with(PivotOrder::Forward)
    }

    pub fn rank_with(&self, order: PivotOrder) -> usize {
        let rows = dedup_rows(self);
        integer_rank(&rows, order)
    }
}

fn dedup_rows(m: &BinaryMatrix) -> Vec<Vec<i64>> {
    let mut row_keys: Vec<&[u64]> = (0..m.m()).map(|i| m.row_words(i)).collect();
    row_keys.sort_unstable();
    row_keys.dedup();
    let t = m.transpose();
    let mut col_keys: Vec<usize> = (0..t.m()).collect();
    col_keys.sort_unstable_by(|&a, &b| t.row_words(a).cmp(t.row_words(b)));
    col_keys.dedup_by(|a, b| t.row_words(*a) == t.row_words(*b));
    row_keys
        .iter()
        .map(|words| {
            col_keys
                .iter()
                .map(|&j| (words[j / 64] >> (j % 64) & 1) as i64)
                .collect()
        })
        .filter(|row: &Vec<i64>| row.iter().any(|&x| x != 0))
        .collect()
}

/// Rank of an integer matrix given as rows.
pub fn integer_rank(rows: &[Vec<i64>], order: PivotOrder) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let small: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match bareiss_i128(small, order) {
        Some(r) => r,
        None => {
            let big = rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            bareiss_big(big, order)
        }
    }
}

fn column_order(n: usize, order: PivotOrder) -> Vec<usize> {
    match order {
        PivotOrder::Forward => (0..n).collect(),
        PivotOrder::Reverse => (0..n).rev().collect(),
    }
}

fn find_pivot<T>(a: &[Vec<T>], from: usize, col: usize, order: PivotOrder, nz: impl Fn(&T) -> bool) -> Option<usize> {
    match order {
        PivotOrder::Forward => (from..a.len()).find(|&i| nz(&a[i][col])),
        PivotOrder::Reverse => (from..a.len()).rev().find(|&i| nz(&a[i][col])),
    }
}

fn bareiss_i128(mut a: Vec<Vec<i128>>, order: PivotOrder) -> Option<usize> {
    let m = a.len();
    let cols = column_order(a[0].len(), order);
    let mut prev: i128 = 1;
    let mut rank = 0;
    for (k, &c) in cols.iter().enumerate() {
        if rank == m {
            break;
        }
        let Some(p) = find_pivot(&a, rank, c, order, |x| *x != 0) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c];
        let (top, rest) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            let lead = row[c];
            for &j in &cols[k + 1..] {
                let v = pivot.checked_mul(row[j])?.checked_sub(lead.checked_mul(prow[j])?)?;
                debug_assert_eq!(v % prev, 0);
                row[j] = v / prev;
            }
            row[c] = 0;
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>, order: PivotOrder) -> usize {
    let m = a.len();
    let cols = column_order(a[0].len(), order);
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for (k, &c) in cols.iter().enumerate() {
        if rank == m {
            break;
        }
        let Some(p) = find_pivot(&a, rank, c, order, |x| !x.is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        let (top, rest) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for &j in &cols[k + 1..] {
                let v = &pivot * &row[j] - &lead * &prow[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}
