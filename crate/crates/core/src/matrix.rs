//! Dense binary matrices stored as row bitsets.
//!
//! Row and column degrees are computed once at construction; every matrix is
//! immutable afterwards, so values can be shared freely between threads.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::Rational;

/// Upper limit on the number of entries of a materialized dense matrix.
pub const DENSE_CAPACITY: u128 = 1 << 30;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    m: usize,
    n: usize,
    words: usize,
    bits: Vec<u64>,
    ones: u64,
    row_deg: Vec<u64>,
    col_deg: Vec<u64>,
}

/// Density, average degree and maximum degree of a binary matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityStats {
    /// `|M| / (mn)`.
    #[serde(serialize_with = "crate::serialize_ratio")]
    pub p: Rational,
    /// Average degree of the bipartite graph, `2|M| / (m + n)`.
    #[serde(serialize_with = "crate::serialize_ratio")]
    pub d: Rational,
    /// Largest row or column degree.
    pub delta_max: u64,
}

impl BinaryMatrix {
    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let words = n.div_ceil(WORD);
        let mut bits = vec![0u64; m * words];
        for i in 0..m {
            for j in 0..n {
                if f(i, j) {
                    bits[i * words + j / WORD] |= 1 << (j % WORD);
                }
            }
        }
        Self::from_bits(m, n, bits)
    }

    fn from_bits(m: usize, n: usize, bits: Vec<u64>) -> Self {
        let words = n.div_ceil(WORD);
        debug_assert_eq!(bits.len(), m * words);
        let mut row_deg = vec![0u64; m];
        let mut col_deg = vec![0u64; n];
        for i in 0..m {
            let row = &bits[i * words..(i + 1) * words];
            row_deg[i] = row.iter().map(|w| w.count_ones() as u64).sum();
            for (w, &word) in row.iter().enumerate() {
                let mut rest = word;
                while rest != 0 {
                    let b = rest.trailing_zeros() as usize;
                    col_deg[w * WORD + b] += 1;
                    rest &= rest - 1;
                }
            }
        }
        let ones = row_deg.iter().sum();
        Self {
            m,
            n,
            words,
            bits,
            ones,
            row_deg,
            col_deg,
        }
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Self::from_fn(m, n, |_, _| false)
    }

    pub fn all_ones(m: usize, n: usize) -> Self {
        Self::from_fn(m, n, |_, _| true)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    /// Builds a matrix from rows of `0`/`1` characters.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut parsed = Vec::with_capacity(rows.len());
        for (line, row) in rows.iter().enumerate() {
            parsed.push(parse_row(row.as_ref(), n, line + 1)?);
        }
        Ok(Self::from_fn(rows.len(), n, |i, j| parsed[i][j]))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of 1 entries, `|M|`.
    pub fn ones(&self) -> u64 {
        self.ones
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.m && j < self.n);
        self.bits[i * self.words + j / WORD] >> (j % WORD) & 1 == 1
    }

    /// The bitset words of row `i`; bit `j % 64` of word `j / 64` is entry `(i, j)`.
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn row_degrees(&self) -> &[u64] {
        &self.row_deg
    }

    pub fn col_degrees(&self) -> &[u64] {
        &self.col_deg
    }

    pub fn max_degree(&self) -> u64 {
        let r = self.row_deg.iter().copied().max().unwrap_or(0);
        let c = self.col_deg.iter().copied().max().unwrap_or(0);
        r.max(c)
    }

    /// Density `p`. Zero-sized matrices have density 0.
    pub fn density(&self) -> Rational {
        let cells = (self.m * self.n) as i128;
        if cells == 0 {
            return Rational::from_integer(0);
        }
        Rational::new(self.ones as i128, cells)
    }

    pub fn density_stats(&self) -> DensityStats {
        let half_perimeter = (self.m + self.n) as i128;
        let d = if half_perimeter == 0 {
            Rational::from_integer(0)
        } else {
            Rational::new(2 * self.ones as i128, half_perimeter)
        };
        DensityStats {
            p: self.density(),
            d,
            delta_max: self.max_degree(),
        }
    }

    /// Number of 1 entries in `M[X × Y]`.
    pub fn count_in(&self, rows: &[usize], cols: &[usize]) -> u64 {
        let mask = self.col_mask(cols);
        rows.iter()
            .map(|&i| {
                self.row_words(i)
                    .iter()
                    .zip(&mask)
                    .map(|(a, b)| (a & b).count_ones() as u64)
                    .sum::<u64>()
            })
            .sum()
    }

    pub(crate) fn col_mask(&self, cols: &[usize]) -> Vec<u64> {
        let mut mask = vec![0u64; self.words];
        for &j in cols {
            mask[j / WORD] |= 1 << (j % WORD);
        }
        mask
    }

    /// Repeats every row `a` times and every column `b` times, so that entry
    /// `(i, j)` of the result is `M[i / a, j / b]`.
    pub fn blow_up(&self, a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidInput("blow-up factors must be positive".into()));
        }
        let rows = (self.m as u128) * a as u128;
        let cols = (self.n as u128) * b as u128;
        check_dense_capacity(rows, cols)?;
        Ok(Self::from_fn(rows as usize, cols as usize, |i, j| {
            self.get(i / a, j / b)
        }))
    }

    /// The submatrix `M[X × Y]`, with rows and columns in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::InvalidInput("empty row or column selection".into()));
        }
        check_index_set(rows, self.m)?;
        check_index_set(cols, self.n)?;
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j])))
    }

    /// Entrywise `1 - M`, i.e. `J - M`.
    pub fn complement(&self) -> Self {
        Self::from_fn(self.m, self.n, |i, j| !self.get(i, j))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, self.m, |i, j| self.get(j, i))
    }

    /// Whether every entry of `M[X × Y]` equals `value`.
    pub fn is_constant_on(&self, rows: &[usize], cols: &[usize], value: bool) -> bool {
        let target = if value { cols.len() as u64 } else { 0 };
        let mask = self.col_mask(cols);
        rows.iter().all(|&i| {
            let c: u64 = self
                .row_words(i)
                .iter()
                .zip(&mask)
                .map(|(a, b)| (a & b).count_ones() as u64)
                .sum();
            c == target
        })
    }

    /// SHA-256 of the canonical text serialization, hex encoded.
    pub fn hash_hex(&self) -> String {
        hex::encode(Sha256::digest(self.to_string().as_bytes()))
    }

    /// Entries as a row-major vector of integers.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.m)
            .map(|i| (0..self.n).map(|j| self.get(i, j) as i64).collect())
            .collect()
    }
}

pub(crate) fn check_dense_capacity(rows: u128, cols: u128) -> Result<()> {
    let size = rows * cols;
    if size > DENSE_CAPACITY {
        return Err(Error::Capacity {
            what: "dense matrix entries",
            size,
            limit: DENSE_CAPACITY,
            hint: "; use WeightedBinaryMatrix for implicit blow-ups",
        });
    }
    Ok(())
}

pub(crate) fn check_index_set(idx: &[usize], dim: usize) -> Result<()> {
    let mut seen = vec![false; dim];
    for &i in idx {
        if i >= dim {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidInput(format!("duplicate index {i}")));
        }
    }
    Ok(())
}

fn parse_row(row: &str, n: usize, line: usize) -> Result<Vec<bool>> {
    if row.len() != n {
        return Err(Error::Parse {
            line,
            msg: format!("expected {n} characters, found {}", row.len()),
        });
    }
    row.bytes()
        .map(|b| match b {
            b'0' => Ok(false),
            b'1' => Ok(true),
            other => Err(Error::Parse {
                line,
                msg: format!("unexpected character {:?}", other as char),
            }),
        })
        .collect()
}

impl FromStr for BinaryMatrix {
    type Err = Error;

    /// Parses the text format: a header line `m n` followed by `m` lines of
    /// exactly `n` characters from `{0, 1}`.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let dims: Vec<&str> = header.split(' ').collect();
        let parse_dim = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad dimension {t:?}"),
            })
        };
        if dims.len() != 2 {
            return Err(Error::Parse {
                line: 1,
                msg: "header must be `m n`".into(),
            });
        }
        let (m, n) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        if m == 0 || n == 0 {
            return Err(Error::Parse {
                line: 1,
                msg: "dimensions must be positive".into(),
            });
        }
        check_dense_capacity(m as u128, n as u128)?;
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let line = lines.next().ok_or(Error::Parse {
                line: i + 2,
                msg: format!("expected {m} rows, found {i}"),
            })?;
            rows.push(parse_row(line, n, i + 2)?);
        }
        if let Some((k, extra)) = lines.enumerate().find(|(_, l)| !l.is_empty()) {
            return Err(Error::Parse {
                line: m + 2 + k,
                msg: format!("trailing content {extra:?}"),
            });
        }
        Ok(Self::from_fn(m, n, |i, j| rows[i][j]))
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.m, self.n)?;
        let mut line = String::with_capacity(self.n);
        for i in 0..self.m {
            line.clear();
            line.extend((0..self.n).map(|j| if self.get(i, j) { '1' } else { '0' }));
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix({}x{}, ones={})", self.m, self.n, self.ones)?;
        if self.m * self.n <= 256 {
            for i in 0..self.m {
                write!(f, "\n  ")?;
                for j in 0..self.n {
                    write!(f, "{}", self.get(i, j) as u8)?;
                }
            }
        }
        Ok(())
    }
}
