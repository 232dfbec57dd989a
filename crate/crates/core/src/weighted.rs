//! Implicit blow-ups.
//!
//! A [`WeightedBinaryMatrix`] stands for the matrix obtained from `base` by
//! repeating row `i` exactly `row_mult[i]` times and column `j` exactly
//! `col_mult[j]` times. Degrees, densities and submatrix selections are all
//! computed on the base matrix with the multiplicities as weights, so the
//! expanded matrix is never stored.

use std::collections::HashMap;

use num_integer::Integer;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::{check_dense_capacity, BinaryMatrix, DensityStats};
use crate::Rational;

/// Largest allowed number of cells `rows * cols` of the implicit matrix.
/// Keeps every scaled discrepancy numerator inside `i128`.
pub const IMPLICIT_CAPACITY: u128 = 1 << 62;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedBinaryMatrix {
    base: BinaryMatrix,
    row_mult: Vec<u64>,
    col_mult: Vec<u64>,
    rows: u64,
    cols: u64,
    ones: u64,
    row_deg: Vec<u64>,
    col_deg: Vec<u64>,
}

/// Result of merging identical rows and columns: the weighted matrix plus,
/// for each class, the original indices it stands for (ascending).
#[derive(Clone, Debug)]
pub struct Compressed {
    pub matrix: WeightedBinaryMatrix,
    pub row_classes: Vec<Vec<usize>>,
    pub col_classes: Vec<Vec<usize>>,
}

impl WeightedBinaryMatrix {
    pub fn new(base: BinaryMatrix, row_mult: Vec<u64>, col_mult: Vec<u64>) -> Result<Self> {
        if row_mult.len() != base.m() || col_mult.len() != base.n() {
            return Err(Error::InvalidInput(
                "multiplicity vectors must match the base dimensions".into(),
            ));
        }
        if row_mult.iter().chain(&col_mult).any(|&w| w == 0) {
            return Err(Error::InvalidInput("multiplicities must be positive".into()));
        }
        let rows: u128 = row_mult.iter().map(|&w| w as u128).sum();
        let cols: u128 = col_mult.iter().map(|&w| w as u128).sum();
        if rows * cols > IMPLICIT_CAPACITY {
            return Err(Error::Capacity {
                what: "implicit matrix cells",
                size: rows * cols,
                limit: IMPLICIT_CAPACITY,
                hint: "",
            });
        }
        let mut row_deg = vec![0u64; base.m()];
        let mut col_deg = vec![0u64; base.n()];
        let mut ones = 0u64;
        for (i, deg) in row_deg.iter_mut().enumerate() {
            for (j, cd) in col_deg.iter_mut().enumerate() {
                if base.get(i, j) {
                    *deg += col_mult[j];
                    *cd += row_mult[i];
                    ones += row_mult[i] * col_mult[j];
                }
            }
        }
        Ok(Self {
            base,
            row_mult,
            col_mult,
            rows: rows as u64,
            cols: cols as u64,
            ones,
            row_deg,
            col_deg,
        })
    }

    /// All multiplicities equal to one.
    pub fn unit(base: BinaryMatrix) -> Self {
        let (m, n) = (base.m(), base.n());
        Self::new(base, vec![1; m], vec![1; n]).expect("unit weights are always valid")
    }

    /// Squares a rectangular matrix: every row is repeated `L / m` times and
    /// every column `L / n` times with `L = lcm(m, n)`.
    pub fn square(base: BinaryMatrix) -> Result<Self> {
        let (m, n) = (base.m() as u64, base.n() as u64);
        let l = m.lcm(&n);
        let (rm, cm) = (l / m, l / n);
        Self::new(base, vec![rm; m as usize], vec![cm; n as usize])
    }

    /// Merges identical rows and identical columns into weighted classes.
    /// Classes are ordered by their lowest original index.
    pub fn compress(m: &BinaryMatrix) -> Compressed {
        let row_classes = classes((0..m.m()).map(|i| m.row_words(i).to_vec()));
        let t = m.transpose();
        let col_classes = classes((0..t.m()).map(|j| t.row_words(j).to_vec()));
        let reps_r: Vec<usize> = row_classes.iter().map(|c| c[0]).collect();
        let reps_c: Vec<usize> = col_classes.iter().map(|c| c[0]).collect();
        let base = m
            .submatrix(&reps_r, &reps_c)
            .expect("representatives are valid indices");
        let rm = row_classes.iter().map(|c| c.len() as u64).collect();
        let cm = col_classes.iter().map(|c| c.len() as u64).collect();
        Compressed {
            matrix: Self::new(base, rm, cm).expect("class sizes are positive"),
            row_classes,
            col_classes,
        }
    }

    /// Merges identical base rows and columns, adding their multiplicities.
    /// Classes list base indices and are ordered by their lowest one.
    pub fn merge_identical(&self) -> Compressed {
        let c = Self::compress(&self.base);
        let weight = |classes: &[Vec<usize>], mult: &[u64]| -> Vec<u64> {
            classes.iter().map(|cls| cls.iter().map(|&i| mult[i]).sum()).collect()
        };
        let rm = weight(&c.row_classes, &self.row_mult);
        let cm = weight(&c.col_classes, &self.col_mult);
        Compressed {
            matrix: Self::new(c.matrix.base, rm, cm).expect("merged weights are positive"),
            row_classes: c.row_classes,
            col_classes: c.col_classes,
        }
    }

    pub fn base(&self) -> &BinaryMatrix {
        &self.base
    }

    pub fn row_mult(&self) -> &[u64] {
        &self.row_mult
    }

    pub fn col_mult(&self) -> &[u64] {
        &self.col_mult
    }

    /// Effective number of rows, `Σ row_mult`.
    pub fn rows(&self) -> u64 {
        self.rows
    }

    /// Effective number of columns, `Σ col_mult`.
    pub fn cols(&self) -> u64 {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Number of 1 entries of the implicit matrix.
    pub fn ones(&self) -> u64 {
        self.ones
    }

    /// Degree of every copy of base row `i`.
    pub fn row_degrees(&self) -> &[u64] {
        &self.row_deg
    }

    pub fn col_degrees(&self) -> &[u64] {
        &self.col_deg
    }

    pub fn max_degree(&self) -> u64 {
        self.row_deg.iter().chain(&self.col_deg).copied().max().unwrap_or(0)
    }

    pub fn density(&self) -> Rational {
        Rational::new(self.ones as i128, self.rows as i128 * self.cols as i128)
    }

    pub fn density_stats(&self) -> DensityStats {
        DensityStats {
            p: self.density(),
            d: Rational::new(2 * self.ones as i128, (self.rows + self.cols) as i128),
            delta_max: self.max_degree(),
        }
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    /// Expands into an explicit dense matrix, class by class in base order.
    pub fn materialize(&self) -> Result<BinaryMatrix> {
        check_dense_capacity(self.rows as u128, self.cols as u128)?;
        let expand = |mult: &[u64]| -> Vec<usize> {
            mult.iter()
                .enumerate()
                .flat_map(|(i, &w)| std::iter::repeat_n(i, w as usize))
                .collect()
        };
        let (ri, ci) = (expand(&self.row_mult), expand(&self.col_mult));
        Ok(BinaryMatrix::from_fn(ri.len(), ci.len(), |i, j| {
            self.base.get(ri[i], ci[j])
        }))
    }

    /// For every base row `i`, `Σ_j B[i, j] · col_counts[j]`.
    pub fn row_sums(&self, col_counts: &[u64]) -> Vec<u64> {
        (0..self.base.m())
            .map(|i| {
                let words = self.base.row_words(i);
                let mut s = 0u64;
                for (w, &word) in words.iter().enumerate() {
                    let mut rest = word;
                    while rest != 0 {
                        let b = rest.trailing_zeros() as usize;
                        s += col_counts[w * 64 + b];
                        rest &= rest - 1;
                    }
                }
                s
            })
            .collect()
    }

    /// For every base column `j`, `Σ_i B[i, j] · row_counts[i]`.
    pub fn col_sums(&self, row_counts: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.base.n()];
        for (i, &c) in row_counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (w, &word) in self.base.row_words(i).iter().enumerate() {
                let mut rest = word;
                while rest != 0 {
                    let b = rest.trailing_zeros() as usize;
                    out[w * 64 + b] += c;
                    rest &= rest - 1;
                }
            }
        }
        out
    }

    /// Number of ones in the implicit submatrix that keeps `row_counts[i]`
    /// copies of row `i` and `col_counts[j]` copies of column `j`.
    pub fn count_in(&self, row_counts: &[u64], col_counts: &[u64]) -> u64 {
        self.row_sums(col_counts)
            .iter()
            .zip(row_counts)
            .map(|(s, c)| s * c)
            .sum()
    }

    /// Keeps `row_counts[i] <= row_mult[i]` copies of each row and likewise for
    /// columns. Classes with count zero are dropped; the returned index
    /// vectors list the surviving base rows and columns.
    pub fn select(&self, row_counts: &[u64], col_counts: &[u64]) -> Result<(Self, Vec<usize>, Vec<usize>)> {
        let keep = |counts: &[u64], mult: &[u64]| -> Result<Vec<usize>> {
            if counts.len() != mult.len() {
                return Err(Error::InvalidInput("count vector has wrong length".into()));
            }
            if counts.iter().zip(mult).any(|(c, w)| c > w) {
                return Err(Error::InvalidInput("count exceeds multiplicity".into()));
            }
            Ok((0..counts.len()).filter(|&i| counts[i] > 0).collect())
        };
        let kr = keep(row_counts, &self.row_mult)?;
        let kc = keep(col_counts, &self.col_mult)?;
        if kr.is_empty() || kc.is_empty() {
            return Err(Error::InvalidInput("empty row or column selection".into()));
        }
        let base = self.base.submatrix(&kr, &kc)?;
        let rm = kr.iter().map(|&i| row_counts[i]).collect();
        let cm = kc.iter().map(|&j| col_counts[j]).collect();
        Ok((Self::new(base, rm, cm)?, kr, kc))
    }

    /// Hash of the base matrix and multiplicities.
    pub fn hash_hex(&self) -> String {
        if self.row_mult.iter().chain(&self.col_mult).all(|&w| w == 1) {
            return self.base.hash_hex();
        }
        let mut h = Sha256::new();
        h.update(self.base.to_string().as_bytes());
        for w in self.row_mult.iter().chain(&self.col_mult) {
            h.update(w.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

impl From<BinaryMatrix> for WeightedBinaryMatrix {
    fn from(m: BinaryMatrix) -> Self {
        Self::unit(m)
    }
}

fn classes(keys: impl Iterator<Item = Vec<u64>>) -> Vec<Vec<usize>> {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, key) in keys.enumerate() {
        let next = out.len();
        let c = *index.entry(key).or_insert(next);
        if c == next {
            out.push(Vec::new());
        }
        out[c].push(i);
    }
    out
}
