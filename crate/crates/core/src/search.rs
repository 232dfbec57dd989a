//! Rectangle search on implicit matrices.
//!
//! A rectangle of a [`WeightedBinaryMatrix`] is a [`Selection`]: how many
//! copies of each base row and column it keeps. Discrepancies are scaled by
//! the number of cells `R·C` of the implicit matrix so that all arithmetic is
//! exact: `value = |M[X×Y]|·R·C − |M|·|X|·|Y|`.

use rand::Rng;
use rayon::prelude::*;

use crate::oracle::{Rectangle, Sign};
use crate::rng::{stream, Purpose};
use crate::weighted::WeightedBinaryMatrix;
use crate::{BinaryMatrix, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
    /// Discrepancy times the number of cells of the implicit matrix.
    pub value: i128,
}

impl Selection {
    pub fn new(w: &WeightedBinaryMatrix, rows: Vec<u64>, cols: Vec<u64>) -> Self {
        let value = scaled_disc(w, &rows, &cols);
        Self { rows, cols, value }
    }

    pub fn empty(w: &WeightedBinaryMatrix) -> Self {
        Self::new(w, vec![0; w.base().m()], vec![0; w.base().n()])
    }

    pub fn row_total(&self) -> u64 {
        self.rows.iter().sum()
    }

    pub fn col_total(&self) -> u64 {
        self.cols.iter().sum()
    }

    /// The unscaled discrepancy.
    pub fn disc(&self, w: &WeightedBinaryMatrix) -> Rational {
        Rational::new(self.value, cells(w))
    }

    /// Reads the counts of a unit-weight matrix as index sets.
    pub fn to_rectangle(&self, w: &WeightedBinaryMatrix) -> Rectangle {
        let idx = |c: &[u64]| (0..c.len()).filter(|&i| c[i] > 0).collect();
        Rectangle {
            rows: idx(&self.rows),
            cols: idx(&self.cols),
            value: self.disc(w),
        }
    }

    pub fn from_rectangle(w: &WeightedBinaryMatrix, r: &Rectangle) -> Self {
        let mut rows = vec![0; w.base().m()];
        let mut cols = vec![0; w.base().n()];
        r.rows.iter().for_each(|&i| rows[i] = w.row_mult()[i]);
        r.cols.iter().for_each(|&j| cols[j] = w.col_mult()[j]);
        Self::new(w, rows, cols)
    }
}

fn cells(w: &WeightedBinaryMatrix) -> i128 {
    w.rows() as i128 * w.cols() as i128
}

/// `|M[X×Y]|·R·C − |M|·|X|·|Y|` for the selection given by copy counts.
pub fn scaled_disc(w: &WeightedBinaryMatrix, row_counts: &[u64], col_counts: &[u64]) -> i128 {
    let inside = w.count_in(row_counts, col_counts) as i128;
    let x: u64 = row_counts.iter().sum();
    let y: u64 = col_counts.iter().sum();
    inside * cells(w) - w.ones() as i128 * x as i128 * y as i128
}

/// Scaled change in discrepancy from adding one copy of each base row.
pub fn row_marginals(w: &WeightedBinaryMatrix, col_counts: &[u64]) -> Vec<i128> {
    let y: u64 = col_counts.iter().sum();
    let c = cells(w);
    let base = w.ones() as i128 * y as i128;
    w.row_sums(col_counts)
        .into_iter()
        .map(|s| s as i128 * c - base)
        .collect()
}

pub fn col_marginals(w: &WeightedBinaryMatrix, row_counts: &[u64]) -> Vec<i128> {
    let x: u64 = row_counts.iter().sum();
    let c = cells(w);
    let base = w.ones() as i128 * x as i128;
    w.col_sums(row_counts)
        .into_iter()
        .map(|s| s as i128 * c - base)
        .collect()
}

/// Takes `size` copies in total, cheapest marginal first (lowest index on
/// ties), never more than `mult[i]` of class `i`. Optimal for fixed other side.
fn fill_sized(marginals: &[i128], mult: &[u64], size: u64) -> Vec<u64> {
    let mut order: Vec<usize> = (0..marginals.len()).collect();
    order.sort_by_key(|&i| (marginals[i], i));
    let mut out = vec![0; mult.len()];
    let mut left = size;
    for i in order {
        if left == 0 {
            break;
        }
        let take = mult[i].min(left);
        out[i] = take;
        left -= take;
    }
    out
}

/// All copies of every class whose marginal, in the direction of `sign`, is
/// strictly positive. Optimal for fixed other side.
fn fill_free(marginals: &[i128], mult: &[u64], sign: Sign) -> Vec<u64> {
    marginals
        .iter()
        .zip(mult)
        .map(|(&g, &w)| match sign {
            Sign::Plus if g > 0 => w,
            Sign::Minus if g < 0 => w,
            _ => 0,
        })
        .collect()
}

/// Grows or shrinks the rows of `sel` to `⌊R/2⌋` copies, adding the copies
/// with the smallest marginal discrepancy or removing those with the largest,
/// then does the same for the columns against the new rows.
pub fn adjust_to_half(w: &WeightedBinaryMatrix, sel: &Selection) -> Selection {
    let half_r = w.rows() / 2;
    let half_c = w.cols() / 2;
    let rows = adjust_side(&row_marginals(w, &sel.cols), &sel.rows, w.row_mult(), half_r);
    let cols = adjust_side(&col_marginals(w, &rows), &sel.cols, w.col_mult(), half_c);
    Selection::new(w, rows, cols)
}

fn adjust_side(marginals: &[i128], current: &[u64], mult: &[u64], target: u64) -> Vec<u64> {
    let mut out = current.to_vec();
    let total: u64 = current.iter().sum();
    let mut order: Vec<usize> = (0..marginals.len()).collect();
    if total < target {
        order.sort_by_key(|&i| (marginals[i], i));
        let mut left = target - total;
        for i in order {
            let take = (mult[i] - out[i]).min(left);
            out[i] += take;
            left -= take;
            if left == 0 {
                break;
            }
        }
    } else if total > target {
        order.sort_by_key(|&i| (std::cmp::Reverse(marginals[i]), i));
        let mut left = total - target;
        for i in order {
            let take = out[i].min(left);
            out[i] -= take;
            left -= take;
            if left == 0 {
                break;
            }
        }
    }
    out
}

/// Alternating exact best responses among half-sized rectangles, minimizing
/// discrepancy, until the value stops improving.
pub fn best_response_half(w: &WeightedBinaryMatrix, start: &Selection) -> Selection {
    let half_r = w.rows() / 2;
    let half_c = w.cols() / 2;
    let mut cur = start.clone();
    loop {
        let rows = fill_sized(&row_marginals(w, &cur.cols), w.row_mult(), half_r);
        let cols = fill_sized(&col_marginals(w, &rows), w.col_mult(), half_c);
        let next = Selection::new(w, rows, cols);
        if next.value >= cur.value && cur.row_total() == half_r && cur.col_total() == half_c {
            return cur;
        }
        cur = next;
    }
}

/// Moves `swaps` random copies out of the selection and the same number of
/// random unselected copies in, on both sides.
fn kick<R: Rng>(w: &WeightedBinaryMatrix, sel: &Selection, swaps: u64, rng: &mut R) -> Selection {
    let mut rows = sel.rows.clone();
    let mut cols = sel.cols.clone();
    for _ in 0..swaps {
        swap_one(&mut rows, w.row_mult(), rng);
        swap_one(&mut cols, w.col_mult(), rng);
    }
    Selection::new(w, rows, cols)
}

fn swap_one<R: Rng>(counts: &mut [u64], mult: &[u64], rng: &mut R) {
    let inside: u64 = counts.iter().sum();
    let total: u64 = mult.iter().sum();
    if inside == 0 || inside == total {
        return;
    }
    let pick = |weights: &mut dyn Iterator<Item = u64>, mut t: u64| -> usize {
        for (i, w) in weights.enumerate() {
            if t < w {
                return i;
            }
            t -= w;
        }
        unreachable!("target below total weight")
    };
    let out = pick(&mut counts.iter().copied(), rng.random_range(0..inside));
    let into = pick(
        &mut counts.iter().zip(mult).map(|(c, m)| m - c),
        rng.random_range(0..total - inside),
    );
    counts[out] -= 1;
    counts[into] += 1;
}

/// Randomized local search among half-sized rectangles: best responses
/// interleaved with random kicks, stopping once the value is negative or
/// `budget` swaps have been spent.
pub fn local_search_half(w: &WeightedBinaryMatrix, start: &Selection, budget: u64, seed: u64, step: u64) -> Selection {
    let mut best = best_response_half(w, start);
    let mut rng = stream(seed, Purpose::LocalSearch, step, 0);
    let mut spent = 0u64;
    let mut round = 0u64;
    while best.value >= 0 && spent < budget {
        let swaps = 1 + round % 4;
        spent += 2 * swaps;
        round += 1;
        let cand = best_response_half(w, &kick(w, &best, swaps, &mut rng));
        if cand.value < best.value {
            best = cand;
        }
    }
    best
}

/// Unconstrained alternating best responses from `trials` random starts.
/// Returns the rectangle with the largest `sign`-directed discrepancy found;
/// ties go to the earliest trial.
pub fn alternating(w: &WeightedBinaryMatrix, sign: Sign, trials: u64, seed: u64) -> Selection {
    let runs: Vec<Selection> = (0..trials.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, Purpose::Heuristic, 0, t);
            let rows: Vec<u64> = w
                .row_mult()
                .iter()
                .map(|&m| if rng.random_bool(0.5) { m } else { 0 })
                .collect();
            let mut cur = Selection::new(w, rows.clone(), fill_free(&col_marginals(w, &rows), w.col_mult(), sign));
            loop {
                let rows = fill_free(&row_marginals(w, &cur.cols), w.row_mult(), sign);
                let cols = fill_free(&col_marginals(w, &rows), w.col_mult(), sign);
                let next = Selection::new(w, rows, cols);
                if directed(next.value, sign) <= directed(cur.value, sign) {
                    break cur;
                }
                cur = next;
            }
        })
        .collect();
    let mut best = Selection::empty(w);
    for r in runs {
        if directed(r.value, sign) > directed(best.value, sign) {
            best = r;
        }
    }
    best
}

fn directed(v: i128, sign: Sign) -> i128 {
    match sign {
        Sign::Plus => v,
        Sign::Minus => -v,
    }
}

/// Heuristic `disc⁺` / `disc⁻` rectangle of a dense matrix of any size.
pub fn heuristic_rect(m: &BinaryMatrix, sign: Sign, trials: u64, seed: u64) -> Rectangle {
    let w = WeightedBinaryMatrix::unit(m.clone());
    alternating(&w, sign, trials, seed).to_rectangle(&w)
}
