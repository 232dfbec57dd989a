//! Monochromatic rectangles in low-rank binary matrices by density decrement.
//!
//! Starting from a square matrix of density `p ≤ 1/2` and rank `r`, each step
//! keeps half of the rows and half of the columns while strictly lowering
//! the density. Once `p < 1/(8r)` the sparse procedure in [`sparse`] finds an
//! all-zero block covering a quarter of what is left.
//!
//! Rectangular inputs are squared by repeating rows and columns up to
//! `lcm(m, n)`, and dense inputs are complemented, all without expanding the
//! matrix: the loop runs on a [`WeightedBinaryMatrix`] whose identical rows
//! and columns are merged into classes.

mod sparse;
mod step;

pub use sparse::{sparse_zero_block, zero_submatrix_sparse, PermutationWitness, SparseOutcome};
pub use step::{
    decrement_step, decrement_step_weighted, gram_vectors, round_selection, round_to_rect, DecrementConfig,
    GramVectors, StepOutcome, Strategy,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::search::Selection;
use crate::weighted::WeightedBinaryMatrix;
use crate::{fmt_ratio, BinaryMatrix, Rational};

/// One recorded decrement step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub i: usize,
    /// Implicit dimension before the step.
    pub n: u64,
    /// Density before the step.
    pub density: Rational,
    pub strategy: Strategy,
    /// Discrepancy of the chosen rectangle (negative).
    pub disc: Rational,
    /// Density of the chosen rectangle.
    pub child_density: Rational,
}

#[derive(Serialize)]
struct StepLine<'a> {
    i: usize,
    n_i: u64,
    p_num: i128,
    p_den: i128,
    strategy_used: &'a Strategy,
    disc_num: i128,
    disc_den: i128,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecrementTrace {
    pub steps: Vec<StepRecord>,
    /// Rank of the matrix the loop ran on (after any complement).
    pub rank: usize,
    /// Dimension and density when the loop stopped.
    pub final_n: u64,
    pub final_density: Rational,
}

impl DecrementTrace {
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }

    /// One JSON object per step.
    pub fn json_lines(&self) -> Vec<String> {
        self.steps
            .iter()
            .map(|s| {
                serde_json::to_string(&StepLine {
                    i: s.i,
                    n_i: s.n,
                    p_num: *s.density.numer(),
                    p_den: *s.density.denom(),
                    strategy_used: &s.strategy,
                    disc_num: *s.disc.numer(),
                    disc_den: *s.disc.denom(),
                })
                .expect("plain data serializes")
            })
            .collect()
    }
}

/// What a stalled decrement step leaves behind.
#[derive(Clone, Debug)]
pub struct StallReport {
    pub step: usize,
    pub n: u64,
    pub density: Rational,
    /// Best half-sized rectangle found, as copy counts of the step's matrix.
    pub best: Option<Selection>,
    pub best_disc: Option<Rational>,
    pub trace: DecrementTrace,
}

impl StallReport {
    pub fn describe(&self) -> String {
        format!(
            "step {} (n = {}, p = {}): best half rectangle has disc {}",
            self.step,
            self.n,
            fmt_ratio(&self.density),
            self.best_disc.as_ref().map(fmt_ratio).unwrap_or_else(|| "none".into())
        )
    }
}

/// A constant submatrix of the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoResult {
    #[serde(rename = "X")]
    pub rows: Vec<usize>,
    #[serde(rename = "Y")]
    pub cols: Vec<usize>,
    pub color: u8,
}

impl MonoResult {
    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    pub fn verify(&self, m: &BinaryMatrix) -> bool {
        !self.rows.is_empty()
            && !self.cols.is_empty()
            && self.rows.iter().all(|&i| i < m.m())
            && self.cols.iter().all(|&j| j < m.n())
            && m.is_constant_on(&self.rows, &self.cols, self.color == 1)
    }

    pub fn json_line(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            color: u8,
            #[serde(rename = "X")]
            rows: &'a [usize],
            #[serde(rename = "Y")]
            cols: &'a [usize],
            dims: [usize; 2],
        }
        serde_json::to_string(&Line {
            color: self.color,
            rows: &self.rows,
            cols: &self.cols,
            dims: [self.rows.len(), self.cols.len()],
        })
        .expect("plain data serializes")
    }
}

/// Working state: an implicit matrix plus, for every base row and column, the
/// rows and columns of the input it stands for.
struct State {
    w: WeightedBinaryMatrix,
    row_members: Vec<Vec<usize>>,
    col_members: Vec<Vec<usize>>,
}

impl State {
    fn compress(self) -> Self {
        let c = self.w.merge_identical();
        State {
            w: c.matrix,
            row_members: c
                .row_classes
                .iter()
                .map(|cls| Self::members(&self.row_members, cls))
                .collect(),
            col_members: c
                .col_classes
                .iter()
                .map(|cls| Self::members(&self.col_members, cls))
                .collect(),
        }
    }

    fn select(self, sel: &Selection) -> Result<Self> {
        let (w, kr, kc) = self.w.select(&sel.rows, &sel.cols)?;
        Ok(State {
            w,
            row_members: kr.iter().map(|&i| self.row_members[i].clone()).collect(),
            col_members: kc.iter().map(|&j| self.col_members[j].clone()).collect(),
        })
    }

    fn members(list: &[Vec<usize>], idx: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = idx.iter().flat_map(|&i| list[i].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Finds a monochromatic submatrix of `m`.
///
/// If more than half of the entries are ones the complement is searched for
/// zeros and the result has color 1. The rank `r` is that of the searched
/// matrix. Decrement steps run while `p ≥ 1/(8r)`; the final all-zero block
/// keeps every input row and column that any surviving class stands for, and
/// is verified entrywise against `m` before it is returned.
pub fn find_mono(m: &BinaryMatrix, cfg: &DecrementConfig) -> Result<(MonoResult, DecrementTrace)> {
    let cells = m.m() as u128 * m.n() as u128;
    let (work, color) = if 2 * m.ones() as u128 > cells {
        (m.complement(), 1u8)
    } else {
        (m.clone(), 0u8)
    };
    let r = work.rank();
    let w = if work.is_square() {
        WeightedBinaryMatrix::unit(work)
    } else {
        WeightedBinaryMatrix::square(work)?
    };
    let mut state = State {
        row_members: (0..w.base().m()).map(|i| vec![i]).collect(),
        col_members: (0..w.base().n()).map(|j| vec![j]).collect(),
        w,
    };
    if cfg.compress {
        state = state.compress();
    }

    let mut trace = DecrementTrace {
        rank: r,
        ..DecrementTrace::default()
    };
    loop {
        let n = state.w.rows();
        let ones = state.w.ones();
        if r == 0 || n < 2 || 8 * (r as u128) * (ones as u128) < (n as u128) * (n as u128) {
            break;
        }
        let i = trace.steps.len();
        let out = match decrement_step_weighted(&state.w, i as u64, cfg) {
            Ok(out) => out,
            Err(Error::Stalled(mut report)) => {
                report.trace = trace;
                return Err(Error::Stalled(report));
            }
            Err(e) => return Err(e),
        };
        trace.steps.push(StepRecord {
            i,
            n,
            density: out.parent_density,
            strategy: out.strategy,
            disc: out.selection.disc(&state.w),
            child_density: out.child_density,
        });
        state = state.select(&out.selection)?;
        if cfg.compress {
            state = state.compress();
        }
    }
    trace.final_n = state.w.rows();
    trace.final_density = state.w.density();

    match sparse_zero_block(&state.w, r)? {
        SparseOutcome::Zero { rows, cols } => {
            let result = MonoResult {
                rows: State::members(&state.row_members, &rows),
                cols: State::members(&state.col_members, &cols),
                color,
            };
            if !result.verify(m) {
                return Err(Error::Verification(format!(
                    "{}×{} block is not constant {color}",
                    result.rows.len(),
                    result.cols.len()
                )));
            }
            Ok((result, trace))
        }
        SparseOutcome::Permutation(p) => {
            let witness = PermutationWitness {
                rows: p.rows.iter().map(|&i| state.row_members[i][0]).collect(),
                cols: p.cols.iter().map(|&j| state.col_members[j][0]).collect(),
            };
            Err(Error::Precondition(format!(
                "found a {k}×{k} permutation submatrix (rows {:?}, columns {:?}); rank exceeds {r}",
                witness.rows,
                witness.cols,
                k = witness.size()
            )))
        }
    }
}
