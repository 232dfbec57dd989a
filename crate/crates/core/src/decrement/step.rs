//! One density-decrement step: a half-sized rectangle of strictly smaller
//! density than the whole matrix.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{best_sized_rect, Rectangle, Sign, DEFAULT_ORACLE_LIMIT};
use crate::rng::{stream, Purpose};
use crate::search::{adjust_to_half, local_search_half, Selection};
use crate::spectral::{lower_bound_disc, BoundConfig, DiscCertificate, Witness};
use crate::weighted::WeightedBinaryMatrix;
use crate::{BinaryMatrix, Rational};

use super::{DecrementTrace, StallReport};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct DecrementConfig {
    /// Largest implicit dimension solved exactly by enumeration.
    pub oracle_limit: usize,
    /// Random hyperplanes tried when rounding a spectral witness.
    pub trials: u64,
    pub seed: u64,
    /// Local search gives up after `swap_factor · n` swaps.
    pub swap_factor: u64,
    /// Largest base dimension `m + n` sent to the eigensolver.
    pub spectral_limit: usize,
    /// Merge identical rows and columns between steps.
    pub compress: bool,
    pub bound: BoundConfig,
}

impl Default for DecrementConfig {
    fn default() -> Self {
        Self {
            oracle_limit: DEFAULT_ORACLE_LIMIT,
            trials: 64,
            seed: 0,
            swap_factor: 50,
            spectral_limit: 1024,
            compress: true,
            bound: BoundConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Exact,
    Spectral,
    LocalSearch,
}

/// Unit-ball vectors whose Gram matrix is a PSD witness, one per base row
/// and base column. Every copy of a class shares its vector.
#[derive(Clone, Debug, PartialEq)]
pub struct GramVectors {
    pub rows: Vec<Vec<f64>>,
    pub cols: Vec<Vec<f64>>,
}

impl GramVectors {
    fn is_zero(&self) -> bool {
        self.rows.iter().chain(&self.cols).all(|v| v.iter().all(|&x| x == 0.0))
    }
}

/// Square-root factorization of the witness of a certificate.
pub fn gram_vectors(cert: &DiscCertificate) -> Result<GramVectors> {
    match &cert.witness {
        Witness::Spectral { coeffs, spectral } => {
            if let Some(t) = coeffs.iter().position(|&a| a < 0.0) {
                return Err(Error::InvalidInput(format!(
                    "negative witness coefficient at index {t}"
                )));
            }
            let layout = spectral
                .layout
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("spectrum carries no bipartition".into()))?;
            let used: Vec<usize> = (0..coeffs.len()).filter(|&t| coeffs[t] > 0.0).collect();
            let vector = |c: usize| -> Vec<f64> {
                used.iter()
                    .map(|&t| coeffs[t].sqrt() * spectral.vectors[t][c] / layout.sqrt_weights[c])
                    .collect()
            };
            let dim = spectral.dim();
            Ok(GramVectors {
                rows: (0..layout.rows).map(vector).collect(),
                cols: (layout.rows..dim).map(vector).collect(),
            })
        }
        Witness::Rectangle { rows, cols, dims } => {
            let indicator = |set: &[usize], len: usize| -> Vec<Vec<f64>> {
                let mut v = vec![vec![0.0]; len];
                set.iter().for_each(|&i| v[i][0] = 1.0);
                v
            };
            Ok(GramVectors {
                rows: indicator(rows, dims.0),
                cols: indicator(cols, dims.1),
            })
        }
    }
}

/// Random-hyperplane rounding: for each trial draw a Gaussian `g`, split the
/// rows by the sign of `⟨v_i, g⟩` and the columns by `⟨w_j, g⟩`, and score the
/// four quadrant rectangles. Returns the most negative one over all trials
/// (earliest trial, then quadrant, on ties), or the empty rectangle when none
/// is negative.
pub fn round_selection(w: &WeightedBinaryMatrix, grams: &GramVectors, trials: u64, seed: u64, step: u64) -> Selection {
    let empty = Selection::empty(w);
    if grams.is_zero() {
        return empty;
    }
    let dim = grams.rows.iter().chain(&grams.cols).map(Vec::len).max().unwrap_or(0);
    let split = |vs: &[Vec<f64>], g: &[f64], mult: &[u64]| -> (Vec<u64>, Vec<u64>) {
        let mut pos = vec![0; vs.len()];
        let mut neg = vec![0; vs.len()];
        for (i, v) in vs.iter().enumerate() {
            let s: f64 = v.iter().zip(g).map(|(a, b)| a * b).sum();
            if s > 0.0 {
                pos[i] = mult[i];
            } else {
                neg[i] = mult[i];
            }
        }
        (pos, neg)
    };
    let per_trial: Vec<Selection> = (0..trials.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, Purpose::Rounding, step, t);
            let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            let (x1, x2) = split(&grams.rows, &g, w.row_mult());
            let (y1, y2) = split(&grams.cols, &g, w.col_mult());
            let mut best = Selection::empty(w);
            for (x, y) in [(&x1, &y1), (&x1, &y2), (&x2, &y1), (&x2, &y2)] {
                let s = Selection::new(w, x.clone(), y.clone());
                if s.value < best.value {
                    best = s;
                }
            }
            best
        })
        .collect();
    per_trial
        .into_iter()
        .fold(empty, |best, s| if s.value < best.value { s } else { best })
}

/// [`round_selection`] on a dense matrix.
pub fn round_to_rect(m: &BinaryMatrix, grams: &GramVectors, trials: u64, seed: u64) -> Rectangle {
    let w = WeightedBinaryMatrix::unit(m.clone());
    round_selection(&w, grams, trials, seed, 0).to_rectangle(&w)
}

/// Outcome of a successful step.
#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub selection: Selection,
    pub strategy: Strategy,
    pub parent_density: Rational,
    pub child_density: Rational,
}

impl StepOutcome {
    pub fn decrement(&self) -> Rational {
        self.parent_density - self.child_density
    }
}

fn density_of(w: &WeightedBinaryMatrix, sel: &Selection) -> Rational {
    let cells = sel.row_total() as i128 * sel.col_total() as i128;
    Rational::new(w.count_in(&sel.rows, &sel.cols) as i128, cells)
}

/// Finds `⌊n/2⌋ × ⌊n/2⌋` copies of rows and columns whose density is strictly
/// below that of `w`. Strategies are tried in order: exact enumeration when
/// the implicit matrix is small, spectral witness rounding, local search.
pub fn decrement_step_weighted(w: &WeightedBinaryMatrix, step: u64, cfg: &DecrementConfig) -> Result<StepOutcome> {
    if !w.is_square() {
        return Err(Error::Precondition(
            "decrement step needs a square (implicit) matrix".into(),
        ));
    }
    let n = w.rows();
    if n < 2 {
        return Err(Error::Precondition("decrement step needs n ≥ 2".into()));
    }
    if 2 * w.ones() as u128 > n as u128 * n as u128 {
        return Err(Error::Precondition("decrement step needs density at most 1/2".into()));
    }
    let parent_density = w.density();
    let half = (n / 2) as usize;
    let done = |selection: Selection, strategy| StepOutcome {
        child_density: density_of(w, &selection),
        selection,
        strategy,
        parent_density,
    };

    if n as usize <= cfg.oracle_limit {
        let dense = w.materialize()?;
        let rect = best_sized_rect(&dense, Sign::Minus, half, half, cfg.oracle_limit)?;
        let sel = expanded_to_counts(w, &rect);
        if sel.value < 0 {
            return Ok(done(sel, Strategy::Exact));
        }
        return Err(stall(w, step, Some(sel)));
    }

    let mut candidate = None;
    if w.base().m() + w.base().n() <= cfg.spectral_limit {
        match lower_bound_disc(w, &cfg.bound) {
            Ok(cert) => {
                let grams = gram_vectors(&cert)?;
                let rounded = round_selection(w, &grams, cfg.trials, cfg.seed, step);
                let sel = adjust_to_half(w, &rounded);
                if sel.value < 0 {
                    return Ok(done(sel, Strategy::Spectral));
                }
                candidate = Some(sel);
            }
            Err(Error::Tolerance { .. } | Error::Convergence { .. } | Error::CertificateRejected { .. }) => {}
            Err(e) => return Err(e),
        }
    }

    let start = candidate.unwrap_or_else(|| adjust_to_half(w, &Selection::empty(w)));
    let sel = local_search_half(w, &start, cfg.swap_factor * n, cfg.seed, step);
    if sel.value < 0 {
        return Ok(done(sel, Strategy::LocalSearch));
    }
    Err(stall(w, step, Some(sel)))
}

fn stall(w: &WeightedBinaryMatrix, step: u64, best: Option<Selection>) -> Error {
    Error::Stalled(Box::new(StallReport {
        step: step as usize,
        n: w.rows(),
        density: w.density(),
        best_disc: best.as_ref().map(|s| s.disc(w)),
        best,
        trace: DecrementTrace::default(),
    }))
}

/// Converts a rectangle of the materialized matrix into copy counts.
fn expanded_to_counts(w: &WeightedBinaryMatrix, rect: &Rectangle) -> Selection {
    let owner = |mult: &[u64]| -> Vec<usize> {
        mult.iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
            .collect()
    };
    let (ro, co) = (owner(w.row_mult()), owner(w.col_mult()));
    let mut rows = vec![0; w.base().m()];
    let mut cols = vec![0; w.base().n()];
    rect.rows.iter().for_each(|&i| rows[ro[i]] += 1);
    rect.cols.iter().for_each(|&j| cols[co[j]] += 1);
    Selection::new(w, rows, cols)
}

/// [`decrement_step_weighted`] on a dense matrix.
pub fn decrement_step(m: &BinaryMatrix, cfg: &DecrementConfig) -> Result<(Rectangle, Strategy)> {
    let w = WeightedBinaryMatrix::unit(m.clone());
    let out = decrement_step_weighted(&w, 0, cfg)?;
    Ok((out.selection.to_rectangle(&w), out.strategy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;
    use crate::spectral::{witness, Tolerances};

    #[test]
    fn gram_vectors_reproduce_identity_witness() {
        let w = WeightedBinaryMatrix::unit(BinaryMatrix::identity(2));
        let cert = witness(&w, &Tolerances::default()).unwrap();
        let g = gram_vectors(&cert).unwrap();
        let Witness::Spectral { coeffs, spectral } = &cert.witness else {
            unreachable!()
        };
        let all: Vec<&Vec<f64>> = g.rows.iter().chain(&g.cols).collect();
        for a in 0..4 {
            for b in 0..4 {
                let x: f64 = (0..4)
                    .map(|t| coeffs[t] * spectral.vectors[t][a] * spectral.vectors[t][b])
                    .sum();
                assert!((dot(all[a], all[b]) - x).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn rounding_zero_matrix_gives_empty() {
        let w = WeightedBinaryMatrix::unit(BinaryMatrix::zeros(4, 4));
        let grams = GramVectors {
            rows: vec![vec![0.0]; 4],
            cols: vec![vec![0.0]; 4],
        };
        let s = round_selection(&w, &grams, 8, 1, 0);
        assert_eq!(s.value, 0);
        assert_eq!(s.row_total(), 0);
    }

    #[test]
    fn rounding_identity_eight() {
        let m = BinaryMatrix::identity(8);
        let w = WeightedBinaryMatrix::unit(m.clone());
        let cert = witness(&w, &Tolerances::default()).unwrap();
        let r = round_to_rect(&m, &gram_vectors(&cert).unwrap(), 64, 1);
        assert!(r.value <= Rational::from_integer(-1), "value {}", r.value);
        assert!(r.verify(&m).unwrap());
    }

    #[test]
    fn exact_step_on_identity_eight() {
        let m = BinaryMatrix::identity(8);
        let (r, strategy) = decrement_step(&m, &DecrementConfig::default()).unwrap();
        assert_eq!(strategy, Strategy::Exact);
        assert_eq!((r.rows.len(), r.cols.len()), (4, 4));
        assert_eq!(m.count_in(&r.rows, &r.cols), 0);
    }

    #[test]
    fn spectral_and_local_search_paths_decrease_density() {
        let m = BinaryMatrix::identity(40);
        let cfg = DecrementConfig::default();
        let (r, strategy) = decrement_step(&m, &cfg).unwrap();
        assert_eq!(strategy, Strategy::Spectral);
        assert!(m.count_in(&r.rows, &r.cols) * 40 * 40 < 20 * 20);

        let cfg = DecrementConfig {
            spectral_limit: 0,
            ..cfg
        };
        let (r, strategy) = decrement_step(&m, &cfg).unwrap();
        assert_eq!(strategy, Strategy::LocalSearch);
        assert_eq!((r.rows.len(), r.cols.len()), (20, 20));
        assert!(m.count_in(&r.rows, &r.cols) * 40 * 40 < 20 * 20);
    }

    #[test]
    fn odd_dimension_halves_down() {
        let m = BinaryMatrix::identity(5);
        let (r, _) = decrement_step(&m, &DecrementConfig::default()).unwrap();
        assert_eq!((r.rows.len(), r.cols.len()), (2, 2));
    }
}
