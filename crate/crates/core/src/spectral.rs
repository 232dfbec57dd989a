//! Spectral lower bounds on the semidefinite relaxation of discrepancy.
//!
//! The symmetrization `A` of an `m × n` binary matrix is the adjacency matrix
//! of its bipartite graph. A positive semidefinite `X` with `X_ii ≤ 1` has
//! discrepancy `disc(X) = ⟨X, A⟩ − p⟨X, L⟩`, where `L` is the adjacency matrix
//! of the complete bipartite graph on the same vertices. The largest such
//! value (`pdisc`) is within a constant factor of `disc⁺(M)`, so any explicit
//! witness `X` certifies a lower bound.
//!
//! The witness used here is `X = (1/Δ) Σ_{i ≤ n} λ_i² v_i v_iᵀ` built from the
//! nonnegative half of the spectrum. Its diagonal is dominated by that of
//! `A²/Δ`, hence bounded by one, and `disc(X) ≥ (1/Δ) Σ_{i≥2} λ_i³`.
//!
//! Everything operates on [`WeightedBinaryMatrix`]: the symmetrization of the
//! implicit blow-up has the same nonzero spectrum as the compressed matrix
//! `S = [[0, D_r^{1/2} B D_c^{1/2}], [·ᵀ, 0]]`, and eigenvectors lift to the
//! blow-up by dividing each coordinate by the square root of its multiplicity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dot, symmetric_eigen, SymMatrix};
use crate::matrix::BinaryMatrix;
use crate::weighted::WeightedBinaryMatrix;
use crate::Rational;

/// Numerical tolerances for spectral certificates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Eigen residual and orthogonality tolerance relative to `‖A‖_F`.
    pub eig_rel: f64,
    /// Allowed excess of witness diagonal entries over one.
    pub diag: f64,
    /// Relative slack for certificate inequalities, `num_rel · (1 + |value|)`.
    pub num_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig_rel: 1e-10,
            diag: 1e-8,
            num_rel: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn num_tol(&self, value: f64) -> f64 {
        self.num_rel * (1.0 + value.abs())
    }
}

/// How the coordinates of a spectrum split into rows and columns, with the
/// square roots of their multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct Bipartition {
    pub rows: usize,
    pub sqrt_weights: Vec<f64>,
    /// Effective number of rows and columns of the implicit matrix.
    pub effective: (u64, u64),
}

#[derive(Clone, Debug)]
pub struct SpectralData {
    /// Eigenvalues, descending.
    pub lambdas: Vec<f64>,
    /// Orthonormal eigenvectors, `vectors[t]` belongs to `lambdas[t]`.
    pub vectors: Vec<Vec<f64>>,
    /// `max_t ‖A v_t − λ_t v_t‖₂`.
    pub residual: f64,
    /// `max_{s,t} |⟨v_s, v_t⟩ − δ_st|`.
    pub orthogonality_error: f64,
    /// `max_t |λ_t + λ_{N−1−t}|`.
    pub pairing_error: f64,
    /// `|Σ λ_t² − ‖A‖_F²|`.
    pub trace_error: f64,
    pub eig_tol: f64,
    pub layout: Option<Bipartition>,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    /// Number of leading eigenvalues the witness may use.
    pub fn positive_half(&self) -> usize {
        self.dim() / 2
    }

    pub fn lambda_head(&self, k: usize) -> Vec<f64> {
        self.lambdas.iter().take(k).copied().collect()
    }
}

/// The symmetrization of `M`: an `(m+n) × (m+n)` 0/1 matrix with `M` and
/// `Mᵀ` in the off-diagonal blocks.
pub fn symmetrize(m: &BinaryMatrix) -> SymMatrix {
    let rows = m.m();
    SymMatrix::from_fn(rows + m.n(), |i, j| match (i < rows, j < rows) {
        (true, false) => m.get(i, j - rows) as u8 as f64,
        (false, true) => m.get(j, i - rows) as u8 as f64,
        _ => 0.0,
    })
}

/// Compressed symmetrization of a weighted matrix; entries are
/// `√(row_mult_i · col_mult_j)` where the base has a one.
pub fn symmetrize_weighted(w: &WeightedBinaryMatrix) -> SymMatrix {
    let rows = w.base().m();
    let sw = sqrt_weights(w);
    SymMatrix::from_fn(rows + w.base().n(), |i, j| {
        let one = match (i < rows, j < rows) {
            (true, false) => w.base().get(i, j - rows),
            (false, true) => w.base().get(j, i - rows),
            _ => false,
        };
        if one {
            sw[i] * sw[j]
        } else {
            0.0
        }
    })
}

fn sqrt_weights(w: &WeightedBinaryMatrix) -> Vec<f64> {
    w.row_mult()
        .iter()
        .chain(w.col_mult())
        .map(|&x| (x as f64).sqrt())
        .collect()
}

/// Eigendecomposition of a symmetric matrix with the residual, orthogonality
/// and trace checks applied at `eig_tol = eig_rel · max(‖A‖_F, 1)`.
pub fn eigendecompose(a: &SymMatrix, tol: &Tolerances) -> Result<SpectralData> {
    if !a.is_symmetric() {
        return Err(Error::InvalidInput("matrix is not symmetric".into()));
    }
    let eig = symmetric_eigen(a)?;
    let fro = a.frobenius_norm();
    let eig_tol = tol.eig_rel * fro.max(1.0);
    let n = a.dim();

    let mut residual: f64 = 0.0;
    for (lam, v) in eig.values.iter().zip(&eig.vectors) {
        let av = a.matvec(v);
        let r = av.iter().zip(v).map(|(x, y)| (x - lam * y).powi(2)).sum::<f64>().sqrt();
        residual = residual.max(r);
    }
    let mut orthogonality_error: f64 = 0.0;
    for s in 0..n {
        for t in s..n {
            let want = if s == t { 1.0 } else { 0.0 };
            orthogonality_error = orthogonality_error.max((dot(&eig.vectors[s], &eig.vectors[t]) - want).abs());
        }
    }
    let pairing_error = (0..n)
        .map(|t| (eig.values[t] + eig.values[n - 1 - t]).abs())
        .fold(0.0, f64::max);
    let trace_error = (eig.values.iter().map(|l| l * l).sum::<f64>() - fro * fro).abs();

    for (what, value) in [
        ("eigen residual", residual),
        ("orthogonality error", orthogonality_error),
    ] {
        if value > eig_tol {
            return Err(Error::Tolerance {
                what,
                value,
                tol: eig_tol,
            });
        }
    }
    if trace_error > n as f64 * eig_tol {
        return Err(Error::Tolerance {
            what: "trace error",
            value: trace_error,
            tol: n as f64 * eig_tol,
        });
    }
    Ok(SpectralData {
        lambdas: eig.values,
        vectors: eig.vectors,
        residual,
        orthogonality_error,
        pairing_error,
        trace_error,
        eig_tol,
        layout: None,
    })
}

/// Spectrum of the (compressed) symmetrization of `w`, with the bipartite
/// pairing `λ_t = −λ_{N−1−t}` checked.
pub fn spectrum(w: &WeightedBinaryMatrix, tol: &Tolerances) -> Result<SpectralData> {
    let a = symmetrize_weighted(w);
    let mut s = eigendecompose(&a, tol)?;
    if s.pairing_error > s.eig_tol {
        return Err(Error::Tolerance {
            what: "bipartite pairing error",
            value: s.pairing_error,
            tol: s.eig_tol,
        });
    }
    s.layout = Some(Bipartition {
        rows: w.base().m(),
        sqrt_weights: sqrt_weights(w),
        effective: (w.rows(), w.cols()),
    });
    Ok(s)
}

/// Witness coefficients `a_t = λ_t²/Δ` on the leading half of the spectrum,
/// exactly zero elsewhere.
pub fn witness_coeffs(s: &SpectralData, delta: u64) -> Vec<f64> {
    let half = s.positive_half();
    s.lambdas
        .iter()
        .enumerate()
        .map(|(t, &l)| if t < half { l * l / delta as f64 } else { 0.0 })
        .collect()
}

/// `(1/Δ) Σ_{i=2}^{n} λ_i³`.
pub fn cubesum_bound(s: &SpectralData, delta: u64) -> f64 {
    let half = s.positive_half();
    s.lambdas.iter().take(half).skip(1).map(|l| l * l * l).sum::<f64>() / delta as f64
}

/// The explicit PSD matrix a certificate stands for.
#[derive(Clone, Debug)]
pub enum Witness {
    /// `X = Σ_t coeffs[t] v_t v_tᵀ` in the eigenbasis of `spectral`.
    Spectral { coeffs: Vec<f64>, spectral: SpectralData },
    /// `X = z zᵀ` with `z` the indicator of the listed base rows and columns
    /// (all copies) of a base with shape `dims`. Certifies `2 · disc(rows, cols)`.
    Rectangle {
        rows: Vec<usize>,
        cols: Vec<usize>,
        dims: (usize, usize),
    },
}

/// Which case of the high-degree split produced a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Cube-sum witness on the matrix itself (no heavy rows or columns).
    Witness,
    /// Cube-sum witness built on the truncated matrix and evaluated on the original.
    Truncated,
    /// Heavy rows or columns carry enough ones; a strip rectangle certifies.
    Strip,
    /// The matrix has no ones.
    Empty,
}

/// A PSD witness together with the lower bound it certifies on `pdisc(M)`.
#[derive(Clone, Debug)]
pub struct DiscCertificate {
    pub witness: Witness,
    pub regime: Regime,
    /// `disc(X) = ⟨X, A⟩ − p⟨X, L⟩` evaluated directly on the target matrix.
    pub disc_value: f64,
    /// Largest diagonal entry of `X` (over all copies of the implicit matrix).
    pub diag_max: f64,
    /// The guaranteed bound; `disc_value ≥ bound − num_tol`.
    pub bound: f64,
    pub matrix_hash: String,
    pub lambda_head: Vec<f64>,
    pub residual: f64,
    pub rank: usize,
    /// `d^{1/2} n^{3/2} / (7√r)`.
    pub lowrank_bound: f64,
}

#[derive(Serialize)]
pub struct CertificateJson<'a> {
    pub kind: &'static str,
    pub regime: Regime,
    pub bound: f64,
    pub disc_value: f64,
    pub diag_max: f64,
    pub lambda_head: &'a [f64],
    pub residual: f64,
    pub rank: usize,
    pub lowrank_bound: f64,
    pub matrix_hash: &'a str,
}

impl DiscCertificate {
    pub fn to_json(&self) -> CertificateJson<'_> {
        CertificateJson {
            kind: match self.witness {
                Witness::Spectral { .. } => "spectral",
                Witness::Rectangle { .. } => "rectangle",
            },
            regime: self.regime,
            bound: self.bound,
            disc_value: self.disc_value,
            diag_max: self.diag_max,
            lambda_head: &self.lambda_head,
            residual: self.residual,
            rank: self.rank,
            lowrank_bound: self.lowrank_bound,
            matrix_hash: &self.matrix_hash,
        }
    }
}

fn check_layout<'a>(s: &'a SpectralData, w: &WeightedBinaryMatrix) -> Result<&'a Bipartition> {
    let layout = s
        .layout
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("spectrum carries no bipartition".into()))?;
    if layout.rows != w.base().m() || layout.sqrt_weights.len() != w.base().m() + w.base().n() {
        return Err(Error::InvalidInput("spectrum does not match matrix shape".into()));
    }
    Ok(layout)
}

/// `v_tᵀ S v_t` and `⟨v_t v_tᵀ, L⟩` for one vector in compressed coordinates.
fn quadratic_terms(w: &WeightedBinaryMatrix, sw: &[f64], v: &[f64]) -> (f64, f64) {
    let rows = w.base().m();
    let (vr, vc) = v.split_at(rows);
    let mut a_term = 0.0;
    for (i, &x) in vr.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        let mut acc = 0.0;
        for (k, &word) in w.base().row_words(i).iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let j = k * 64 + rest.trailing_zeros() as usize;
                acc += sw[rows + j] * vc[j];
                rest &= rest - 1;
            }
        }
        a_term += x * sw[i] * acc;
    }
    let er: f64 = vr.iter().zip(&sw[..rows]).map(|(a, b)| a * b).sum();
    let ec: f64 = vc.iter().zip(&sw[rows..]).map(|(a, b)| a * b).sum();
    (2.0 * a_term, 2.0 * er * ec)
}

/// `disc(X)` for `X = Σ_t coeffs[t] v_t v_tᵀ`, evaluated against `target`.
pub fn disc_of_factored(target: &WeightedBinaryMatrix, s: &SpectralData, coeffs: &[f64]) -> Result<f64> {
    let layout = check_layout(s, target)?;
    if coeffs.len() != s.dim() {
        return Err(Error::InvalidInput("coefficient vector has wrong length".into()));
    }
    let p = density_f64(target);
    let mut total = 0.0;
    for (v, &a) in s.vectors.iter().zip(coeffs) {
        if a == 0.0 {
            continue;
        }
        let (xa, xl) = quadratic_terms(target, &layout.sqrt_weights, v);
        total += a * (xa - p * xl);
    }
    Ok(total)
}

/// Largest diagonal entry of the implicit `X = Σ_t coeffs[t] v_t v_tᵀ`.
pub fn diag_max_of_factored(s: &SpectralData, coeffs: &[f64]) -> f64 {
    let dim = s.dim();
    let weights: Vec<f64> = match &s.layout {
        Some(l) => l.sqrt_weights.iter().map(|x| x * x).collect(),
        None => vec![1.0; dim],
    };
    (0..dim)
        .map(|i| {
            s.vectors
                .iter()
                .zip(coeffs)
                .filter(|(_, &a)| a != 0.0)
                .map(|(v, &a)| a * v[i] * v[i])
                .sum::<f64>()
                / weights[i]
        })
        .fold(0.0, f64::max)
}

fn density_f64(w: &WeightedBinaryMatrix) -> f64 {
    w.ones() as f64 / (w.rows() as f64 * w.cols() as f64)
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `disc(X) = ⟨X, A⟩ − p⟨X, L⟩` for an explicit symmetric `X` of size `m + n`.
pub fn disc_of_psd(m: &BinaryMatrix, x: &SymMatrix) -> Result<f64> {
    let rows = m.m();
    if x.dim() != rows + m.n() {
        return Err(Error::InvalidInput(format!(
            "witness has dimension {}, expected {}",
            x.dim(),
            rows + m.n()
        )));
    }
    if !x.is_symmetric() {
        return Err(Error::InvalidInput("witness is not symmetric".into()));
    }
    let p = ratio_f64(m.density());
    let mut xa = 0.0;
    let mut xl = 0.0;
    for i in 0..rows {
        for j in 0..m.n() {
            let v = x.get(i, rows + j);
            xl += v;
            if m.get(i, j) {
                xa += v;
            }
        }
    }
    Ok(2.0 * xa - p * 2.0 * xl)
}

/// Right-hand side of `disc(X) ≥ Σ a_t λ_t − (pN/2) · max_t (a_t + a_{N−1−t})`,
/// where `N` is the effective dimension of the symmetrization.
pub fn disc_x_bound(s: &SpectralData, coeffs: &[f64], p: f64) -> Result<f64> {
    if coeffs.len() != s.dim() {
        return Err(Error::InvalidInput("coefficient vector has wrong length".into()));
    }
    if let Some(t) = coeffs.iter().position(|&a| a < 0.0) {
        return Err(Error::InvalidInput(format!("negative coefficient at index {t}")));
    }
    let dim = s.dim();
    let big_n = match &s.layout {
        Some(l) => (l.effective.0 + l.effective.1) as f64,
        None => dim as f64,
    };
    let linear: f64 = coeffs.iter().zip(&s.lambdas).map(|(a, l)| a * l).sum();
    let pair_max = (0..dim).map(|t| coeffs[t] + coeffs[dim - 1 - t]).fold(0.0, f64::max);
    Ok(linear - p * big_n / 2.0 * pair_max)
}

/// Builds the cube-sum witness from `source` (the spectrum of some matrix
/// with maximum degree `delta`) and evaluates it on `target`.
pub fn witness_on(
    target: &WeightedBinaryMatrix,
    source: SpectralData,
    delta: u64,
    tol: &Tolerances,
) -> Result<DiscCertificate> {
    if delta == 0 {
        return Err(Error::Precondition("witness needs maximum degree at least 1".into()));
    }
    if !target.is_square() {
        return Err(Error::Precondition("witness needs a square (implicit) matrix".into()));
    }
    let coeffs = witness_coeffs(&source, delta);
    let diag_max = diag_max_of_factored(&source, &coeffs);
    if diag_max > 1.0 + tol.diag {
        return Err(Error::CertificateRejected {
            diag_max,
            tol: tol.diag,
        });
    }
    let disc_value = disc_of_factored(target, &source, &coeffs)?;
    let bound = cubesum_bound(&source, delta);
    Ok(DiscCertificate {
        regime: Regime::Witness,
        disc_value,
        diag_max,
        bound,
        matrix_hash: target.hash_hex(),
        lambda_head: source.lambda_head(16),
        residual: source.residual,
        rank: 0,
        lowrank_bound: 0.0,
        witness: Witness::Spectral {
            coeffs,
            spectral: source,
        },
    })
}

/// The cube-sum witness of `w` itself, with `Δ` its maximum degree.
pub fn witness(w: &WeightedBinaryMatrix, tol: &Tolerances) -> Result<DiscCertificate> {
    let s = spectrum(w, tol)?;
    witness_on(w, s, w.max_degree(), tol)
}

/// Output of [`truncate_high_degree`]. Row and column sets index the base.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub matrix: WeightedBinaryMatrix,
    pub t_r: u64,
    pub t_c: u64,
    pub heavy_rows: Vec<usize>,
    pub heavy_cols: Vec<usize>,
}

/// Clears every row with degree `≥ (1+δ)d` and every column likewise, where
/// `d = |M|/n` is the average degree of the square matrix.
pub fn truncate_high_degree(w: &WeightedBinaryMatrix, delta: Rational) -> Result<Truncation> {
    if !w.is_square() {
        return Err(Error::Precondition(
            "truncation needs a square (implicit) matrix".into(),
        ));
    }
    let n = w.rows() as i128;
    let ones = w.ones() as i128;
    // deg ≥ (1+δ)·ones/n  ⟺  deg·n·den ≥ (den+num)·ones
    let (num, den) = (*delta.numer(), *delta.denom());
    let heavy = |deg: u64| deg as i128 * n * den >= (den + num) * ones;
    let heavy_rows: Vec<usize> = (0..w.base().m()).filter(|&i| heavy(w.row_degrees()[i])).collect();
    let heavy_cols: Vec<usize> = (0..w.base().n()).filter(|&j| heavy(w.col_degrees()[j])).collect();
    let t_r = heavy_rows.iter().map(|&i| w.row_mult()[i] * w.row_degrees()[i]).sum();
    let t_c = heavy_cols.iter().map(|&j| w.col_mult()[j] * w.col_degrees()[j]).sum();
    let mut hr = vec![false; w.base().m()];
    let mut hc = vec![false; w.base().n()];
    heavy_rows.iter().for_each(|&i| hr[i] = true);
    heavy_cols.iter().for_each(|&j| hc[j] = true);
    let base = BinaryMatrix::from_fn(w.base().m(), w.base().n(), |i, j| {
        !hr[i] && !hc[j] && w.base().get(i, j)
    });
    Ok(Truncation {
        matrix: WeightedBinaryMatrix::new(base, w.row_mult().to_vec(), w.col_mult().to_vec())?,
        t_r,
        t_c,
        heavy_rows,
        heavy_cols,
    })
}

#[derive(Clone, Debug, Serialize, serde::Deserialize)]
#[serde(default)]
pub struct BoundConfig {
    pub tol: Tolerances,
    /// Degree excess that marks a row or column as heavy.
    #[serde(with = "crate::ratio_string")]
    pub delta: Rational,
    /// The strip certificate is used when `t_r + t_c ≥ strip_fraction · D`.
    #[serde(with = "crate::ratio_string")]
    pub strip_fraction: Rational,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            delta: Rational::new(1, 100),
            strip_fraction: Rational::new(1, 100),
        }
    }
}

/// `d^{1/2} n^{3/2} / (7√r)` for a square matrix with `n` rows, `|M|` ones and rank `r`.
pub fn lowrank_bound(n: u64, ones: u64, rank: usize) -> f64 {
    if rank == 0 {
        return 0.0;
    }
    let n = n as f64;
    let d = ones as f64 / n;
    d.sqrt() * n.powf(1.5) / (7.0 * (rank as f64).sqrt())
}

/// Certified lower bound on `pdisc(M)` for a square matrix with `d ≤ n/2`.
///
/// Rows and columns of degree at least `(1+δ)d` are located first. When they
/// carry at least `strip_fraction · D` ones, with
/// `D = min{dn, d^{1/2} n^{3/2} / (7√r)}`, the heavier strip is itself a
/// rectangle of positive discrepancy `≥ (δ/2) · max(t_r, t_c)` and is returned
/// as a rank-one witness. Otherwise the cube-sum witness of the truncated
/// matrix is evaluated on the original; the two discrepancies differ by at
/// most `4(|M| − |M'|)`.
pub fn lower_bound_disc(w: &WeightedBinaryMatrix, cfg: &BoundConfig) -> Result<DiscCertificate> {
    if !w.is_square() {
        return Err(Error::Precondition(
            "lower_bound_disc needs a square (implicit) matrix; square it first".into(),
        ));
    }
    let n = w.rows();
    let ones = w.ones();
    // d = ones / n ≤ n / 2
    if 2 * ones as u128 > n as u128 * n as u128 {
        return Err(Error::Regime(format!(
            "average degree {}/{} exceeds n/2; complement the matrix",
            ones, n
        )));
    }
    let tol = &cfg.tol;
    if ones == 0 {
        let s = spectrum(w, tol)?;
        return Ok(DiscCertificate {
            regime: Regime::Empty,
            disc_value: 0.0,
            diag_max: 0.0,
            bound: 0.0,
            matrix_hash: w.hash_hex(),
            lambda_head: s.lambda_head(16),
            residual: s.residual,
            rank: 0,
            lowrank_bound: 0.0,
            witness: Witness::Spectral {
                coeffs: vec![0.0; s.dim()],
                spectral: s,
            },
        });
    }
    let rank = w.rank();
    let lowrank = lowrank_bound(n, ones, rank);
    let big_d = (ones as f64).min(lowrank);
    let trunc = truncate_high_degree(w, cfg.delta)?;
    let strip_mass = (trunc.t_r + trunc.t_c) as f64;

    let mut cert = if strip_mass >= ratio_f64(cfg.strip_fraction) * big_d {
        strip_certificate(w, &trunc, cfg)?
    } else {
        let s = spectrum(&trunc.matrix, tol)?;
        let removed = ones - trunc.matrix.ones();
        let delta_prime = trunc.matrix.max_degree();
        let mut c = witness_on(w, s, delta_prime, tol)?;
        c.bound -= 4.0 * removed as f64;
        if removed > 0 {
            c.regime = Regime::Truncated;
        }
        c
    };
    cert.rank = rank;
    cert.lowrank_bound = lowrank;
    if cert.disc_value < cert.bound - tol.num_tol(cert.bound) {
        return Err(Error::Tolerance {
            what: "certificate shortfall",
            value: cert.bound - cert.disc_value,
            tol: tol.num_tol(cert.bound),
        });
    }
    Ok(cert)
}

fn strip_certificate(w: &WeightedBinaryMatrix, trunc: &Truncation, cfg: &BoundConfig) -> Result<DiscCertificate> {
    let all_rows: Vec<usize> = (0..w.base().m()).collect();
    let all_cols: Vec<usize> = (0..w.base().n()).collect();
    let (rows, cols, t) = if trunc.t_r >= trunc.t_c {
        (trunc.heavy_rows.clone(), all_cols, trunc.t_r)
    } else {
        (all_rows, trunc.heavy_cols.clone(), trunc.t_c)
    };
    let full = |set: &[usize], mult: &[u64]| -> Vec<u64> {
        let mut c = vec![0u64; mult.len()];
        set.iter().for_each(|&i| c[i] = mult[i]);
        c
    };
    let rc = full(&rows, w.row_mult());
    let cc = full(&cols, w.col_mult());
    let value = crate::search::scaled_disc(w, &rc, &cc);
    let cells = w.rows() as i128 * w.cols() as i128;
    let disc = ratio_f64(Rational::new(value, cells));
    let s = spectrum(w, &cfg.tol)?;
    Ok(DiscCertificate {
        regime: Regime::Strip,
        disc_value: 2.0 * disc,
        diag_max: 1.0,
        bound: ratio_f64(cfg.delta) * t as f64,
        matrix_hash: w.hash_hex(),
        lambda_head: s.lambda_head(16),
        residual: s.residual,
        rank: 0,
        lowrank_bound: 0.0,
        witness: Witness::Rectangle {
            rows,
            cols,
            dims: (w.base().m(), w.base().n()),
        },
    })
}
