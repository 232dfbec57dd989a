//! Parameter sweeps with CSV reports.
//!
//! A config lists generators, operations and seeds; every `(generator, seed,
//! operation)` triple becomes one report row. Rows are computed on a worker
//! pool and written in config order. With `timing` off the report depends
//! only on the config, so two runs are byte-identical.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::SANDWICH_FACTOR;
use crate::constructions::GenSpec;
use crate::decrement::{find_mono, DecrementConfig};
use crate::error::{Error, Result};
use crate::oracle::{self, DEFAULT_ORACLE_LIMIT};
use crate::spectral::{lower_bound_disc, BoundConfig, Tolerances};
use crate::weighted::WeightedBinaryMatrix;
use crate::{BinaryMatrix, Rational};

/// Header of every report.
pub const CSV_HEADER: [&str; 15] = [
    "matrix_id",
    "m",
    "n",
    "r",
    "p_num",
    "p_den",
    "disc_num",
    "disc_den",
    "bound",
    "mono_rows",
    "mono_cols",
    "iterations",
    "wall_time_ms",
    "op",
    "status",
];

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "LOWRANKDISC_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    /// `disc(M) = max(disc⁺, disc⁻)` by enumeration.
    DiscExact,
    /// `disc₀⁺(M)` by enumeration.
    Disc0,
    /// Spectral certificate on the (squared) matrix.
    Bound,
    /// Monochromatic submatrix by density decrement.
    Mono,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::DiscExact => "disc_exact",
            Op::Disc0 => "disc0",
            Op::Bound => "bound",
            Op::Mono => "mono",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub gens: Vec<GenSpec>,
    pub ops: Vec<Op>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default = "default_limit")]
    pub oracle_limit: usize,
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// Record wall-clock times; off makes reports reproducible byte for byte.
    #[serde(default = "default_true")]
    pub timing: bool,
    /// Worker count; `LOWRANKDISC_THREADS` caps it.
    #[serde(default)]
    pub threads: Option<usize>,
}

fn default_limit() -> usize {
    DEFAULT_ORACLE_LIMIT
}

fn default_trials() -> u64 {
    64
}

fn default_true() -> bool {
    true
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.gens.is_empty() || self.ops.is_empty() || self.seeds.is_empty() {
            return Err(Error::InvalidInput(
                "experiment config needs at least one generator, operation and seed".into(),
            ));
        }
        self.gens.iter().try_for_each(GenSpec::validate)
    }

    fn bound_config(&self) -> BoundConfig {
        BoundConfig {
            tol: self.tolerances.unwrap_or_default(),
            ..BoundConfig::default()
        }
    }

    fn decrement_config(&self, seed: u64) -> DecrementConfig {
        DecrementConfig {
            oracle_limit: self.oracle_limit,
            trials: self.trials,
            seed,
            bound: self.bound_config(),
            ..DecrementConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub matrix_id: String,
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub p: Rational,
    pub disc: Option<Rational>,
    pub bound: Option<f64>,
    pub mono: Option<(usize, usize)>,
    pub iterations: Option<usize>,
    pub wall_time_ms: u64,
    pub op: Op,
    pub status: String,
}

impl ReportRow {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }

    fn record(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        vec![
            self.matrix_id.clone(),
            self.m.to_string(),
            self.n.to_string(),
            self.r.to_string(),
            self.p.numer().to_string(),
            self.p.denom().to_string(),
            opt(self.disc.map(|d| d.numer().to_string())),
            opt(self.disc.map(|d| d.denom().to_string())),
            opt(self.bound.map(|b| b.to_string())),
            opt(self.mono.map(|d| d.0.to_string())),
            opt(self.mono.map(|d| d.1.to_string())),
            opt(self.iterations.map(|i| i.to_string())),
            self.wall_time_ms.to_string(),
            self.op.name().to_string(),
            self.status.clone(),
        ]
    }
}

/// Worker count: the configured value (or all cores), capped by
/// `LOWRANKDISC_THREADS` when it is set.
pub fn pool_size(configured: Option<usize>) -> usize {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let wanted = configured.unwrap_or(cores).max(1);
    match std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        Some(cap) if cap > 0 => wanted.min(cap),
        _ => wanted,
    }
}

/// Runs `f` on a dedicated pool of `threads` workers.
pub fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Computes every report row, in config order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let tasks: Vec<(GenSpec, u64, Op)> = cfg
        .gens
        .iter()
        .flat_map(|g| {
            cfg.seeds
                .iter()
                .flat_map(move |&s| cfg.ops.iter().map(move |&op| (g.seeded(s), s, op)))
        })
        .collect();
    with_pool(pool_size(cfg.threads), || {
        tasks
            .par_iter()
            .map(|(g, seed, op)| run_row(cfg, g, *seed, *op))
            .collect()
    })
}

fn run_row(cfg: &ExperimentConfig, gen: &GenSpec, seed: u64, op: Op) -> ReportRow {
    let start = Instant::now();
    let mut row = ReportRow {
        matrix_id: gen.id(),
        m: gen.m,
        n: gen.n,
        r: 0,
        p: Rational::from_integer(0),
        disc: None,
        bound: None,
        mono: None,
        iterations: None,
        wall_time_ms: 0,
        op,
        status: "ok".into(),
    };
    let m = match gen.build() {
        Ok(m) => m,
        Err(e) => {
            row.status = status_of(&e);
            return row;
        }
    };
    row.m = m.m();
    row.n = m.n();
    row.r = m.rank();
    row.p = m.density();
    if let Err(e) = fill_row(cfg, &m, seed, &mut row) {
        row.status = status_of(&e);
    }
    if cfg.timing {
        row.wall_time_ms = start.elapsed().as_millis() as u64;
    }
    row
}

fn status_of(e: &Error) -> String {
    let kind = match e {
        Error::Parse { .. } | Error::Json(_) => "parse",
        Error::Capacity { .. } => "capacity",
        Error::Regime(_) => "regime",
        Error::Stalled(_) => "stalled",
        _ => "error",
    };
    format!("{kind}: {e}")
}

fn fill_row(cfg: &ExperimentConfig, m: &BinaryMatrix, seed: u64, row: &mut ReportRow) -> Result<()> {
    let limit = cfg.oracle_limit;
    match row.op {
        Op::DiscExact => row.disc = Some(oracle::disc(m, limit)?),
        Op::Disc0 => row.disc = Some(oracle::disc0_plus(m, limit)?.value),
        Op::Bound => {
            let w = if m.is_square() {
                WeightedBinaryMatrix::unit(m.clone())
            } else {
                WeightedBinaryMatrix::square(m.clone())?
            };
            let scale = (w.rows() / m.m() as u64) as f64 * (w.cols() / m.n() as u64) as f64;
            let cert = lower_bound_disc(&w.merge_identical().matrix, &cfg.bound_config())?;
            row.bound = Some(cert.disc_value);
            if m.m().min(m.n()) <= limit {
                row.disc = Some(oracle::disc(m, limit)?);
                let plus = oracle::disc_plus(m, limit)?;
                let cap = SANDWICH_FACTOR * scale * ratio_f64(plus);
                let tol = cfg.bound_config().tol.num_tol(cap);
                if cert.disc_value > cap + tol {
                    row.status = "sandwich_violation".into();
                }
            }
        }
        Op::Mono => {
            let (res, trace) = find_mono(m, &cfg.decrement_config(seed))?;
            row.mono = Some(res.dims());
            row.iterations = Some(trace.iterations());
        }
    }
    Ok(())
}

fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Writes the header and all rows as CSV.
pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}
