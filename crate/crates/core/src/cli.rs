//! The `lowrankdisc` command line tool.
//!
//! Every subcommand is a thin wrapper over library calls. Exit codes: 0 on
//! success, 2 for unparsable input, 3 when a size limit is exceeded, 4 when
//! the input is outside the regime of the spectral bound, 5 when the density
//! decrement stalls, 1 for anything else.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::constructions::{GenKind, GenSpec};
use crate::decrement::{find_mono, DecrementConfig};
use crate::error::{Error, Result};
use crate::experiment::{pool_size, run_experiment, with_pool, write_csv, ExperimentConfig};
use crate::oracle::{best_rect, RectangleJson, Sign, DEFAULT_ORACLE_LIMIT};
use crate::search::heuristic_rect;
use crate::spectral::{lower_bound_disc, BoundConfig, CertificateJson, Tolerances};
use crate::weighted::WeightedBinaryMatrix;
use crate::{fmt_ratio, parse_ratio, BinaryMatrix};

#[derive(Debug, Parser)]
#[command(
    name = "lowrankdisc",
    version,
    about = "Discrepancy bounds and monochromatic rectangles for binary matrices"
)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random restarts or rounding hyperplanes.
    #[arg(long, global = true, default_value_t = 64)]
    pub trials: u64,
    /// Largest dimension solved by exhaustive enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_LIMIT)]
    pub oracle_limit: usize,
    /// Use local search instead of enumeration (results are not certified optimal).
    #[arg(long, global = true)]
    pub heuristic: bool,
    /// Relative eigensolver tolerance.
    #[arg(long, global = true)]
    pub tol_eig: Option<f64>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact (or heuristic) positive and negative discrepancy with optimal rectangles.
    Disc { file: PathBuf },
    /// Spectral lower-bound certificate.
    Bound { file: PathBuf },
    /// Monochromatic submatrix by density decrement, with the step trace.
    Mono { file: PathBuf },
    /// Run an experiment config and write a CSV report.
    Experiment { config: PathBuf },
    /// Print a generated matrix in the text format.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        r: usize,
        #[arg(long, default_value = "1/2")]
        p: String,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        n: usize,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Normal output goes to `out` unless `--out` is given.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    let result = match &cli.out {
        Some(path) => fs::File::create(path)
            .map_err(Error::from)
            .and_then(|mut f| execute(&cli, &mut f, err)),
        None => execute(&cli, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            if let Error::Stalled(report) = &e {
                let _ = writeln!(err, "error: decrement stalled at {}", report.describe());
            } else {
                let _ = writeln!(err, "error: {e}");
            }
            e.exit_code()
        }
    }
}

fn tolerances(cli: &Cli) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(t) = cli.tol_eig {
        tol.eig_rel = t;
    }
    tol
}

fn read_matrix(path: &Path) -> Result<BinaryMatrix> {
    fs::read_to_string(path)?.parse()
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?)?;
    Ok(())
}

#[derive(Serialize)]
struct DiscReport {
    p: String,
    exact: bool,
    disc_plus: RectangleJson,
    disc_minus: RectangleJson,
    disc: String,
}

#[derive(Serialize)]
struct BoundReport<'a> {
    n: u64,
    p: String,
    #[serde(flatten)]
    certificate: CertificateJson<'a>,
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Disc { file } => {
            let m = read_matrix(file)?;
            let (plus, minus) = if cli.heuristic {
                (
                    heuristic_rect(&m, Sign::Plus, cli.trials, cli.seed),
                    heuristic_rect(&m, Sign::Minus, cli.trials, cli.seed),
                )
            } else {
                (
                    best_rect(&m, Sign::Plus, cli.oracle_limit)?,
                    best_rect(&m, Sign::Minus, cli.oracle_limit)?,
                )
            };
            let disc = plus.value.max(-minus.value);
            emit(
                out,
                &DiscReport {
                    p: fmt_ratio(&m.density()),
                    exact: !cli.heuristic,
                    disc_plus: plus.to_json(Sign::Plus),
                    disc_minus: minus.to_json(Sign::Minus),
                    disc: fmt_ratio(&disc),
                },
            )?;
        }
        Command::Bound { file } => {
            let m = read_matrix(file)?;
            let w = if m.is_square() {
                WeightedBinaryMatrix::unit(m)
            } else {
                WeightedBinaryMatrix::square(m)?
            };
            let cfg = BoundConfig {
                tol: tolerances(cli),
                ..BoundConfig::default()
            };
            let cert = lower_bound_disc(&w.merge_identical().matrix, &cfg)?;
            emit(
                out,
                &BoundReport {
                    n: w.rows(),
                    p: fmt_ratio(&w.density()),
                    certificate: cert.to_json(),
                },
            )?;
        }
        Command::Mono { file } => {
            let m = read_matrix(file)?;
            let cfg = DecrementConfig {
                oracle_limit: cli.oracle_limit,
                trials: cli.trials,
                seed: cli.seed,
                bound: BoundConfig {
                    tol: tolerances(cli),
                    ..BoundConfig::default()
                },
                ..DecrementConfig::default()
            };
            match with_pool(pool_size(None), || find_mono(&m, &cfg))? {
                Ok((res, trace)) => {
                    for line in trace.json_lines() {
                        writeln!(out, "{line}")?;
                    }
                    writeln!(out, "{}", res.json_line())?;
                }
                Err(Error::Stalled(report)) => {
                    for line in report.trace.json_lines() {
                        writeln!(out, "{line}")?;
                    }
                    let best = report.best.as_ref();
                    emit(
                        out,
                        &serde_json::json!({
                            "stalled": true,
                            "step": report.step,
                            "n_i": report.n,
                            "p": fmt_ratio(&report.density),
                            "best_disc": report.best_disc.as_ref().map(fmt_ratio),
                            "best_rows": best.map(|b| &b.rows),
                            "best_cols": best.map(|b| &b.cols),
                        }),
                    )?;
                    return Err(Error::Stalled(report));
                }
                Err(e) => return Err(e),
            }
        }
        Command::Experiment { config } => {
            let mut cfg = ExperimentConfig::from_json(&fs::read_to_string(config)?)?;
            cfg.oracle_limit = cli.oracle_limit;
            if let Some(t) = cli.tol_eig {
                cfg.tolerances.get_or_insert_with(Tolerances::default).eig_rel = t;
            }
            let rows = run_experiment(&cfg)?;
            match (&cli.out, &cfg.output_path) {
                (None, Some(path)) => write_csv(&rows, fs::File::create(path)?)?,
                _ => write_csv(&rows, &mut *out)?,
            }
            let failed = rows.iter().filter(|r| !r.ok()).count();
            if failed > 0 {
                writeln!(err, "{failed} of {} rows did not complete", rows.len())?;
            }
            if failed == rows.len() {
                return Ok(1);
            }
        }
        Command::Gen { kind, r, p, m, n } => {
            let spec = GenSpec {
                kind: *kind,
                r: *r,
                p: parse_ratio(p)?,
                m: *m,
                n: *n,
                seed: cli.seed,
            };
            write!(out, "{}", spec.build()?)?;
        }
    }
    Ok(0)
}
