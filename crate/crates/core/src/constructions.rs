//! Matrix generators: fixtures, i.i.d. random matrices and random blow-ups.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};
use crate::weighted::WeightedBinaryMatrix;
use crate::{fmt_ratio, BinaryMatrix, Rational};

/// An `m × n` matrix with i.i.d. entries equal to one with probability `p`.
/// Entry `(i, j)` is one when a uniform draw from `0..den` falls below `num`,
/// so `p = 0` and `p = 1` are exact.
pub fn random_binary_rect(m: usize, n: usize, p: Rational, seed: u64) -> Result<BinaryMatrix> {
    check_probability(p)?;
    let (num, den) = (*p.numer(), *p.denom());
    let mut rng = stream(seed, Purpose::Generate, 0, 0);
    Ok(BinaryMatrix::from_fn(m, n, |_, _| rng.random_range(0..den) < num))
}

/// A random `r × r` matrix with density `p` in expectation.
pub fn random_binary(r: usize, p: Rational, seed: u64) -> Result<BinaryMatrix> {
    random_binary_rect(r, r, p, seed)
}

fn check_probability(p: Rational) -> Result<()> {
    if p < Rational::from_integer(0) || p > Rational::from_integer(1) {
        return Err(Error::InvalidInput(format!(
            "probability {} outside [0, 1]",
            fmt_ratio(&p)
        )));
    }
    Ok(())
}

/// `blow_up(random_binary(r, p, seed), m/r, n/r)`: rank at most `r` and
/// `disc(M) = (mn/r²) · disc(R)`.
pub fn tightness_matrix(r: usize, p: Rational, m: usize, n: usize, seed: u64) -> Result<BinaryMatrix> {
    if r == 0 || !m.is_multiple_of(r) || !n.is_multiple_of(r) {
        return Err(Error::InvalidInput(format!(
            "r = {r} must divide both m = {m} and n = {n}"
        )));
    }
    random_binary(r, p, seed)?.blow_up(m / r, n / r)
}

/// Multiplicities `⌈total/parts⌉` for the first `total mod parts` classes and
/// `⌊total/parts⌋` for the rest.
fn balanced(total: usize, parts: usize) -> Vec<u64> {
    (0..parts)
        .map(|i| (total / parts + usize::from(i < total % parts)) as u64)
        .collect()
}

/// A random `r × r` matrix blown up to `m × n` with multiplicities as equal
/// as possible. Coincides with [`tightness_matrix`] when `r` divides both.
pub fn blowup_random(r: usize, p: Rational, m: usize, n: usize, seed: u64) -> Result<BinaryMatrix> {
    if r == 0 || m < r || n < r {
        return Err(Error::InvalidInput(format!("need 1 ≤ r = {r} ≤ min(m = {m}, n = {n})")));
    }
    let base = random_binary(r, p, seed)?;
    WeightedBinaryMatrix::new(base, balanced(m, r), balanced(n, r))?.materialize()
}

/// `J − I`.
pub fn matching_complement(n: usize) -> BinaryMatrix {
    BinaryMatrix::identity(n).complement()
}

/// Named fixtures: `identity(n)`, `all_ones(m,n)`, `all_zeros(m,n)`,
/// `matching_complement(n)`.
pub fn fixtures(name: &str) -> Result<BinaryMatrix> {
    let unknown = || Error::UnknownFixture(name.to_string());
    let (head, rest) = name.trim().split_once('(').ok_or_else(unknown)?;
    let args: Vec<usize> = rest
        .strip_suffix(')')
        .ok_or_else(unknown)?
        .split(',')
        .map(|a| a.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| unknown())?;
    if args.contains(&0) {
        return Err(Error::InvalidInput(format!("fixture `{name}` has a zero dimension")));
    }
    match (head.trim(), args.as_slice()) {
        ("identity", &[n]) => Ok(BinaryMatrix::identity(n)),
        ("all_ones", &[m, n]) => Ok(BinaryMatrix::all_ones(m, n)),
        ("all_zeros", &[m, n]) => Ok(BinaryMatrix::zeros(m, n)),
        ("matching_complement", &[n]) => Ok(matching_complement(n)),
        _ => Err(unknown()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum GenKind {
    Identity,
    AllOnes,
    AllZeros,
    MatchingComplement,
    /// i.i.d. `m × n`.
    RandomDense,
    /// Random `r × r` blown up to `m × n`.
    BlowupRandom,
}

/// A generator description, accepted as CLI flags and in experiment configs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    #[serde(default)]
    pub r: usize,
    #[serde(default = "half", with = "crate::ratio_string")]
    pub p: Rational,
    #[serde(default)]
    pub m: usize,
    #[serde(default)]
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

fn half() -> Rational {
    Rational::new(1, 2)
}

impl GenSpec {
    fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    fn is_random(&self) -> bool {
        matches!(self.kind, GenKind::RandomDense | GenKind::BlowupRandom)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        let n_only = matches!(self.kind, GenKind::Identity | GenKind::MatchingComplement);
        if self.n == 0 || (!n_only && self.m == 0) {
            return Err(Error::InvalidInput(format!(
                "{}: dimensions must be at least 1",
                self.id()
            )));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<BinaryMatrix> {
        self.validate()?;
        match self.kind {
            GenKind::Identity => Ok(BinaryMatrix::identity(self.n)),
            GenKind::AllOnes => Ok(BinaryMatrix::all_ones(self.m, self.n)),
            GenKind::AllZeros => Ok(BinaryMatrix::zeros(self.m, self.n)),
            GenKind::MatchingComplement => Ok(matching_complement(self.n)),
            GenKind::RandomDense => random_binary_rect(self.m, self.n, self.p, self.seed),
            GenKind::BlowupRandom => blowup_random(self.r, self.p, self.m, self.n, self.seed),
        }
    }

    /// Stable identifier used as `matrix_id` in reports.
    pub fn id(&self) -> String {
        match self.kind {
            GenKind::Identity => format!("identity({})", self.n),
            GenKind::AllOnes => format!("all_ones({},{})", self.m, self.n),
            GenKind::AllZeros => format!("all_zeros({},{})", self.m, self.n),
            GenKind::MatchingComplement => format!("matching_complement({})", self.n),
            GenKind::RandomDense => format!(
                "random_dense({},{},p={},seed={})",
                self.m,
                self.n,
                fmt_ratio(&self.p),
                self.seed
            ),
            GenKind::BlowupRandom => format!(
                "blowup_random(r={},{},{},p={},seed={})",
                self.r,
                self.m,
                self.n,
                fmt_ratio(&self.p),
                self.seed
            ),
        }
    }

    /// Seeds only matter for random kinds; fixed fixtures ignore them.
    pub fn seeded(&self, seed: u64) -> Self {
        if self.is_random() {
            self.with_seed(seed)
        } else {
            self.clone()
        }
    }
}
