//! Discrepancy of binary matrices and monochromatic rectangles in low-rank
//! binary matrices.
//!
//! * [`oracle`] computes `disc⁺`, `disc⁻`, `disc₀⁺` and half-sized optima
//!   exactly by subset enumeration on small matrices.
//! * [`spectral`] builds positive semidefinite witnesses from the spectrum of
//!   the bipartite symmetrization and certifies lower bounds on the
//!   semidefinite relaxation of discrepancy.
//! * [`decrement`] turns those bounds into a density-decrement loop that finds
//!   a large all-zero or all-one submatrix of a low-rank matrix.
//! * [`constructions`] and [`experiment`] generate matrices and run sweeps.
//!
//! ```
//! use lowrankdisc::{oracle, BinaryMatrix, Rational};
//!
//! let m = BinaryMatrix::identity(4);
//! assert_eq!(oracle::disc_plus(&m, oracle::DEFAULT_ORACLE_LIMIT)?, Rational::from_integer(1));
//! # Ok::<(), lowrankdisc::Error>(())
//! ```

pub mod cli;
pub mod constants;
pub mod constructions;
pub mod decrement;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod rank;
pub mod rng;
pub mod search;
pub mod spectral;
pub mod weighted;

pub use error::{Error, Result};
pub use matrix::{BinaryMatrix, DensityStats};
pub use weighted::WeightedBinaryMatrix;

/// Exact rational numbers used for densities and discrepancy values.
pub type Rational = num_rational::Ratio<i128>;

/// Formats a rational as `"num/den"`, always with an explicit denominator.
pub fn fmt_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn serialize_ratio<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_ratio(r))
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("`{s}` is not a rational of the form num/den"));
    let (num, den) = match s.trim().split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: i128 = num.parse().map_err(|_| bad())?;
    let den: i128 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Serde adapter for rationals written as `"num/den"` strings.
pub mod ratio_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        crate::serialize_ratio(r, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        crate::parse_ratio(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matrices.md")]
    mod matrices {}
    #[doc = include_str!("../../../book/src/discrepancy.md")]
    mod discrepancy {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/decrement.md")]
    mod decrement {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
