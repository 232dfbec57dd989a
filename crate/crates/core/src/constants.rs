//! Constants measured on this implementation.
//!
//! The asymptotic statements the crate exercises hide their constants; the
//! values below are the ones the test suite checks against.

/// Grothendieck's constant, rounded up.
pub const GROTHENDIECK_K: f64 = 1.7823;

/// `pdisc(M) ≤ SANDWICH_FACTOR · disc⁺(M)`: `2K` from Grothendieck times the
/// factor 12 relating `disc₀⁺` to `disc⁺`, rounded up.
pub const SANDWICH_FACTOR: f64 = 43.0;

/// `disc(M) ≥ C0_DISC · mn · min{p, √(p/r)}` for `p ≤ 1/2`.
pub const C0_DISC: f64 = 0.01;

/// Every successful decrement step lowers the density by at least
/// `C_DECREMENT · √p / √r`. Smallest ratio observed on the exact-step
/// corpus: 0.354.
pub const C_DECREMENT: f64 = 0.25;

/// At most `C_BAND · √r · 2^{−k/2}` decrement steps start with density in
/// `[2^{−k−1}, 2^{−k})`. Largest ratio observed on tightness traces: 1.414.
pub const C_BAND: f64 = 2.0;
