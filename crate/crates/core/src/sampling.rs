//! Deterministic sampling helpers shared by the searches, the sweeps, and
//! the test suites.
//!
//! Randomized runs are reproducible by construction: every consumer derives
//! its generator from a caller-supplied seed plus a stream index, so the
//! same `(seed, stream)` pair always yields the same draw sequence no matter
//! how work is split across threads.

use rand_core::{RngCore, SeedableRng};

pub use rand_chacha::ChaCha8Rng;

use crate::matrix::PositiveMatrix;
use crate::math::{exp, ln};

/// A generator for the given seed and stream index.
pub fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw from [0, 1) with 53 random bits.
pub fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Uniform draw from [lo, hi).
pub fn uniform(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

/// Log-uniform draw from [lo, hi), both bounds strictly positive.
pub fn log_uniform(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    exp(uniform(rng, ln(lo), ln(hi)))
}

/// A random m×n positive matrix with log-uniform entries in [lo, hi).
///
/// Panics when the shape is degenerate or the range is not positive; these
/// are programmer errors in test or search code, not runtime conditions.
pub fn random_matrix(rng: &mut impl RngCore, rows: usize, cols: usize, lo: f64, hi: f64) -> PositiveMatrix {
    assert!(rows > 0 && cols > 0 && lo > 0.0 && hi > lo);
    let entries = (0..rows * cols).map(|_| log_uniform(rng, lo, hi)).collect();
    PositiveMatrix::new(rows, cols, entries).expect("positive draws form a valid matrix")
}
