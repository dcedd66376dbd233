//! Shared fixtures for the kernel benchmarks.

use amo_core::{IntervalZ, OperatorParams, GOLDEN_OMEGA};

/// Supercritical almost Mathieu operator at the default phase.
pub fn supercritical() -> OperatorParams {
    OperatorParams::almost_mathieu(3.0, GOLDEN_OMEGA, 0.3)
}

/// An interval of `k` sites centred at the origin.
pub fn centred_interval(k: usize) -> IntervalZ {
    IntervalZ::with_len(-(k as i64) / 2, k)
}
