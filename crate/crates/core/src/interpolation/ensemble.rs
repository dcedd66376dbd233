//! Seeded random polynomial ensemble for sublevel-measure statistics.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::interpolation::sublevel::{sublevel_measure, ChebyshevPoly};

/// Points used to estimate the sup norm on `[−1, 1]`.
pub const SUP_GRID: usize = 10_000;

/// Degree-`n` polynomial with independent standard normal Chebyshev
/// coefficients, scaled so that its maximum modulus on a uniform
/// `SUP_GRID`-point grid of `[−1, 1]` is 1. Trial `t` of root seed `s` uses
/// ChaCha8 stream `t`, so results do not depend on scheduling.
pub fn random_chebyshev_poly(n: usize, root_seed: u64, trial: u64) -> ChebyshevPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(root_seed);
    rng.set_stream(trial.wrapping_mul(1024).wrapping_add(n as u64));
    let coeffs: Vec<f64> = (0..=n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut p = ChebyshevPoly { coeffs };
    let sup = (0..SUP_GRID)
        .map(|i| p.eval(-1.0 + 2.0 * i as f64 / (SUP_GRID - 1) as f64).abs())
        .fold(0.0, f64::max);
    for c in &mut p.coeffs {
        *c /= sup;
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRow {
    pub n: usize,
    pub trial: u64,
    pub measure: f64,
}

/// Sublevel measures `|{θ : |Q(cos θ)| < b^n}|` over the ensemble.
pub fn sublevel_ensemble(degrees: &[usize], trials: u64, b: f64, root_seed: u64, grid: usize) -> Vec<EnsembleRow> {
    let jobs: Vec<(usize, u64)> = degrees.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    jobs.par_iter()
        .map(|&(n, trial)| {
            let q = random_chebyshev_poly(n, root_seed, trial);
            EnsembleRow { n, trial, measure: sublevel_measure(&q, b, n, grid) }
        })
        .collect()
}
