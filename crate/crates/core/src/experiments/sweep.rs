//! Observables across coupling constants: decay slopes, participation
//! ratios and Lyapunov exponents on an energy grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::experiments::spectrum::{box_eigenproblem, line_fit, EigenPair};
use crate::lyapunov::lyapunov_estimate;
use crate::operator::OperatorParams;
use crate::signed_log::log_sum_exp;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_half: usize,
    /// Energy window whose eigenvectors enter the slope and IPR averages.
    pub window: (f64, f64),
    /// Distances from each eigenvector's centre used in the slope fit.
    pub fit_range: (usize, usize),
    pub lyapunov_k: usize,
    pub theta_grid: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { n_half: 500, window: (-0.5, 0.5), fit_range: (20, 200), lyapunov_k: 1024, theta_grid: 64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub energy: f64,
    pub lyapunov: f64,
    pub mean_abs_slope: f64,
    pub mean_ipr: f64,
    pub eigenvectors: usize,
}

pub const SWEEP_HEADER: [&str; 6] = ["lambda", "energy", "lyapunov", "mean_abs_slope", "mean_ipr", "eigenvectors"];

impl SweepRow {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.lambda, self.energy, self.lyapunov, self.mean_abs_slope, self.mean_ipr, self.eigenvectors as f64]
    }
}

/// Two-sided slope of `½ ln(Ψ²(n) + Ψ²(n+1))` against the distance from the
/// vector's own centre; distances beyond the box are skipped.
pub fn centred_slope(pair: &EigenPair, x1: i64, fit_range: (usize, usize)) -> Option<f64> {
    let c = pair.center - x1;
    let len = pair.ln_abs.len() as i64;
    let mut slopes = Vec::new();
    for dir in [-1i64, 1] {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for m in fit_range.0..=fit_range.1 {
            let i = c + dir * m as i64;
            if i >= 0 && i + 1 < len {
                let i = i as usize;
                xs.push(m as f64);
                ys.push(0.5 * log_sum_exp(&[2.0 * pair.ln_abs[i], 2.0 * pair.ln_abs[i + 1]]));
            }
        }
        if xs.len() >= 10 {
            slopes.push(line_fit(&xs, &ys).0);
        }
    }
    if slopes.is_empty() {
        None
    } else {
        Some(slopes.iter().sum::<f64>() / slopes.len() as f64)
    }
}

/// One row per `(λ, E)`; per-λ eigenvector statistics repeat along the grid.
pub fn phase_sweep(
    omega: f64,
    theta: f64,
    lambdas: &[f64],
    energies: &[f64],
    cfg: &SweepConfig,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(lambdas.len() * energies.len());
    for &lambda in lambdas {
        let params = OperatorParams::almost_mathieu(lambda, omega, theta);
        let spectrum = box_eigenproblem(&params, cfg.n_half, Some(cfg.window))?;
        let slopes: Vec<f64> = spectrum
            .pairs
            .iter()
            .filter_map(|p| centred_slope(p, spectrum.interval.x1, cfg.fit_range))
            .collect();
        let count = spectrum.pairs.len();
        let mean_abs_slope = if slopes.is_empty() {
            f64::NAN
        } else {
            slopes.iter().map(|s| s.abs()).sum::<f64>() / slopes.len() as f64
        };
        let mean_ipr = if count == 0 {
            f64::NAN
        } else {
            spectrum.pairs.iter().map(|p| p.ipr).sum::<f64>() / count as f64
        };
        let gammas: Vec<f64> = energies
            .par_iter()
            .map(|&e| lyapunov_estimate(&params, e, cfg.lyapunov_k, cfg.theta_grid).gamma)
            .collect();
        for (&energy, lyapunov) in energies.iter().zip(gammas) {
            rows.push(SweepRow { lambda, energy, lyapunov, mean_abs_slope, mean_ipr, eigenvectors: count });
        }
    }
    Ok(rows)
}
