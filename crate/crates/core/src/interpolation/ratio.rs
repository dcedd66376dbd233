//! Ratio of the numerator and denominator products of a Lagrange basis
//! polynomial built on cosine nodes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interpolation::nodes::NodeFamily;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBound {
    pub z: f64,
    /// Node index attaining the largest ratio.
    pub j: usize,
    /// `ln|Π_{ℓ≠j}(z − cos 2πθ_ℓ)|`.
    pub log_i1: f64,
    /// `ln|Π_{ℓ≠j}(cos 2πθ_j − cos 2πθ_ℓ)|`.
    pub log_i2: f64,
    pub ratio_log: f64,
    /// `ln(k+1) + values_logmax + ratio_log`, a bound on `ln|Q(z)|`.
    pub log_q_bound: f64,
}

impl RatioBound {
    pub fn within(&self, k: usize, eps: f64) -> bool {
        self.ratio_log <= k as f64 * eps
    }
}

fn denominators(c: &[f64]) -> Result<Vec<f64>> {
    let n = c.len();
    (0..n)
        .map(|j| {
            let mut s = 0.0;
            for l in 0..n {
                if l != j {
                    let g = (c[j] - c[l]).abs();
                    if g == 0.0 {
                        return Err(Error::DegenerateNodes { i: j.min(l), j: j.max(l) });
                    }
                    s += g.ln();
                }
            }
            Ok(s)
        })
        .collect()
}

fn worst_at(c: &[f64], log_i2: &[f64], z: f64) -> (usize, f64, f64) {
    let logs: Vec<f64> = c.iter().map(|x| (z - x).abs().ln()).collect();
    let zeros = logs.iter().filter(|v| v.is_infinite()).count();
    let finite_total: f64 = logs.iter().filter(|v| v.is_finite()).sum();
    let mut best = (0usize, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for j in 0..c.len() {
        let log_i1 = match (zeros, logs[j].is_infinite()) {
            (0, _) => finite_total - logs[j],
            (1, true) => finite_total,
            _ => f64::NEG_INFINITY,
        };
        let r = log_i1 - log_i2[j];
        if r > best.2 || best.2 == f64::NEG_INFINITY && j == 0 {
            best = (j, log_i1, r);
        }
    }
    best
}

/// Worst-node ratio `|I_1|/|I_2|` at `z`, in logs.
pub fn interpolation_ratio(nodes: &NodeFamily, values_logmax: f64, z: f64) -> Result<RatioBound> {
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::Domain(format!("z must lie in [-1, 1], got {z}")));
    }
    let c = nodes.cosines();
    let log_i2 = denominators(&c)?;
    let (j, log_i1, ratio_log) = worst_at(&c, &log_i2, z);
    Ok(RatioBound {
        z,
        j,
        log_i1,
        log_i2: log_i2[j],
        ratio_log,
        log_q_bound: ((c.len()) as f64).ln() + values_logmax + ratio_log,
    })
}

/// Largest worst-node ratio over a uniform grid of `z` in `[−1, 1]`.
pub fn max_ratio_over_z(nodes: &NodeFamily, values_logmax: f64, z_grid: usize) -> Result<RatioBound> {
    let c = nodes.cosines();
    let log_i2 = denominators(&c)?;
    let n = z_grid.max(2);
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let z = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            let (j, log_i1, r) = worst_at(&c, &log_i2, z);
            (z, j, log_i1, r)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(None::<(f64, usize, f64, f64)>, |acc, cur| match acc {
            Some(a) if a.3 >= cur.3 => Some(a),
            _ => Some(cur),
        })
        .expect("nonempty grid");
    let (z, j, log_i1, ratio_log) = best;
    Ok(RatioBound {
        z,
        j,
        log_i1,
        log_i2: log_i2[j],
        ratio_log,
        log_q_bound: (c.len() as f64).ln() + values_logmax + ratio_log,
    })
}
