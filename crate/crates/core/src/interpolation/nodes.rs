//! Interpolation phases drawn from two pieces of a rotation orbit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::orbit_point;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeFamily {
    pub theta: f64,
    pub omega: f64,
    pub k: usize,
    pub x1: i64,
    pub d: i64,
    /// `θ_0, …, θ_k` reduced to `[0, 1)`.
    pub thetas: Vec<f64>,
    /// Orbit offsets `i_j` with `θ_j = θ + (x1 + (k−1)/2 + i_j)ω`.
    pub indices: Vec<i64>,
}

impl NodeFamily {
    /// `cos 2πθ_j`.
    pub fn cosines(&self) -> Vec<f64> {
        self.thetas.iter().map(|t| (2.0 * std::f64::consts::PI * t).cos()).collect()
    }
}

/// The first `⌊(k+1)/2⌋` phases follow the orbit from `x1`, the rest from
/// `x2 = x1 + d`; both blocks are shifted by `(k−1)/2` steps.
pub fn theta_nodes(theta: f64, omega: f64, k: usize, x1: i64, d: i64) -> Result<NodeFamily> {
    if 2 * d <= k as i64 + 1 {
        return Err(Error::Precondition(format!("block separation d = {d} must exceed (k+1)/2 for k = {k}")));
    }
    let h = k.div_ceil(2);
    let indices: Vec<i64> = (0..=k)
        .map(|j| if j < h { j as i64 } else { d + (j - h) as i64 })
        .collect();
    let thetas = indices
        .iter()
        .map(|i| {
            let mult = x1 as f64 + (k as f64 - 1.0) / 2.0 + *i as f64;
            let f = orbit_point(theta, mult, omega).frac().to_f64();
            if f >= 1.0 {
                0.0
            } else {
                f
            }
        })
        .collect();
    Ok(NodeFamily { theta, omega, k, x1, d, thetas, indices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::GOLDEN_OMEGA;

    #[test]
    fn counting() {
        let n = theta_nodes(0.3, GOLDEN_OMEGA, 3, 0, 3).unwrap();
        assert_eq!(n.thetas.len(), 4);
        assert_eq!(n.indices, vec![0, 1, 3, 4]);
        assert!(theta_nodes(0.3, GOLDEN_OMEGA, 3, 0, 2).is_err());
    }

    #[test]
    fn differences_are_orbit_multiples() {
        let n = theta_nodes(0.3, GOLDEN_OMEGA, 40, 5, 60).unwrap();
        for a in 0..n.thetas.len() {
            for b in (a + 1)..n.thetas.len() {
                let m = (n.indices[b] - n.indices[a]) as f64;
                assert!(m != 0.0);
                let diff = n.thetas[b] - n.thetas[a] - m * GOLDEN_OMEGA;
                let dist = (diff - diff.round()).abs();
                assert!(dist < 1e-9, "{a},{b}");
                assert!(n.thetas[a] != n.thetas[b]);
            }
        }
    }
}
