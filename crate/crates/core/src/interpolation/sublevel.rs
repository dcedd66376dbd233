//! Measure of sublevel sets `{θ ∈ (0, π) : |Q(cos θ)| < b^n}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::operator::QkPolynomial;

/// A real polynomial evaluated as `ln|Q(z)|`.
pub trait LogAbsPoly: Sync {
    fn degree(&self) -> usize;
    fn ln_abs(&self, z: f64) -> f64;
}

/// `Q(z) = Σ c_m T_m(z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevPoly {
    pub coeffs: Vec<f64>,
}

impl ChebyshevPoly {
    /// Clenshaw recurrence.
    pub fn eval(&self, z: f64) -> f64 {
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * z * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        z * b1 - b2 + self.coeffs.first().copied().unwrap_or(0.0)
    }
}

impl LogAbsPoly for ChebyshevPoly {
    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
    fn ln_abs(&self, z: f64) -> f64 {
        self.eval(z).abs().ln()
    }
}

/// `Q(z) = Σ c_j z^j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonomialPoly {
    pub coeffs: Vec<f64>,
}

impl MonomialPoly {
    pub fn power(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self { coeffs }
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c)
    }
}

impl LogAbsPoly for MonomialPoly {
    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
    fn ln_abs(&self, z: f64) -> f64 {
        self.eval(z).abs().ln()
    }
}

impl LogAbsPoly for QkPolynomial {
    fn degree(&self) -> usize {
        self.degree
    }
    fn ln_abs(&self, z: f64) -> f64 {
        self.eval(z).ln_abs
    }
}

const BISECTIONS: usize = 48;

fn below(q: &dyn LogAbsPoly, threshold: f64, theta: f64) -> bool {
    q.ln_abs(theta.cos()) < threshold
}

/// Sublevel set as a list of `θ`-intervals in `(0, π)`.
///
/// The grid has `max(grid, 100n)` cells; a cell whose endpoints disagree is
/// split at the crossing located by bisection.
pub fn sublevel_set(q: &dyn LogAbsPoly, b: f64, n: usize, grid: usize) -> Vec<(f64, f64)> {
    assert!(b > 0.0, "sublevel threshold needs b > 0");
    let threshold = n as f64 * b.ln();
    let cells = grid.max(100 * n).max(1);
    let h = PI / cells as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<f64> = None;
    let mut prev = below(q, threshold, 0.0);
    if prev {
        open = Some(0.0);
    }
    for i in 1..=cells {
        let t = if i == cells { PI } else { i as f64 * h };
        let cur = below(q, threshold, t);
        if cur != prev {
            let (mut lo, mut hi) = (t - h, t);
            for _ in 0..BISECTIONS {
                let mid = 0.5 * (lo + hi);
                if below(q, threshold, mid) == prev {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let cross = 0.5 * (lo + hi);
            if cur {
                open = Some(cross);
            } else if let Some(start) = open.take() {
                out.push((start, cross));
            }
        }
        prev = cur;
    }
    if let Some(start) = open {
        out.push((start, PI));
    }
    out
}

/// `|{θ ∈ (0, π) : |Q(cos θ)| < b^n}|`.
pub fn sublevel_measure(q: &dyn LogAbsPoly, b: f64, n: usize, grid: usize) -> f64 {
    sublevel_set(q, b, n, grid).iter().map(|(a, c)| c - a).sum()
}
