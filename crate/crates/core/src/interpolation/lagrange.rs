//! Barycentric Lagrange interpolation with log-normalised weights.

use crate::error::{Error, Result};
use crate::report::{DiagnosticReport, Verdict};
use crate::signed_log::SignedLog;

/// Barycentric weights `w_j = 1/Π_{l≠j}(x_j − x_l)` held as signed logs so
/// that a few thousand nodes neither overflow nor underflow.
#[derive(Debug, Clone)]
pub struct Barycentric {
    nodes: Vec<f64>,
    weights: Vec<SignedLog>,
}

impl Barycentric {
    pub fn new(nodes: &[f64]) -> Result<Self> {
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|a, b| nodes[*a].total_cmp(&nodes[*b]));
        for w in order.windows(2) {
            if nodes[w[0]] == nodes[w[1]] {
                return Err(Error::DegenerateNodes { i: w[0].min(w[1]), j: w[0].max(w[1]) });
            }
        }
        let weights = (0..nodes.len())
            .map(|j| {
                let mut ln = 0.0;
                let mut neg = false;
                for (l, x) in nodes.iter().enumerate() {
                    if l != j {
                        let diff = nodes[j] - x;
                        ln -= diff.abs().ln();
                        neg ^= diff < 0.0;
                    }
                }
                SignedLog::new(if neg { -1 } else { 1 }, ln)
            })
            .collect();
        Ok(Self { nodes: nodes.to_vec(), weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Second (true) barycentric form at `z`, with values given as signed logs.
    pub fn eval_log(&self, values: &[SignedLog], z: f64) -> SignedLog {
        assert_eq!(values.len(), self.nodes.len(), "one value per node");
        if let Some(j) = self.nodes.iter().position(|x| *x == z) {
            return values[j];
        }
        let mut num = SignedLog::ZERO;
        let mut den = SignedLog::ZERO;
        for ((x, w), v) in self.nodes.iter().zip(&self.weights).zip(values) {
            let t = *w / SignedLog::from_f64(z - x);
            num = num.add(&(t * *v));
            den = den.add(&t);
        }
        num / den
    }

    pub fn eval(&self, values: &[f64], z: f64) -> f64 {
        let v: Vec<SignedLog> = values.iter().map(|x| SignedLog::from_f64(*x)).collect();
        self.eval_log(&v, z).to_f64()
    }
}

/// Value at `z` of the polynomial through `(nodes[j], values[j])`.
pub fn lagrange_eval(nodes: &[f64], values: &[f64], z: f64) -> Result<f64> {
    if nodes.len() != values.len() {
        return Err(Error::Precondition("nodes and values differ in length".into()));
    }
    Ok(Barycentric::new(nodes)?.eval(values, z))
}

pub fn lagrange_eval_log(nodes: &[f64], values: &[SignedLog], z: f64) -> Result<SignedLog> {
    if nodes.len() != values.len() {
        return Err(Error::Precondition("nodes and values differ in length".into()));
    }
    Ok(Barycentric::new(nodes)?.eval_log(values, z))
}

/// The interpolation chain at `z0`:
/// `ln|Q(z0)| <= ln(n+1) + max_j ln|Q(x_j)| + max_j ln(|Π_{l≠j}(z0 − x_l)| / |Π_{l≠j}(x_j − x_l)|)`.
pub fn interpolation_chain_check(nodes: &[f64], values: &[SignedLog], z0: f64) -> Result<DiagnosticReport> {
    let bary = Barycentric::new(nodes)?;
    let q = bary.eval_log(values, z0);
    let n1 = nodes.len();
    let mut max_ratio = f64::NEG_INFINITY;
    for j in 0..n1 {
        let ln_i1: f64 = (0..n1).filter(|l| *l != j).map(|l| (z0 - nodes[l]).abs().ln()).sum();
        // ln|I2| = −ln|w_j|
        let ratio = ln_i1 + bary.weights[j].ln_abs;
        max_ratio = max_ratio.max(ratio);
    }
    let max_value = values.iter().map(|v| v.ln_abs).fold(f64::NEG_INFINITY, f64::max);
    let bound = (n1 as f64).ln() + max_value + max_ratio;
    let slack = 1e-9 * bound.abs().max(1.0);
    Ok(DiagnosticReport::new("interpolation_chain", q.ln_abs, bound, Verdict::from_bool(q.ln_abs <= bound + slack))
        .input("z0", z0)
        .input("nodes", n1 as u64)
        .input("max_log_value", max_value)
        .input("max_log_ratio", max_ratio))
}
