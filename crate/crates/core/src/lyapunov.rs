//! Lyapunov exponents from transfer-matrix growth, the set `K` of good
//! scales, and the uniform upper bound on `|P_n|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::operator::{det_pk_at, transfer_log_norms, OperatorParams};
use crate::report::{DiagnosticReport, Verdict};

pub const DEFAULT_THETA_GRID: usize = 1024;
pub const LADDER_START: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub energy: f64,
    pub k_used: usize,
    pub theta_grid: usize,
    /// Infimum of the ladder averages.
    pub gamma: f64,
    /// `(k_i, (1/k_i)·mean_θ ln‖M_{k_i}(θ)‖)` along the doubling ladder.
    pub gamma_sequence: Vec<(usize, f64)>,
}

/// `64, 128, …` up to `k`, with `k` itself appended when it is off the ladder.
pub fn doubling_ladder(k: usize) -> Vec<usize> {
    if k <= LADDER_START {
        return vec![k.max(1)];
    }
    let mut out = Vec::new();
    let mut s = LADDER_START;
    while s <= k {
        out.push(s);
        s *= 2;
    }
    if *out.last().expect("nonempty") != k {
        out.push(k);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Spectral,
    Frobenius,
}

/// Uniform-grid average of `ln‖M_k(θ, E)‖ / k` along the doubling ladder to `k`.
pub fn lyapunov_estimate(params: &OperatorParams, e: f64, k: usize, theta_grid: usize) -> LyapunovEstimate {
    lyapunov_estimate_with_norm(params, e, k, theta_grid, NormKind::Spectral)
}

pub fn lyapunov_estimate_with_norm(
    params: &OperatorParams,
    e: f64,
    k: usize,
    theta_grid: usize,
    norm: NormKind,
) -> LyapunovEstimate {
    assert!(k >= 1, "lyapunov_estimate needs k >= 1");
    assert!(theta_grid >= 1, "theta grid must be nonempty");
    let ladder = doubling_ladder(k);
    let frob = norm == NormKind::Frobenius;
    let per_theta: Vec<Vec<f64>> = (0..theta_grid)
        .into_par_iter()
        .map(|j| transfer_log_norms(params, e, j as f64 / theta_grid as f64, &ladder, frob))
        .collect();
    // fixed-order reduction keeps the result independent of the thread count
    let mut sums = vec![0.0; ladder.len()];
    for row in &per_theta {
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    let gamma_sequence: Vec<(usize, f64)> = ladder
        .iter()
        .zip(&sums)
        .map(|(&ki, s)| (ki, s / (theta_grid as f64 * ki as f64)))
        .collect();
    let gamma = gamma_sequence.iter().map(|(_, g)| *g).fold(f64::INFINITY, f64::min);
    LyapunovEstimate { energy: e, k_used: k, theta_grid, gamma, gamma_sequence }
}

/// Finite-`k` proxy for `limsup ln‖M_k(θ)‖ / k` at a single phase: the maximum
/// over ladder entries with `k_i >= k/4`.
pub fn upper_lyapunov(params: &OperatorParams, e: f64, theta: f64, k: usize) -> f64 {
    assert!(k >= 1);
    let ladder = doubling_ladder(k);
    let norms = transfer_log_norms(params, e, theta, &ladder, false);
    ladder
        .iter()
        .zip(&norms)
        .filter(|(ki, _)| **ki * 4 >= k)
        .map(|(ki, ln)| ln / *ki as f64)
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMembership {
    pub k: usize,
    pub max_log_pk: f64,
    pub argmax_theta: f64,
    /// `kγ − ln√2`.
    pub threshold: f64,
    pub member: bool,
}

fn ln_abs_pk(params: &OperatorParams, e: f64, theta: f64, k: usize) -> f64 {
    det_pk_at(params, e, theta, k).ln_abs
}

/// Maximise `ln|P_k(θ)|` over `[0, 1)`: uniform grid, then golden-section
/// refinement on the two cells around the grid maximiser.
pub fn max_log_pk(params: &OperatorParams, e: f64, k: usize, theta_grid: usize) -> (f64, f64) {
    let h = 1.0 / theta_grid as f64;
    let vals: Vec<f64> = (0..theta_grid)
        .into_par_iter()
        .map(|j| ln_abs_pk(params, e, j as f64 * h, k))
        .collect();
    let (jbest, vbest) = vals
        .iter()
        .enumerate()
        .fold((0usize, f64::NEG_INFINITY), |acc, (j, v)| if *v > acc.1 { (j, *v) } else { acc });
    let (mut a, mut b) = ((jbest as f64 - 1.0) * h, (jbest as f64 + 1.0) * h);
    let inv_phi = 0.618_033_988_749_894_8;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = ln_abs_pk(params, e, c, k);
    let mut fd = ln_abs_pk(params, e, d, k);
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = ln_abs_pk(params, e, c, k);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = ln_abs_pk(params, e, d, k);
        }
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    let (t_ref, v_ref) = if fc > fd { (c, fc) } else { (d, fd) };
    if v_ref > vbest {
        (v_ref, t_ref.rem_euclid(1.0))
    } else {
        (vbest, jbest as f64 * h)
    }
}

/// Is `k` in `K = {k : ∃θ, |P_k(θ)| >= e^{kγ}/√2}`?
pub fn k_set_member(params: &OperatorParams, e: f64, k: usize, theta_grid: usize, gamma: f64) -> KMembership {
    let (max_log_pk, argmax_theta) = max_log_pk(params, e, k, theta_grid);
    let threshold = k as f64 * gamma - 0.5 * std::f64::consts::LN_2;
    KMembership { k, max_log_pk, argmax_theta, threshold, member: max_log_pk >= threshold }
}

/// `max_θ (1/n) ln|P_n(θ)|` on a grid against `γ(E) + ε`.
///
/// The bound only constrains large `n`; a violation is reported with a
/// `BelowRegime` verdict rather than as a failure.
pub fn uniform_pk_bound_check(
    params: &OperatorParams,
    e: f64,
    eps: f64,
    n: usize,
    theta_grid: usize,
) -> DiagnosticReport {
    assert!(n >= 1);
    let gamma = lyapunov_estimate(params, e, n.max(4096), theta_grid.max(64)).gamma;
    uniform_pk_bound_check_with_gamma(params, e, eps, n, theta_grid, gamma)
}

pub fn uniform_pk_bound_check_with_gamma(
    params: &OperatorParams,
    e: f64,
    eps: f64,
    n: usize,
    theta_grid: usize,
    gamma: f64,
) -> DiagnosticReport {
    let h = 1.0 / theta_grid as f64;
    let measured = (0..theta_grid)
        .into_par_iter()
        .map(|j| ln_abs_pk(params, e, j as f64 * h, n))
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
        / n as f64;
    let bound = gamma + eps;
    let verdict = if measured < bound { Verdict::Pass } else { Verdict::BelowRegime };
    DiagnosticReport::new("uniform_pk_bound", measured, bound, verdict)
        .input("energy", e)
        .input("eps", eps)
        .input("n", n as u64)
        .input("theta_grid", theta_grid as u64)
        .input("gamma", gamma)
}

/// Empirical onset of the uniform bound: the first ladder `n` from which the
/// bound holds at every later ladder entry up to `n_max`.
pub fn uniform_pk_onset(
    params: &OperatorParams,
    e: f64,
    eps: f64,
    n_max: usize,
    theta_grid: usize,
    gamma: f64,
) -> Option<usize> {
    let ladder: Vec<usize> = std::iter::successors(Some(4usize), |n| Some(n * 2))
        .take_while(|n| *n <= n_max)
        .collect();
    let holds: Vec<bool> = ladder
        .iter()
        .map(|&n| uniform_pk_bound_check_with_gamma(params, e, eps, n, theta_grid, gamma).passed())
        .collect();
    let first_persistent = (0..ladder.len()).find(|&i| holds[i..].iter().all(|h| *h))?;
    Some(ladder[first_persistent])
}
