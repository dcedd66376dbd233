//! Finite-box eigenproblems and eigenvector decay rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, residual, twisted_eigenvector};
use crate::lyapunov::lyapunov_estimate;
use crate::operator::{restrict, IntervalZ, OperatorParams};
use crate::report::{DiagnosticReport, Verdict};
use crate::signed_log::log_sum_exp;

pub const MAX_BOX_HALF_WIDTH: usize = 100_000;
pub const RESIDUAL_GATE: f64 = 1e-8;
pub const REFERENCE_K: usize = 8192;
pub const REFERENCE_THETA_GRID: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub energy: f64,
    /// `ln|Ψ(n)|` for `n = x1, …, x2`, 2-normalised.
    pub ln_abs: Vec<f64>,
    pub sign: Vec<i8>,
    pub residual: f64,
    /// Site of largest modulus.
    pub center: i64,
    /// Inverse participation ratio `Σ Ψ⁴`.
    pub ipr: f64,
}

impl EigenPair {
    pub fn values(&self) -> Vec<f64> {
        self.ln_abs.iter().zip(&self.sign).map(|(l, s)| f64::from(*s) * l.exp()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxSpectrum {
    pub params: OperatorParams,
    pub interval: IntervalZ,
    pub eigenvalues: Vec<f64>,
    /// Residual-gated eigenpairs inside the window, by increasing energy.
    pub pairs: Vec<EigenPair>,
    /// Pairs dropped by the residual gate.
    pub rejected: usize,
}

impl BoxSpectrum {
    pub fn pair_near(&self, e: f64) -> Option<&EigenPair> {
        self.pairs.iter().min_by(|a, b| (a.energy - e).abs().total_cmp(&(b.energy - e).abs()))
    }
}

/// Eigenvalues of `H` on `[−N, N]` and eigenvectors for those in `window`.
pub fn box_eigenproblem(params: &OperatorParams, n_half: usize, window: Option<(f64, f64)>) -> Result<BoxSpectrum> {
    if n_half > MAX_BOX_HALF_WIDTH {
        return Err(Error::Capacity { requested: 2 * n_half + 1, max: 2 * MAX_BOX_HALF_WIDTH + 1 });
    }
    let interval = IntervalZ::new(-(n_half as i64), n_half as i64)?;
    let h = restrict(params, interval, 0.0)?;
    let eigenvalues = eigenvalues(&h)?;
    let mut pairs = Vec::new();
    let mut rejected = 0;
    if let Some((lo, hi)) = window {
        let selected: Vec<f64> = eigenvalues.iter().copied().filter(|e| *e >= lo && *e <= hi).collect();
        let computed: Vec<Option<EigenPair>> = {
            use rayon::prelude::*;
            selected
                .par_iter()
                .map(|&e| {
                    let v = twisted_eigenvector(&h, e);
                    let plain = v.values();
                    let res = residual(&h, e, &plain);
                    if !(res <= RESIDUAL_GATE) {
                        return None;
                    }
                    let (imax, _) = v
                        .ln_abs
                        .iter()
                        .enumerate()
                        .fold((0, f64::NEG_INFINITY), |acc, (i, l)| if *l > acc.1 { (i, *l) } else { acc });
                    let ipr = plain.iter().map(|x| x.powi(4)).sum();
                    Some(EigenPair {
                        energy: e,
                        ln_abs: v.ln_abs,
                        sign: v.sign,
                        residual: res,
                        center: interval.x1 + imax as i64,
                        ipr,
                    })
                })
                .collect()
        };
        for p in computed {
            match p {
                Some(p) => pairs.push(p),
                None => rejected += 1,
            }
        }
    }
    Ok(BoxSpectrum { params: params.clone(), interval, eigenvalues, pairs, rejected })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub energy: f64,
    /// Mean of the two one-sided slopes.
    pub slope: f64,
    pub left_slope: f64,
    pub right_slope: f64,
    pub fit_range: (usize, usize),
    /// Root-mean-square residual of the two line fits.
    pub residual: f64,
    pub gamma_reference: f64,
    pub center: i64,
    /// Set when the eigenvector's weight sits inside the fit range.
    pub unreliable: bool,
}

/// `½ ln(Ψ²(n) + Ψ²(n+1))` at the array position `i`.
fn log_pair(ln_abs: &[f64], i: usize) -> f64 {
    0.5 * log_sum_exp(&[2.0 * ln_abs[i], 2.0 * ln_abs[i + 1]])
}

/// Least-squares slope and RMS residual of `y` against `x`.
pub fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Samples `(|n|, ½ ln(Ψ²(n) + Ψ²(n+1)))` for `a <= |n| <= b` on one side.
fn side_samples(ln_abs: &[f64], x1: i64, a: usize, b: usize, right: bool) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for m in a..=b {
        let n = if right { m as i64 } else { -(m as i64) };
        let i = n - x1;
        if i >= 0 && (i as usize) + 1 < ln_abs.len() {
            xs.push(m as f64);
            ys.push(log_pair(ln_abs, i as usize));
        }
    }
    (xs, ys)
}

fn check_fit_range(interval: IntervalZ, fit_range: (usize, usize)) -> Result<()> {
    let n_half = interval.x2.min(-interval.x1).max(0) as usize;
    let (a, b) = fit_range;
    if a >= b || a < 1 {
        return Err(Error::FitRange(format!("need 1 <= a < b, got {a}:{b}")));
    }
    if b + n_half / 10 > n_half {
        return Err(Error::FitRange(format!("{a}:{b} leaves less than N/10 margin in a box of half-width {n_half}")));
    }
    Ok(())
}

/// Two-sided decay slope of `½ ln(Ψ²(n) + Ψ²(n+1))` against `|n|`, with
/// the given reference exponent.
pub fn decay_rate_fit_with_gamma(
    spectrum: &BoxSpectrum,
    e: f64,
    fit_range: (usize, usize),
    gamma_reference: f64,
) -> Result<DecayFit> {
    check_fit_range(spectrum.interval, fit_range)?;
    let pair = spectrum
        .pair_near(e)
        .ok_or_else(|| Error::Precondition(format!("no eigenpair computed near {e}")))?;
    let (a, b) = fit_range;
    let x1 = spectrum.interval.x1;
    let (xl, yl) = side_samples(&pair.ln_abs, x1, a, b, false);
    let (xr, yr) = side_samples(&pair.ln_abs, x1, a, b, true);
    let (left_slope, _, res_l) = line_fit(&xl, &yl);
    let (right_slope, _, res_r) = line_fit(&xr, &yr);
    // weight inside the fit range means the state is not centred near 0
    let outside_core = pair.center.unsigned_abs() as usize >= a;
    Ok(DecayFit {
        energy: pair.energy,
        slope: 0.5 * (left_slope + right_slope),
        left_slope,
        right_slope,
        fit_range,
        residual: (0.5 * (res_l * res_l + res_r * res_r)).sqrt(),
        gamma_reference,
        center: pair.center,
        unreliable: outside_core,
    })
}

/// As [`decay_rate_fit_with_gamma`], with `γ(E)` from the doubling ladder
/// (`k = 8192`, 1024 phases).
pub fn decay_rate_fit(spectrum: &BoxSpectrum, e: f64, fit_range: (usize, usize)) -> Result<DecayFit> {
    let gamma = lyapunov_estimate(&spectrum.params, e, REFERENCE_K, REFERENCE_THETA_GRID).gamma;
    decay_rate_fit_with_gamma(spectrum, e, fit_range, gamma)
}

/// Windowed decay rates of a log-form vector on both sides of 0 must not fall
/// below `−γ − 0.1γ` (the lower limit of the decay quantity is at least `−γ`).
/// Windows have length `max(100, (b − a)/4)`, stepping by half a window.
pub fn craig_simon_check_vector(
    ln_abs: &[f64],
    x1: i64,
    fit_range: (usize, usize),
    gamma: f64,
) -> DiagnosticReport {
    let (a, b) = fit_range;
    let w = ((b - a) / 4).max(100).min(b - a);
    let step = (w / 2).max(1);
    let mut worst = f64::INFINITY;
    for right in [false, true] {
        let mut start = a;
        while start + w <= b {
            let (xs, ys) = side_samples(ln_abs, x1, start, start + w, right);
            if xs.len() >= 2 {
                worst = worst.min(line_fit(&xs, &ys).0);
            }
            start += step;
        }
    }
    let tol = 0.1 * gamma.abs().max(1e-3);
    let bound = -gamma - tol;
    DiagnosticReport::new("lower_decay_limit", worst, bound, Verdict::from_bool(worst >= bound))
        .input("gamma", gamma)
        .input("window", w as u64)
        .input("fit_range", serde_json::json!([a, b]))
}

pub fn craig_simon_check(spectrum: &BoxSpectrum, e: f64, fit_range: (usize, usize), gamma: f64) -> Result<DiagnosticReport> {
    check_fit_range(spectrum.interval, fit_range)?;
    let pair = spectrum
        .pair_near(e)
        .ok_or_else(|| Error::Precondition(format!("no eigenpair computed near {e}")))?;
    Ok(craig_simon_check_vector(&pair.ln_abs, spectrum.interval.x1, fit_range, gamma).input("energy", pair.energy))
}
