//! Continued fractions, Diophantine constants, resonant phases,
//! equidistribution bounds and small-denominator estimates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::interpolation::nodes::theta_nodes;
use crate::phase::{abs_sin_2pi, frac_orbit, orbit_point};
use crate::report::{Check, DiagnosticReport, Verdict};

/// Largest denominator accepted as an exact rational termination.
pub const MAX_RATIONAL_DENOMINATOR: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    DepthReached,
    /// `ω` is (to working precision) the last convergent.
    Rational,
    /// Further quotients would only describe the binary representation of `ω`.
    PrecisionExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuedFractionExpansion {
    pub omega: f64,
    /// `a_1, a_2, …` with `ω = 1/(a_1 + 1/(a_2 + …))`.
    pub partial_quotients: Vec<u64>,
    /// `(p_n, q_n)` for `n = 1, 2, …`, with `q_n` strictly increasing.
    pub convergents: Vec<(i64, i64)>,
    pub termination: Termination,
}

impl ContinuedFractionExpansion {
    pub fn denominators(&self) -> Vec<u64> {
        self.convergents.iter().map(|(_, q)| *q as u64).collect()
    }
}

/// Greedy expansion of `ω ∈ (0, 1)` to `depth` quotients.
///
/// Residuals `q_n ω − p_n` are recomputed with a fused multiply-add at each
/// step, so the quotients are those of the binary number `ω` until its
/// resolution runs out.
pub fn continued_fraction(omega: f64, depth: usize) -> ContinuedFractionExpansion {
    assert!(omega > 0.0 && omega < 1.0, "continued_fraction needs 0 < omega < 1");
    let mut quotients = Vec::new();
    let mut convergents: Vec<(i64, i64)> = Vec::new();
    let (mut p_prev, mut q_prev, mut r_prev) = (1i64, 0i64, -1.0f64);
    let (mut p, mut q, mut r) = (0i64, 1i64, omega);
    let mut termination = Termination::DepthReached;
    while quotients.len() < depth {
        let a = (-r_prev / r).floor();
        if !a.is_finite() || !(1.0..=1e15).contains(&a) {
            termination = Termination::PrecisionExhausted;
            break;
        }
        let a_int = a as i64;
        let (Some(p_next), Some(q_next)) = (
            a_int.checked_mul(p).and_then(|v| v.checked_add(p_prev)),
            a_int.checked_mul(q).and_then(|v| v.checked_add(q_prev)),
        ) else {
            termination = Termination::PrecisionExhausted;
            break;
        };
        let r_next = (q_next as f64).mul_add(omega, -(p_next as f64));
        quotients.push(a_int as u64);
        if convergents.last().map_or(true, |c| c.1 < q_next) {
            convergents.push((p_next, q_next));
        }
        (p_prev, q_prev, r_prev) = (p, q, r);
        (p, q, r) = (p_next, q_next, r_next);
        let err = r.abs() / q as f64;
        if q <= MAX_RATIONAL_DENOMINATOR && err <= 4.0 * f64::EPSILON * omega {
            termination = Termination::Rational;
            break;
        }
        if r.abs() <= q as f64 * omega * 2f64.powi(-50) {
            termination = Termination::PrecisionExhausted;
            break;
        }
    }
    ContinuedFractionExpansion { omega, partial_quotients: quotients, convergents, termination }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiophantineCertificate {
    pub omega: f64,
    pub r: f64,
    /// `min_{0<j<=j_max} |sin 2πjω|·j^r`.
    pub c: f64,
    pub j_max: u64,
    pub witness_j: u64,
}

fn sin_times_power(omega: f64, r: f64, j: u64) -> f64 {
    abs_sin_2pi(orbit_point(0.0, j as f64, omega)) * (j as f64).powf(r)
}

/// Scan `|sin 2πjω|·j^r` over `1 <= j <= j_max`.
pub fn diophantine_constants(omega: f64, r: f64, j_max: u64) -> Result<DiophantineCertificate> {
    if !(r > 1.0) {
        return Err(Error::Precondition(format!("Diophantine exponent must exceed 1, got {r}")));
    }
    if j_max < 1 {
        return Err(Error::Precondition("j_max must be at least 1".into()));
    }
    let (c, witness_j) = (1..=j_max)
        .into_par_iter()
        .map(|j| (sin_times_power(omega, r, j), j))
        .reduce(|| (f64::INFINITY, u64::MAX), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    if c == 0.0 {
        let first = (1..=j_max).find(|j| sin_times_power(omega, r, *j) == 0.0).unwrap_or(witness_j);
        return Err(Error::NotDiophantine { j: first });
    }
    Ok(DiophantineCertificate { omega, r, c, j_max, witness_j })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceReport {
    pub theta: f64,
    pub omega: f64,
    pub r: f64,
    pub k_max: u64,
    pub resonant_k: Vec<u64>,
}

/// `|sin 2π(θ + (k/2)ω)|`, reduced in double-double arithmetic.
pub fn half_shift_sine(theta: f64, omega: f64, k: u64) -> f64 {
    abs_sin_2pi(orbit_point(theta, k as f64 / 2.0, omega))
}

/// All `k <= k_max` with `|sin 2π(θ + (k/2)ω)| < exp(−k^{1/(2r)})`.
pub fn theta_resonances(theta: f64, omega: f64, r: f64, k_max: u64) -> ResonanceReport {
    assert!(r > 1.0, "resonance exponent needs r > 1");
    let expo = 1.0 / (2.0 * r);
    let resonant_k = (1..=k_max)
        .into_par_iter()
        .filter(|&k| half_shift_sine(theta, omega, k) < (-(k as f64).powf(expo)).exp())
        .collect();
    ResonanceReport { theta, omega, r, k_max, resonant_k }
}

/// The phase `θ = {−(k0/2)ω}` at which `k0` is an exact resonance.
pub fn resonant_phase(omega: f64, k0: u64) -> f64 {
    frac_orbit(0.0, -(k0 as f64) / 2.0, omega)
}

/// A function on the circle `[0, 1)` with known mean and total variation.
pub trait BoundedVariation: Sync {
    fn eval(&self, x: f64) -> f64;
    fn integral(&self) -> f64;
    /// Total variation on the circle (including any jump at `0 ≡ 1`).
    fn variation(&self) -> f64;
}

pub struct Constant(pub f64);

impl BoundedVariation for Constant {
    fn eval(&self, _x: f64) -> f64 {
        self.0
    }
    fn integral(&self) -> f64 {
        self.0
    }
    fn variation(&self) -> f64 {
        0.0
    }
}

/// `f(x) = x` on `[0, 1)`.
pub struct Linear;

impl BoundedVariation for Linear {
    fn eval(&self, x: f64) -> f64 {
        x
    }
    fn integral(&self) -> f64 {
        0.5
    }
    fn variation(&self) -> f64 {
        2.0
    }
}

/// `f(x) = cos 2πx`.
pub struct Cosine;

impl BoundedVariation for Cosine {
    fn eval(&self, x: f64) -> f64 {
        (2.0 * std::f64::consts::PI * x).cos()
    }
    fn integral(&self) -> f64 {
        0.0
    }
    fn variation(&self) -> f64 {
        4.0
    }
}

/// Indicator of `[a, b) ⊂ [0, 1)`.
pub struct Indicator {
    pub a: f64,
    pub b: f64,
}

impl BoundedVariation for Indicator {
    fn eval(&self, x: f64) -> f64 {
        if x >= self.a && x < self.b {
            1.0
        } else {
            0.0
        }
    }
    fn integral(&self) -> f64 {
        self.b - self.a
    }
    fn variation(&self) -> f64 {
        2.0
    }
}

/// Piecewise-linear interpolant of samples on the uniform periodic grid
/// `x_i = i/n`.
pub struct Sampled {
    pub values: Vec<f64>,
}

impl BoundedVariation for Sampled {
    fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        let t = x.rem_euclid(1.0) * n as f64;
        let i = (t.floor() as usize).min(n - 1);
        let w = t - i as f64;
        self.values[i] * (1.0 - w) + self.values[(i + 1) % n] * w
    }
    fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
    fn variation(&self) -> f64 {
        let n = self.values.len();
        (0..n).map(|i| (self.values[(i + 1) % n] - self.values[i]).abs()).sum()
    }
}

/// Greedy digits of `k` in the denominators `q_1 = 1 < q_2 < …`:
/// `k = Σ b_i q_i`, returned as `b_i` aligned with `denominators`.
pub fn ostrowski_digits(k: u64, denominators: &[u64]) -> Vec<u64> {
    let mut digits = vec![0; denominators.len()];
    let mut rest = k;
    for (i, q) in denominators.iter().enumerate().rev() {
        if *q <= rest {
            digits[i] = rest / q;
            rest %= q;
        }
    }
    debug_assert_eq!(rest, 0, "denominator list must start at 1");
    digits
}

/// `|Σ_{j<k} f(θ + jω) − k∫f|`, summed in order.
pub fn birkhoff_deviation(f: &dyn BoundedVariation, theta: f64, omega: f64, k: u64) -> f64 {
    let sum: f64 = (0..k).map(|j| f.eval(frac_orbit(theta, j as f64, omega))).sum();
    (sum - k as f64 * f.integral()).abs()
}

fn denominators_from_one(omega: f64) -> Vec<u64> {
    let mut q = continued_fraction(omega, 200).denominators();
    if q.first() != Some(&1) {
        q.insert(0, 1);
    }
    q
}

/// The Denjoy–Koksma estimate: Birkhoff deviation against `(Σ b_i)·Var f`.
pub fn denjoy_koksma_check(omega: f64, theta: f64, f: &dyn BoundedVariation, k: u64) -> DiagnosticReport {
    let q = denominators_from_one(omega);
    let digits = ostrowski_digits(k, &q);
    let digit_sum: u64 = digits.iter().sum();
    let lhs = birkhoff_deviation(f, theta, omega, k);
    let bound = digit_sum as f64 * f.variation();
    // Σ b_i <= Σ ⌊q_{i+1}/q_i⌋ over the digits in use
    let top = digits.iter().rposition(|b| *b > 0).unwrap_or(0);
    let quotient_sum: u64 = (0..=top)
        .map(|i| if i + 1 < q.len() { q[i + 1] / q[i] } else { k / q[i] })
        .sum();
    DiagnosticReport::new("denjoy_koksma", lhs, bound, Verdict::from_bool(lhs <= bound + 1e-9 * k as f64))
        .input("omega", omega)
        .input("theta", theta)
        .input("k", k)
        .input("digit_sum", digit_sum)
        .with_check(Check::at_most("digit_sum_vs_quotients", digit_sum as f64, quotient_sum as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyBound {
    pub n: u64,
    pub phi_n: f64,
    pub c1: f64,
}

/// Constructive constant: with `c' = c/(2π)` the denominators satisfy
/// `q_{i+1} < q_i^r / c'`, the digit sum is at most
/// `c'^{−1/r}(n(k)+1)k^{1−1/r}` and `n(k) <= 2 log₂ k + 1`, so for `k >= 3`
/// the factor `c'^{−1/r}(2/ln 2 + 2)` works.
pub fn constructive_c1(r: f64, c: f64) -> f64 {
    let c_prime = c / (2.0 * std::f64::consts::PI);
    c_prime.powf(-1.0 / r) * (2.0 / std::f64::consts::LN_2 + 2.0)
}

/// `ϕ(n) = c1·n^{1−1/r}·ln n` with the constructive `c1`.
pub fn uniform_distribution_bound(r: f64, c: f64, n: u64) -> DiscrepancyBound {
    let c1 = constructive_c1(r, c);
    DiscrepancyBound { n, phi_n: phi(c1, r, n), c1 }
}

pub fn phi(c1: f64, r: f64, n: u64) -> f64 {
    let n = n as f64;
    c1 * n.powf(1.0 - 1.0 / r) * n.ln()
}

/// Smallest `c1` consistent with the observed deviations of `f` at the given
/// orbit lengths (`n >= 3`).
pub fn empirical_c1(f: &dyn BoundedVariation, theta: f64, omega: f64, r: f64, lengths: &[u64]) -> f64 {
    lengths
        .par_iter()
        .filter(|n| **n >= 3)
        .map(|&n| birkhoff_deviation(f, theta, omega, n) / (f.variation() * phi(1.0, r, n)))
        .reduce(|| 0.0, f64::max)
}

/// `|Σf − n∫f| <= ϕ(n)·Var f` for the orbit of length `n` from `θ`.
pub fn discrepancy_check(
    omega: f64,
    theta: f64,
    cert: &DiophantineCertificate,
    f: &dyn BoundedVariation,
    n: u64,
) -> DiagnosticReport {
    let b = uniform_distribution_bound(cert.r, cert.c, n);
    let lhs = birkhoff_deviation(f, theta, omega, n);
    let bound = b.phi_n * f.variation();
    DiagnosticReport::new("phi_uniform_distribution", lhs, bound, Verdict::from_bool(lhs <= bound))
        .input("omega", omega)
        .input("theta", theta)
        .input("n", n)
        .input("c1", b.c1)
        .input("r", cert.r)
}

/// Right-hand side of the small-denominator bound:
/// `exp(−(d + k/4 + 1)^{1/(2r)})·c/(d + k + 1)^r`.
pub fn cos_gap_lower_bound(cert: &DiophantineCertificate, k: usize, d: i64) -> f64 {
    let (k, d) = (k as f64, d as f64);
    (-(d + k / 4.0 + 1.0).powf(1.0 / (2.0 * cert.r))).exp() * cert.c / (d + k + 1.0).powf(cert.r)
}

/// Minimum pairwise `|cos 2πθ_j − cos 2πθ_ℓ|` over the two-block nodes with
/// `x1 = 0`, against the small-denominator bound; also re-derives each gap
/// from the product form `2|sin 2π(θ + ((k−1+i_j+i_ℓ)/2)ω)·sin π(i_j−i_ℓ)ω|`.
pub fn min_cos_gap_bound(
    theta: f64,
    omega: f64,
    cert: &DiophantineCertificate,
    k: usize,
    d: i64,
) -> Result<DiagnosticReport> {
    let nodes = theta_nodes(theta, omega, k, 0, d)?;
    let cos: Vec<f64> = nodes.thetas.iter().map(|t| (2.0 * std::f64::consts::PI * t).cos()).collect();
    let idx = &nodes.indices;
    let (min_gap, max_identity_err) = (0..cos.len())
        .into_par_iter()
        .map(|j| {
            let mut min_gap = f64::INFINITY;
            let mut max_err: f64 = 0.0;
            for l in (j + 1)..cos.len() {
                let gap = (cos[j] - cos[l]).abs();
                let mid = orbit_point(theta, (k as i64 - 1 + idx[j] + idx[l]) as f64 / 2.0, omega);
                let half = orbit_point(0.0, (idx[j] - idx[l]) as f64 / 2.0, omega);
                let product = 2.0 * abs_sin_2pi(mid) * abs_sin_2pi(half);
                min_gap = min_gap.min(gap);
                max_err = max_err.max((gap - product).abs());
            }
            (min_gap, max_err)
        })
        .reduce(|| (f64::INFINITY, 0.0), |a, b| (a.0.min(b.0), a.1.max(b.1)));
    let bound = cos_gap_lower_bound(cert, k, d);
    let resonance_horizon = (2 * (d.unsigned_abs() + k as u64) + 2).max(100);
    let resonances = theta_resonances(theta, omega, cert.r, resonance_horizon);
    Ok(DiagnosticReport::new("min_cos_gap", min_gap, bound, Verdict::from_bool(min_gap >= bound))
        .input("theta", theta)
        .input("omega", omega)
        .input("k", k as u64)
        .input("d", d)
        .input("r", cert.r)
        .input("c", cert.c)
        .input("resonances_up_to_horizon", json!(resonances.resonant_k))
        .with_check(Check::at_most("product_identity_error", max_identity_err, 1e-10)))
}

/// Distinct gap lengths (to `tol`) between consecutive sorted orbit points
/// `{θ + jω}`, `j < n`, on the circle.
pub fn orbit_gaps(theta: f64, omega: f64, n: u64, tol: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..n).map(|j| frac_orbit(theta, j as f64, omega)).collect();
    pts.sort_by(f64::total_cmp);
    let mut gaps: Vec<f64> = pts.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(1.0 - pts[pts.len() - 1] + pts[0]);
    gaps.sort_by(f64::total_cmp);
    let mut distinct: Vec<f64> = Vec::new();
    for g in gaps {
        if distinct.last().map_or(true, |last| g - last > tol) {
            distinct.push(g);
        }
    }
    distinct
}
