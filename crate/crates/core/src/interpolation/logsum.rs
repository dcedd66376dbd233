//! Sums of `ln|z − f(x_i)|` over equidistributed points and the logarithmic
//! integral of the cosine.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::quadrature::tanh_sinh;
use crate::report::{Check, DiagnosticReport, Verdict};

/// A continuous function on `[0, 1]` taking each value at most `p` times,
/// with a known logarithmic potential `∫_0^1 ln|z − f(x)| dx`.
pub trait NormalFunction: Sync {
    fn eval(&self, x: f64) -> f64;
    /// Largest number of preimages of any value.
    fn max_preimages(&self) -> usize;
    fn log_potential(&self, z: f64) -> f64;
    fn range(&self) -> (f64, f64);
}

/// `f(x) = cos 2πx`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CosTwoPi;

impl NormalFunction for CosTwoPi {
    fn eval(&self, x: f64) -> f64 {
        (2.0 * PI * x).cos()
    }
    fn max_preimages(&self) -> usize {
        2
    }
    fn log_potential(&self, z: f64) -> f64 {
        log_integral_cos(z)
    }
    fn range(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }
}

/// `∫_0^1 ln|z − cos 2πx| dx`: `−ln 2` on `[−1, 1]`, and
/// `ln((|z| + √(z²−1))/2)` outside.
pub fn log_integral_cos(z: f64) -> f64 {
    let a = z.abs();
    if a <= 1.0 {
        -LN_2
    } else {
        ((a + (a * a - 1.0).sqrt()) / 2.0).ln()
    }
}

/// The same integral by quadrature. By symmetry it is twice the integral
/// over `[0, 1/2]`, split at the root `x0 = acos(z)/2π`; the integrand is
/// evaluated in the product form `2 sin π(x + x0) · sin π(x − x0)` so that
/// the logarithmic singularity keeps full relative accuracy.
pub fn log_integral_cos_quadrature(z: f64, tol: f64) -> f64 {
    if z.abs() > 1.0 {
        let q = tanh_sinh(|x, _, _| (z - (2.0 * PI * x).cos()).abs().ln(), 0.0, 0.5, tol);
        return 2.0 * q.value;
    }
    let x0 = z.acos() / (2.0 * PI);
    let integrand = |x: f64, dist: f64| (2.0 * (PI * (x + x0)).sin()).abs().ln() + (PI * dist).sin().ln();
    let mut total = 0.0;
    if x0 > 0.0 {
        total += tanh_sinh(|x, _, dr| integrand(x, dr), 0.0, x0, tol).value;
    }
    if x0 < 0.5 {
        total += tanh_sinh(|x, dl, _| integrand(x, dl), x0, 0.5, tol).value;
    }
    2.0 * total
}

/// Upper and lower bounds on `Σ' ln|z − f(x_i)|` (sum over points not in
/// `excluded`) in terms of `n = points.len()`, the log potential, `ε`, and
/// the discrepancy `ϕ(n)`.
pub fn log_moment_bounds(
    f: &dyn NormalFunction,
    points: &[f64],
    excluded: &[usize],
    z: f64,
    eps: f64,
    phi_n: f64,
) -> Result<DiagnosticReport> {
    let n = points.len();
    if excluded.len() >= n {
        return Err(Error::Precondition("every point is excluded".into()));
    }
    let mut skip = vec![false; n];
    for &j in excluded {
        if j >= n {
            return Err(Error::Precondition(format!("excluded index {j} out of range")));
        }
        skip[j] = true;
    }
    let mut sum = 0.0;
    let mut min_gap = f64::INFINITY;
    for (i, x) in points.iter().enumerate() {
        if skip[i] {
            continue;
        }
        let gap = (z - f.eval(*x)).abs();
        if gap == 0.0 {
            return Err(Error::LogSingularity { index: i });
        }
        sum += gap.ln();
        min_gap = min_gap.min(gap);
    }
    let integral = f.log_potential(z);
    let upper = n as f64 * (integral + eps);
    let lower = n as f64 * (integral - eps) + phi_n * f.max_preimages() as f64 * min_gap.ln().min(0.0);
    let ok_upper = sum <= upper;
    let ok_lower = sum >= lower;
    Ok(DiagnosticReport::new("log_sum_upper", sum, upper, Verdict::from_bool(ok_upper && ok_lower))
        .input("z", z)
        .input("eps", eps)
        .input("phi_n", phi_n)
        .input("n", n as u64)
        .input("excluded", excluded.len() as u64)
        .input("log_potential", integral)
        .with_check(Check::at_least("log_sum_lower", sum, lower)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_log_integral_is_constant() {
        for i in 0..=20 {
            let z = -1.0 + 0.1 * i as f64;
            let q = log_integral_cos_quadrature(z, 1e-12);
            assert!((q + LN_2).abs() < 1e-8, "z={z}: {q}");
        }
    }

    #[test]
    fn outside_closed_form() {
        for z in [1.5, -2.0, 5.0] {
            let q = log_integral_cos_quadrature(z, 1e-13);
            assert!((q - log_integral_cos(z)).abs() < 1e-10);
        }
    }

    #[test]
    fn equally_spaced_points() {
        let n = 10_000;
        let pts: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let r = log_moment_bounds(&CosTwoPi, &pts, &[], 0.0, 0.05, 100.0).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn exact_hit_is_a_singularity() {
        let pts = [0.0, 0.25, 0.5];
        let r = log_moment_bounds(&CosTwoPi, &pts, &[], 1.0, 0.1, 1.0);
        assert_eq!(r.unwrap_err(), Error::LogSingularity { index: 0 });
        assert!(log_moment_bounds(&CosTwoPi, &pts, &[0], 1.0, 0.1, 1.0).is_ok());
    }
}
