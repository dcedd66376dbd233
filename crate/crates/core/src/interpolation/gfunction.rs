//! The function
//! `g(m) = exp((1/m)(−∫_m^π ln(1+cos x)dx + 2∫_{m/2}^{π/2} ln sin x dx))`,
//! decreasing on `(0, π]` with `g(π) = 1`, and its inverse.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::{ln_sin_integral, tanh_sinh};

pub const DEFAULT_TOL: f64 = 1e-13;
pub const TABLE_SIZE: usize = 1000;

/// Exponent `ln g(m)` via `ln(1+cos x) = ln 2 + 2 ln cos(x/2)`, which turns
/// both integrals into values of `L(a) = ∫_0^a ln sin`.
fn ln_g(m: f64, tol: f64) -> f64 {
    let first = (PI - m) * LN_2 + 4.0 * ln_sin_integral(FRAC_PI_2 - m / 2.0, tol);
    let second = -FRAC_PI_2 * LN_2 - ln_sin_integral(m / 2.0, tol);
    (-first + 2.0 * second) / m
}

fn check_domain(m: f64) -> Result<()> {
    if m > 0.0 && m <= PI {
        Ok(())
    } else {
        Err(Error::Domain(format!("g is defined on (0, pi], got {m}")))
    }
}

/// `g(m)` by singularity-subtracted Gauss–Kronrod quadrature.
pub fn g_function(m: f64) -> Result<f64> {
    check_domain(m)?;
    Ok(ln_g(m, DEFAULT_TOL).exp())
}

/// `g(m)` by tanh-sinh quadrature of the integrands as written.
pub fn g_function_tanh_sinh(m: f64) -> Result<f64> {
    check_domain(m)?;
    // 1 + cos x = 2 sin²((π − x)/2), written through the distance to π
    let first = tanh_sinh(|_, _, dr| LN_2 + 2.0 * (0.5 * dr).sin().ln(), m, PI, 1e-15).value;
    let second = tanh_sinh(|x, _, _| x.sin().ln(), m / 2.0, FRAC_PI_2, 1e-15).value;
    Ok(((-first + 2.0 * second) / m).exp())
}

/// Tabulated `g` on `m_i = πi/N`, `i = 1..=N`.
#[derive(Debug, Clone)]
pub struct GFunction {
    pub tol: f64,
    pub table: Vec<(f64, f64)>,
}

impl GFunction {
    pub fn new(tol: f64, size: usize) -> Self {
        let table = (1..=size)
            .map(|i| {
                let m = PI * i as f64 / size as f64;
                (m, ln_g(m, tol).exp())
            })
            .collect();
        Self { tol, table }
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.table.windows(2).all(|w| w[1].1 < w[0].1)
    }

    /// `m` with `g(m) = y`, for `y >= 1`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 1.0) {
            return Err(Error::Domain(format!("g takes values in [1, inf), got {y}")));
        }
        if y <= 1.0 {
            return Ok(PI);
        }
        // bracket on the table, then bisect the function itself
        let idx = self.table.iter().position(|(_, g)| *g < y);
        let (mut lo, mut hi) = match idx {
            Some(0) => (0.0, self.table[0].0),
            Some(i) => (self.table[i - 1].0, self.table[i].0),
            None => (self.table[self.table.len() - 1].0, PI),
        };
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= 0.0 || ln_g(mid, self.tol) > y.ln() {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

fn shared_table() -> &'static GFunction {
    static TABLE: OnceLock<GFunction> = OnceLock::new();
    TABLE.get_or_init(|| GFunction::new(DEFAULT_TOL, TABLE_SIZE))
}

/// `g^{−1}(y)` for `y >= 1`.
pub fn g_inverse(y: f64) -> Result<f64> {
    shared_table().inverse(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_pi() {
        assert!((g_function(PI).unwrap() - 1.0).abs() < 1e-12);
        assert!((g_function_tanh_sinh(PI).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schemes_agree() {
        for m in [0.05, 0.5, FRAC_PI_2, 2.0, 3.0] {
            let a = g_function(m).unwrap();
            let b = g_function_tanh_sinh(m).unwrap();
            assert!((a - b).abs() <= 1e-9 * a, "m={m}: {a} vs {b}");
        }
    }

    #[test]
    fn inverse_round_trip() {
        for y in [1.0, 1.5, 2.0, 10.0, 500.0] {
            let m = g_inverse(y).unwrap();
            assert!((g_function(m).unwrap() - y).abs() < 1e-9 * y, "y={y}");
        }
        assert!(g_inverse(0.5).is_err());
        assert!(g_function(0.0).is_err());
    }
}
