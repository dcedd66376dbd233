//! Symmetric tridiagonal kernels: factor-and-solve, Sturm counts, eigenvalues
//! by implicit QL, and eigenvectors by twisted factorization.

use crate::error::{Error, Result};
use crate::operator::SymTridiagonal;
use crate::signed_log::log_sum_exp;

/// LU factorisation with partial pivoting of a (general) tridiagonal matrix,
/// in the layout of LAPACK `?gttrf`.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    ipiv: Vec<bool>,
}

impl TridiagonalLu {
    pub fn factor(a: &SymTridiagonal) -> Result<Self> {
        let n = a.dim();
        let mut dl = a.off.clone();
        let mut d = a.diag.clone();
        let mut du = a.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut ipiv = vec![false; n];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    return Err(Error::Convergence(format!("zero pivot at row {i}")));
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                ipiv[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            return Err(Error::Convergence(format!("zero pivot at row {}", n - 1)));
        }
        Ok(Self { dl, d, du, du2, ipiv })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let mut x = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.ipiv[i] {
                let temp = x[i];
                x[i] = x[i + 1];
                x[i + 1] = temp - self.dl[i] * x[i];
            } else {
                x[i + 1] -= self.dl[i] * x[i];
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s -= self.du[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.du2[i] * x[i + 2];
            }
            x[i] = s / self.d[i];
        }
        x
    }
}

/// Number of eigenvalues of `a` strictly below `x`.
pub fn sturm_count(a: &SymTridiagonal, x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..a.dim() {
        let off2 = if i == 0 { 0.0 } else { a.off[i - 1] * a.off[i - 1] };
        let prev = if q == 0.0 { f64::EPSILON * (1.0 + x.abs()) } else { q };
        q = (a.diag[i] - x) - if i == 0 { 0.0 } else { off2 / prev };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval.
pub fn gershgorin(a: &SymTridiagonal) -> (f64, f64) {
    let n = a.dim();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { a.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { a.off[i].abs() } else { 0.0 };
        lo = lo.min(a.diag[i] - r);
        hi = hi.max(a.diag[i] + r);
    }
    (lo, hi)
}

/// The `index`-th smallest eigenvalue by bisection on Sturm counts.
pub fn bisect_eigenvalue(a: &SymTridiagonal, index: usize) -> f64 {
    let (mut lo, mut hi) = gershgorin(a);
    lo -= 1e-12;
    hi += 1e-12;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(a, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Does `[x − eta, x + eta]` contain an eigenvalue of `a`?
pub fn has_eigenvalue_near(a: &SymTridiagonal, x: f64, eta: f64) -> bool {
    sturm_count(a, x - eta) != sturm_count(a, x + eta)
}

/// All eigenvalues, ascending, by the implicit QL method with Wilkinson shifts.
pub fn eigenvalues(a: &SymTridiagonal) -> Result<Vec<f64>> {
    let n = a.dim();
    let mut d = a.diag.clone();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&a.off);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::Convergence(format!("QL iteration stalled at index {l}")));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(d)
}

/// Eigenvector of `a` for the (accurately known) eigenvalue `lambda`, stored
/// in log form so exponentially small tails keep full relative accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedVector {
    pub ln_abs: Vec<f64>,
    pub sign: Vec<i8>,
    /// Twist index (the site where the two one-sided solutions are joined).
    pub twist: usize,
}

impl TwistedVector {
    /// 2-normalised plain values (tails below ~1e-308 underflow to zero).
    pub fn values(&self) -> Vec<f64> {
        self.ln_abs
            .iter()
            .zip(&self.sign)
            .map(|(l, s)| f64::from(*s) * l.exp())
            .collect()
    }
}

fn safe_recip(x: f64) -> f64 {
    if x == 0.0 {
        1.0 / f64::MIN_POSITIVE
    } else {
        1.0 / x
    }
}

/// Twisted-factorization eigenvector: ratio recursions from both boundaries,
/// joined at the site with the smallest twist residual, then 2-normalised.
pub fn twisted_eigenvector(a: &SymTridiagonal, lambda: f64) -> TwistedVector {
    let n = a.dim();
    assert!(n >= 1);
    // equation at i: off[i-1] x[i-1] + (diag[i] - λ) x[i] + off[i] x[i+1] = 0
    let c = |i: usize| a.diag[i] - lambda;
    // right ratios r[i] = x[i+1] / x[i]
    let mut r = vec![0.0; n];
    for i in (0..n.saturating_sub(1)).rev() {
        // at row i+1: off[i] x[i] + c(i+1) x[i+1] + off[i+1] x[i+2] = 0
        let next = if i + 2 < n { a.off[i + 1] * r[i + 1] } else { 0.0 };
        r[i] = -a.off[i] * safe_recip(c(i + 1) + next);
    }
    // left ratios l[i] = x[i-1] / x[i]
    let mut l = vec![0.0; n];
    for i in 1..n {
        let prev = if i >= 2 { a.off[i - 2] * l[i - 1] } else { 0.0 };
        l[i] = -a.off[i - 1] * safe_recip(c(i - 1) + prev);
    }
    // twist residual at row i with x[i] = 1
    let mut best = (f64::INFINITY, 0usize);
    for i in 0..n {
        let mut g = c(i);
        if i > 0 {
            g += a.off[i - 1] * l[i];
        }
        if i + 1 < n {
            g += a.off[i] * r[i];
        }
        if g.abs() < best.0 {
            best = (g.abs(), i);
        }
    }
    let twist = best.1;
    let mut ln_abs = vec![0.0; n];
    let mut sign = vec![1i8; n];
    for i in twist + 1..n {
        let ratio = r[i - 1];
        ln_abs[i] = ln_abs[i - 1] + ratio.abs().ln();
        sign[i] = if ratio == 0.0 { 0 } else { sign[i - 1] * if ratio < 0.0 { -1 } else { 1 } };
    }
    for i in (0..twist).rev() {
        let ratio = l[i + 1];
        ln_abs[i] = ln_abs[i + 1] + ratio.abs().ln();
        sign[i] = if ratio == 0.0 { 0 } else { sign[i + 1] * if ratio < 0.0 { -1 } else { 1 } };
    }
    let doubled: Vec<f64> = ln_abs.iter().map(|v| 2.0 * v).collect();
    let ln_norm = 0.5 * log_sum_exp(&doubled);
    for v in ln_abs.iter_mut() {
        *v -= ln_norm;
    }
    TwistedVector { ln_abs, sign, twist }
}

/// `‖(A − λ) x‖₂`.
pub fn residual(a: &SymTridiagonal, lambda: f64, x: &[f64]) -> f64 {
    let ax = a.mul_vec(x);
    ax.iter()
        .zip(x)
        .map(|(y, xi)| (y - lambda * xi).powi(2))
        .sum::<f64>()
        .sqrt()
}
