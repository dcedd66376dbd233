//! The quasi-periodic operator `(HΨ)(n) = Ψ(n+1) + Ψ(n−1) + f(ωn + θ)Ψ(n)`,
//! its finite restrictions, the determinants `P_k` and the transfer matrices.
//!
//! Determinants follow the convention `P_k(θ) = det[(E − H)|[0, k−1]]`, so that
//!
//! ```text
//! M_k(θ) = B(θ+(k−1)ω)···B(θ) = ( P_k(θ)    −P_{k−1}(θ+ω) )
//!                               ( P_{k−1}(θ) −P_{k−2}(θ+ω) )
//! ```
//!
//! holds entry by entry with `B(θ) = ((E − f(θ), −1), (1, 0))`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::phase;
use crate::signed_log::SignedLog;

pub const DEFAULT_MAX_SITES: usize = 1_000_000;
pub const DEFAULT_MAX_DEGREE: usize = 2048;

/// `(√5 − 1)/2`.
pub const GOLDEN_OMEGA: f64 = 0.618_033_988_749_894_8;
/// `√2 − 1`.
pub const SQRT2_MINUS_1: f64 = 0.414_213_562_373_095_03;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorParams {
    pub lambda: f64,
    pub omega: f64,
    pub theta: f64,
    /// `a_0..a_p` with `f(θ) = Σ a_k cos^k(2πθ)`.
    pub potential_coeffs: Vec<f64>,
}

impl OperatorParams {
    /// `f(θ) = λ cos 2πθ`.
    pub fn almost_mathieu(lambda: f64, omega: f64, theta: f64) -> Self {
        Self { lambda, omega, theta, potential_coeffs: vec![0.0, lambda] }
    }

    /// A cosine-power potential; `lambda` is kept as a label for reports.
    pub fn with_potential(lambda: f64, omega: f64, theta: f64, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("potential_coeffs must be nonempty".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Precondition("potential_coeffs must be finite".into()));
        }
        Ok(Self { lambda, omega, theta, potential_coeffs: coeffs })
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        Self { theta, ..self.clone() }
    }

    /// Degree `p` of `f` as a polynomial in `cos 2πθ`.
    pub fn cos_degree(&self) -> usize {
        self.potential_coeffs
            .iter()
            .rposition(|c| *c != 0.0)
            .unwrap_or(0)
    }

    /// `sup |f| <= Σ |a_k|`.
    pub fn potential_sup(&self) -> f64 {
        self.potential_coeffs.iter().map(|c| c.abs()).sum()
    }

    /// `f(x)` at an arbitrary phase `x`.
    #[inline]
    pub fn f(&self, x: f64) -> f64 {
        let c = (2.0 * PI * x).cos();
        self.potential_coeffs.iter().rev().fold(0.0, |acc, a| acc * c + a)
    }
}

/// `f(ωn + θ)`.
pub fn potential(params: &OperatorParams, n: i64) -> f64 {
    params.f(phase(params.theta, n as f64, params.omega))
}

/// The lattice interval `[x1, x2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntervalZ {
    pub x1: i64,
    pub x2: i64,
}

impl IntervalZ {
    pub fn new(x1: i64, x2: i64) -> Result<Self> {
        if x1 > x2 {
            return Err(Error::Precondition(format!("interval [{x1}, {x2}] is empty")));
        }
        Ok(Self { x1, x2 })
    }

    /// The interval `[x1, x1 + k − 1]`.
    pub fn with_len(x1: i64, k: usize) -> Self {
        assert!(k >= 1, "interval length must be positive");
        Self { x1, x2: x1 + k as i64 - 1 }
    }

    pub fn len(&self) -> usize {
        (self.x2 - self.x1 + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: i64) -> bool {
        self.x1 <= x && x <= self.x2
    }
}

impl fmt::Display for IntervalZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.x1, self.x2)
    }
}

/// Symmetric tridiagonal matrix; `off[i]` couples rows `i` and `i+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * x[i + 1];
                }
                s
            })
            .collect()
    }
}

/// `(H − E)` restricted to `interval` with zero boundary conditions.
pub fn restrict(params: &OperatorParams, interval: IntervalZ, e: f64) -> Result<SymTridiagonal> {
    restrict_with_max(params, interval, e, DEFAULT_MAX_SITES)
}

pub fn restrict_with_max(
    params: &OperatorParams,
    interval: IntervalZ,
    e: f64,
    max_sites: usize,
) -> Result<SymTridiagonal> {
    let k = interval.len();
    if k > max_sites {
        return Err(Error::Capacity { requested: k, max: max_sites });
    }
    let diag = (interval.x1..=interval.x2).map(|x| potential(params, x) - e).collect();
    Ok(SymTridiagonal { diag, off: vec![1.0; k - 1] })
}

/// `P_k, P_{k−1}, P_{k−2}` at one base phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetTriple {
    pub p_k: SignedLog,
    pub p_k_minus_1: SignedLog,
    pub p_k_minus_2: SignedLog,
}

const RESCALE_HI: f64 = 1e150;
const RESCALE_LO: f64 = 1e-150;

/// Three-term recursion `P_j = (E − f(φ + (j−1)ω)) P_{j−1} − P_{j−2}` from
/// `P_0 = 1, P_{−1} = 0` (and `P_{−2} = −1`), starting at absolute phase `phase0`.
pub fn det_triple_at(params: &OperatorParams, e: f64, phase0: f64, k: usize) -> DetTriple {
    let (mut prev2, mut prev1) = (-1.0f64, 0.0f64);
    let mut cur = 1.0f64;
    let mut log_scale = 0.0f64;
    for j in 1..=k {
        let a = e - params.f(phase(phase0, (j - 1) as f64, params.omega));
        let next = a * cur - prev1;
        prev2 = prev1;
        prev1 = cur;
        cur = next;
        let m = cur.abs().max(prev1.abs());
        if !(RESCALE_LO..=RESCALE_HI).contains(&m) {
            cur /= m;
            prev1 /= m;
            prev2 /= m;
            log_scale += m.ln();
        }
    }
    DetTriple {
        p_k: SignedLog::from_scaled(cur, log_scale),
        p_k_minus_1: SignedLog::from_scaled(prev1, log_scale),
        p_k_minus_2: SignedLog::from_scaled(prev2, log_scale),
    }
}

pub fn det_triple(params: &OperatorParams, e: f64, theta_offset: f64, k: usize) -> DetTriple {
    det_triple_at(params, e, params.theta + theta_offset, k)
}

/// `P_k(θ + theta_offset, E)` in signed-log form.
pub fn det_pk(params: &OperatorParams, e: f64, theta_offset: f64, k: usize) -> SignedLog {
    det_triple(params, e, theta_offset, k).p_k
}

/// `P_k(φ, E)` at an absolute phase `φ` (ignores `params.theta`).
pub fn det_pk_at(params: &OperatorParams, e: f64, phase0: f64, k: usize) -> SignedLog {
    det_triple_at(params, e, phase0, k).p_k
}

type Mat2 = [[f64; 2]; 2];

/// Closed-form largest singular value of a 2×2 matrix.
#[inline]
pub fn spectral_norm(m: &Mat2) -> f64 {
    let [[a, b], [c, d]] = *m;
    0.5 * ((a + d).hypot(b - c) + (a - d).hypot(b + c))
}

#[inline]
pub fn frobenius_norm(m: &Mat2) -> f64 {
    let [[a, b], [c, d]] = *m;
    (a * a + b * b + c * c + d * d).sqrt()
}

#[inline]
fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

/// A 2×2 matrix stored as `e^{log_scale} · unit` with `‖unit‖₂ ∈ [1, 2)`.
///
/// The determinant is tracked multiplicatively (`ln_abs_det`, `det_sign`) rather
/// than recomputed from `unit`, whose determinant is `det · e^{−2·log_scale}` and
/// cancels catastrophically once the product grows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledMatrix2 {
    pub unit: Mat2,
    pub log_scale: f64,
    pub ln_abs_det: f64,
    pub det_sign: i8,
}

impl ScaledMatrix2 {
    pub fn identity() -> Self {
        Self { unit: [[1.0, 0.0], [0.0, 1.0]], log_scale: 0.0, ln_abs_det: 0.0, det_sign: 1 }
    }

    pub fn from_matrix(m: Mat2) -> Self {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let mut s = Self {
            unit: m,
            log_scale: 0.0,
            ln_abs_det: det.abs().ln(),
            det_sign: if det > 0.0 {
                1
            } else if det < 0.0 {
                -1
            } else {
                0
            },
        };
        s.renormalize();
        s
    }

    fn renormalize(&mut self) {
        let n = spectral_norm(&self.unit);
        if n > 0.0 && !(1.0..2.0).contains(&n) {
            for row in self.unit.iter_mut() {
                for v in row.iter_mut() {
                    *v /= n;
                }
            }
            self.log_scale += n.ln();
        }
    }

    /// `self ← B · self`.
    pub fn left_mul(&mut self, b: &Mat2) {
        self.unit = mat_mul(b, &self.unit);
        let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
        self.ln_abs_det += det.abs().ln();
        self.det_sign *= if det > 0.0 {
            1
        } else if det < 0.0 {
            -1
        } else {
            0
        };
        self.renormalize();
    }

    /// `self · other`.
    pub fn mul(&self, other: &ScaledMatrix2) -> ScaledMatrix2 {
        let mut out = ScaledMatrix2 {
            unit: mat_mul(&self.unit, &other.unit),
            log_scale: self.log_scale + other.log_scale,
            ln_abs_det: self.ln_abs_det + other.ln_abs_det,
            det_sign: self.det_sign * other.det_sign,
        };
        out.renormalize();
        out
    }

    /// `ln ‖M‖₂` of the represented matrix.
    pub fn ln_norm(&self) -> f64 {
        self.log_scale + spectral_norm(&self.unit).ln()
    }

    pub fn ln_frobenius(&self) -> f64 {
        self.log_scale + frobenius_norm(&self.unit).ln()
    }

    /// Tracked determinant of the represented matrix.
    pub fn det(&self) -> f64 {
        f64::from(self.det_sign) * self.ln_abs_det.exp()
    }

    pub fn entry(&self, i: usize, j: usize) -> SignedLog {
        SignedLog::from_scaled(self.unit[i][j], self.log_scale)
    }

    /// The represented matrix; entries overflow once `log_scale` exceeds ~709.
    pub fn to_matrix(&self) -> Mat2 {
        let s = self.log_scale.exp();
        [[self.unit[0][0] * s, self.unit[0][1] * s], [self.unit[1][0] * s, self.unit[1][1] * s]]
    }
}

/// One-step matrix `B(φ, E)`.
#[inline]
pub fn one_step(params: &OperatorParams, e: f64, phi: f64) -> Mat2 {
    [[e - params.f(phi), -1.0], [1.0, 0.0]]
}

/// `M_k(θ + theta_offset, E)`.
pub fn transfer_matrix(params: &OperatorParams, e: f64, theta_offset: f64, k: usize) -> ScaledMatrix2 {
    transfer_matrix_at(params, e, params.theta + theta_offset, k)
}

/// `M_k(φ, E)` at an absolute phase `φ`.
pub fn transfer_matrix_at(params: &OperatorParams, e: f64, phase0: f64, k: usize) -> ScaledMatrix2 {
    assert!(k >= 1, "transfer_matrix needs k >= 1");
    let mut m = ScaledMatrix2::from_matrix(one_step(params, e, phase(phase0, 0.0, params.omega)));
    for j in 1..k {
        m.left_mul(&one_step(params, e, phase(phase0, j as f64, params.omega)));
    }
    m
}

/// `ln ‖M_{k}(φ, E)‖` for every `k` in the ascending list `checkpoints`, from a
/// single pass over the product. `use_frobenius` swaps the norm.
pub fn transfer_log_norms(
    params: &OperatorParams,
    e: f64,
    phase0: f64,
    checkpoints: &[usize],
    use_frobenius: bool,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(checkpoints.len());
    let Some(&k_max) = checkpoints.last() else {
        return out;
    };
    let (mut u00, mut u01, mut u10, mut u11) = (1.0f64, 0.0f64, 0.0f64, 1.0f64);
    let mut log_scale = 0.0f64;
    let mut next = 0usize;
    for j in 0..k_max {
        let a = e - params.f(phase(phase0, j as f64, params.omega));
        let (n00, n01) = (a * u00 - u10, a * u01 - u11);
        u10 = u00;
        u11 = u01;
        u00 = n00;
        u01 = n01;
        let m = u00.abs().max(u01.abs());
        if m > RESCALE_HI {
            u00 /= m;
            u01 /= m;
            u10 /= m;
            u11 /= m;
            log_scale += m.ln();
        }
        while next < checkpoints.len() && checkpoints[next] == j + 1 {
            let mat = [[u00, u01], [u10, u11]];
            let n = if use_frobenius { frobenius_norm(&mat) } else { spectral_norm(&mat) };
            out.push(log_scale + n.ln());
            next += 1;
        }
    }
    out
}

/// `Q_k` with `P_k(θ) = Q_k(cos 2π(θ + (k−1)ω/2))`, held as scaled samples at
/// the Chebyshev–Lobatto points `z_j = cos(πj/n)`, `n = k·p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QkPolynomial {
    pub k: usize,
    pub degree: usize,
    pub energy: f64,
    /// Samples are `P_k / e^{log_scale}`.
    pub log_scale: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl QkPolynomial {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Samples at the nodes, unscaled; may overflow for large `k`.
    pub fn values(&self) -> Vec<f64> {
        let s = self.log_scale.exp();
        self.values.iter().map(|v| v * s).collect()
    }

    /// Barycentric evaluation (second form, Lobatto weights).
    pub fn eval(&self, z: f64) -> SignedLog {
        let n = self.degree;
        if n == 0 {
            return SignedLog::from_scaled(self.values[0], self.log_scale);
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, (&zj, &vj)) in self.nodes.iter().zip(&self.values).enumerate() {
            let diff = z - zj;
            if diff == 0.0 {
                return SignedLog::from_scaled(vj, self.log_scale);
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                w *= 0.5;
            }
            let t = w / diff;
            num += t * vj;
            den += t;
        }
        SignedLog::from_scaled(num / den, self.log_scale)
    }

    /// Coefficients in the Chebyshev basis `T_0..T_n`, unscaled.
    pub fn chebyshev_coeffs(&self) -> Vec<f64> {
        let n = self.degree;
        let s = self.log_scale.exp();
        if n == 0 {
            return vec![self.values[0] * s];
        }
        (0..=n)
            .map(|m| {
                let mut acc = 0.0;
                for (j, v) in self.values.iter().enumerate() {
                    let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                    acc += w * v * (PI * (m * j) as f64 / n as f64).cos();
                }
                let mut c = 2.0 * acc / n as f64;
                if m == 0 || m == n {
                    c *= 0.5;
                }
                c * s
            })
            .collect()
    }

    /// Coefficients `c_0..c_n` in the monomial basis `z^j`. Only meaningful for
    /// small degrees; the conversion is ill-conditioned beyond a few dozen.
    pub fn monomial_coeffs(&self) -> Vec<f64> {
        chebyshev_to_monomial(&self.chebyshev_coeffs())
    }
}

/// Convert Chebyshev-basis coefficients to monomial-basis coefficients.
pub fn chebyshev_to_monomial(cheb: &[f64]) -> Vec<f64> {
    let n = cheb.len();
    let mut out = vec![0.0; n.max(1)];
    let mut t_prev = vec![1.0];
    let mut t_cur = vec![0.0, 1.0];
    for (m, c) in cheb.iter().enumerate() {
        let t = match m {
            0 => &t_prev,
            1 => &t_cur,
            _ => {
                let mut nxt = vec![0.0; m + 1];
                for (i, v) in t_cur.iter().enumerate() {
                    nxt[i + 1] += 2.0 * v;
                }
                for (i, v) in t_prev.iter().enumerate() {
                    nxt[i] -= v;
                }
                t_prev = std::mem::replace(&mut t_cur, nxt);
                &t_cur
            }
        };
        for (i, v) in t.iter().enumerate() {
            out[i] += c * v;
        }
    }
    out
}

/// Extract `Q_k` by sampling `P_k` at `k·p + 1` Chebyshev points of the centred variable.
pub fn qk_polynomial(params: &OperatorParams, e: f64, k: usize) -> Result<QkPolynomial> {
    qk_polynomial_with_max(params, e, k, DEFAULT_MAX_DEGREE)
}

pub fn qk_polynomial_with_max(
    params: &OperatorParams,
    e: f64,
    k: usize,
    max_degree: usize,
) -> Result<QkPolynomial> {
    if k == 0 {
        return Err(Error::Precondition("qk_polynomial needs k >= 1".into()));
    }
    let n = k * params.cos_degree();
    if n > max_degree {
        return Err(Error::DegreeTooLarge { degree: n, max: max_degree });
    }
    let shift = (k as f64 - 1.0) / 2.0 * params.omega;
    let samples: Vec<(f64, SignedLog)> = (0..=n)
        .map(|j| {
            let (z, t) = if n == 0 {
                (1.0, 0.0)
            } else {
                ((PI * j as f64 / n as f64).cos(), j as f64 / (2.0 * n as f64))
            };
            (z, det_pk_at(params, e, t - shift, k))
        })
        .collect();
    let log_scale = samples
        .iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(_, p)| p.ln_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    let log_scale = if log_scale.is_finite() { log_scale } else { 0.0 };
    let nodes = samples.iter().map(|(z, _)| *z).collect();
    let values = samples
        .iter()
        .map(|(_, p)| if p.is_zero() { 0.0 } else { f64::from(p.sign) * (p.ln_abs - log_scale).exp() })
        .collect();
    Ok(QkPolynomial { k, degree: n, energy: e, log_scale, nodes, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amo(l: f64) -> OperatorParams {
        OperatorParams::almost_mathieu(l, GOLDEN_OMEGA, 0.0)
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential(&amo(2.0), 0), 2.0);
        assert!(potential(&OperatorParams::almost_mathieu(5.0, GOLDEN_OMEGA, 0.25), 0).abs() < 1e-15);
        let oracle = 3.0 * (2.0 * PI * 0.618_033_988_7f64).cos();
        let p = OperatorParams::almost_mathieu(3.0, 0.618_033_988_7, 0.0);
        assert!((potential(&p, 1) - oracle).abs() < 1e-14);
        assert!((oracle + 2.212).abs() < 1e-3);
    }

    #[test]
    fn amo_potential_is_exactly_lambda_cos() {
        let p = amo(3.7);
        for i in 0..50 {
            let x = i as f64 * 0.0371;
            assert_eq!(p.f(x), 3.7 * (2.0 * PI * x).cos());
        }
    }

    #[test]
    fn potential_validation() {
        assert!(OperatorParams::with_potential(1.0, 0.3, 0.0, vec![]).is_err());
        assert!(OperatorParams::with_potential(1.0, 0.3, 0.0, vec![f64::NAN]).is_err());
        let p = OperatorParams::with_potential(1.0, 0.3, 0.0, vec![0.5, 0.0, 2.0, 0.0]).unwrap();
        assert_eq!(p.cos_degree(), 2);
    }

    #[test]
    fn restrict_shapes() {
        let p = amo(3.0);
        let t = restrict(&p, IntervalZ::new(4, 4).unwrap(), 0.7).unwrap();
        assert_eq!(t.diag, vec![potential(&p, 4) - 0.7]);
        assert!(t.off.is_empty());
        let free = restrict(&amo(0.0), IntervalZ::new(0, 2).unwrap(), 0.0).unwrap();
        assert_eq!(free.diag, vec![0.0; 3]);
        assert_eq!(free.off, vec![1.0; 2]);
        let big = restrict_with_max(&p, IntervalZ::new(0, 10).unwrap(), 0.0, 5);
        assert!(matches!(big, Err(Error::Capacity { requested: 11, max: 5 })));
        let t6 = restrict(&p, IntervalZ::new(-2, 3).unwrap(), 0.4).unwrap();
        for (i, x) in (-2..=3).enumerate() {
            assert_eq!(t6.diag[i], potential(&p, x) - 0.4);
        }
    }

    #[test]
    fn determinant_conventions() {
        let p = OperatorParams::almost_mathieu(3.0, GOLDEN_OMEGA, 0.17);
        let e = 0.4;
        let d0 = det_triple(&p, e, 0.0, 0);
        assert_eq!(d0.p_k, SignedLog::ONE);
        assert!(d0.p_k_minus_1.is_zero());
        let p1 = det_pk(&p, e, 0.0, 1).to_f64();
        assert!((p1 - (e - 3.0 * (2.0 * PI * 0.17).cos())).abs() < 1e-14);
    }

    #[test]
    fn transfer_k1_is_one_step() {
        let p = OperatorParams::almost_mathieu(3.0, GOLDEN_OMEGA, 0.3);
        let m = transfer_matrix(&p, 0.5, 0.0, 1).to_matrix();
        let b = one_step(&p, 0.5, 0.3);
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[i][j] - b[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn scaled_unit_norm_stays_in_range() {
        let p = OperatorParams::almost_mathieu(4.0, GOLDEN_OMEGA, 0.1);
        let m = transfer_matrix(&p, 0.3, 0.0, 500);
        let n = spectral_norm(&m.unit);
        assert!((1.0 - 1e-12..2.0).contains(&n), "{n}");
        assert!((m.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_closed_form() {
        // diag(3, -2) and a rotation
        assert!((spectral_norm(&[[3.0, 0.0], [0.0, -2.0]]) - 3.0).abs() < 1e-15);
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        assert!((spectral_norm(&[[c, -s], [s, c]]) - 1.0).abs() < 1e-15);
        // [[1,1],[0,1]] has norm golden ratio
        assert!((spectral_norm(&[[1.0, 1.0], [0.0, 1.0]]) - 1.618_033_988_749_895).abs() < 1e-14);
    }

    #[test]
    fn log_norm_kernel_matches_scaled_product() {
        let p = OperatorParams::almost_mathieu(3.0, GOLDEN_OMEGA, 0.0);
        let norms = transfer_log_norms(&p, 0.2, 0.37, &[1, 64, 300], false);
        for (k, ln) in [1usize, 64, 300].iter().zip(&norms) {
            let m = transfer_matrix_at(&p, 0.2, 0.37, *k);
            assert!((m.ln_norm() - ln).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn q1_reads_off_p1() {
        let p = amo(2.5);
        let q = qk_polynomial(&p, 0.7, 1).unwrap();
        let c = q.monomial_coeffs();
        assert!((c[0] - 0.7).abs() < 1e-13);
        assert!((c[1] + 2.5).abs() < 1e-13);
    }

    #[test]
    fn qk_degree_limit() {
        let p = OperatorParams::with_potential(1.0, GOLDEN_OMEGA, 0.0, vec![0.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            qk_polynomial_with_max(&p, 0.0, 11, 20),
            Err(Error::DegreeTooLarge { degree: 22, max: 20 })
        ));
    }
}
