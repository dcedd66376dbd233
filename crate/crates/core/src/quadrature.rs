//! One-dimensional quadrature: adaptive Gauss–Kronrod (7/15) and
//! double-exponential (tanh-sinh) rules.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32, evals: &mut usize) -> (f64, f64) {
    let (v, e) = gk15(f, a, b);
    *evals += 15;
    if e <= tol || depth == 0 || (b - a).abs() < 1e-14 * a.abs().max(b.abs()).max(1.0) {
        return (v, e);
    }
    let m = 0.5 * (a + b);
    let (v1, e1) = adapt(f, a, m, 0.5 * tol, depth - 1, evals);
    let (v2, e2) = adapt(f, m, b, 0.5 * tol, depth - 1, evals);
    (v1 + v2, e1 + e2)
}

/// Adaptive bisection with the 7/15-point Gauss–Kronrod pair.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Quadrature {
    let mut evaluations = 0;
    let (value, error_estimate) = adapt(&f, a, b, tol, 40, &mut evaluations);
    Quadrature { value, error_estimate, evaluations }
}

/// Tanh-sinh rule on `[a, b]`. The integrand receives `(x, x − a, b − x)`
/// with both distances computed without cancellation, so endpoint
/// singularities can be evaluated accurately.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Quadrature {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let len = b - a;
    let mut evaluations = 0;
    let mut term = |t: f64| -> f64 {
        let s = half_pi * t.sinh();
        let cosh_s = s.cosh();
        let w = half_pi * t.cosh() / (cosh_s * cosh_s);
        if !w.is_finite() || w < 1e-300 {
            return 0.0;
        }
        let dl = len / (1.0 + (-2.0 * s).exp());
        let dr = len / (1.0 + (2.0 * s).exp());
        if dl <= 0.0 || dr <= 0.0 {
            return 0.0;
        }
        let x = if dl < dr { a + dl } else { b - dr };
        evaluations += 1;
        0.5 * len * w * f(x, dl, dr)
    };
    let t_max = 6.5;
    let mut h = 1.0;
    let mut sum = term(0.0);
    let mut k = 1.0;
    while k * h <= t_max {
        sum += term(k * h) + term(-k * h);
        k += 1.0;
    }
    let mut value = h * sum;
    let mut error_estimate = f64::INFINITY;
    for level in 1..=12 {
        h *= 0.5;
        let mut extra = 0.0;
        let mut j = 1.0;
        while j * h <= t_max {
            extra += term(j * h) + term(-j * h);
            j += 2.0;
        }
        sum += extra;
        let next = h * sum;
        error_estimate = (next - value).abs();
        value = next;
        if level >= 3 && error_estimate <= tol * value.abs().max(1.0) {
            break;
        }
    }
    Quadrature { value, error_estimate, evaluations }
}

/// `L(a) = ∫_0^a ln sin x dx` for `0 <= a <= π/2`, by subtracting the `ln x`
/// singularity and integrating the smooth remainder `ln(sin x / x)`.
pub fn ln_sin_integral(a: f64, tol: f64) -> f64 {
    assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&a), "ln_sin_integral needs 0 <= a <= pi/2");
    if a == 0.0 {
        return 0.0;
    }
    let singular = a * a.ln() - a;
    let smooth = gauss_kronrod(
        |x| {
            if x == 0.0 {
                0.0
            } else {
                (x.sin() / x).ln()
            }
        },
        0.0,
        a,
        tol,
    );
    singular + smooth.value
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, LN_2, PI};

    #[test]
    fn polynomials_are_exact() {
        let q = gauss_kronrod(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0, 1e-14);
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0) + 3.0;
        assert!((q.value - exact).abs() < 1e-12);
    }

    #[test]
    fn ln_sin_closed_form() {
        let v = ln_sin_integral(FRAC_PI_2, 1e-14);
        assert!((v + FRAC_PI_2 * LN_2).abs() < 1e-12, "{v}");
    }

    #[test]
    fn tanh_sinh_endpoint_log() {
        // ∫_0^1 ln x dx = −1
        let q = tanh_sinh(|_, dl, _| dl.ln(), 0.0, 1.0, 1e-14);
        assert!((q.value + 1.0).abs() < 1e-12, "{}", q.value);
        // ∫_0^π ln sin x dx = −π ln 2
        let q = tanh_sinh(|_, dl, dr| dl.min(dr).sin().ln(), 0.0, PI, 1e-14);
        assert!((q.value + PI * LN_2).abs() < 1e-11, "{}", q.value);
    }

    #[test]
    fn schemes_agree_on_smooth_integrand() {
        let a = gauss_kronrod(|x| (3.0 * x).cos() * (-x).exp(), 0.0, 2.0, 1e-13).value;
        let b = tanh_sinh(|x, _, _| (3.0 * x).cos() * (-x).exp(), 0.0, 2.0, 1e-13).value;
        assert!((a - b).abs() < 1e-12);
    }
}
