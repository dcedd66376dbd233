//! Phase arithmetic modulo 1.
//!
//! Orbit points `θ + nω` are reduced with a double-double representation so
//! that distances to the integer (or half-integer) lattice stay accurate far
//! below the f64 spacing of the unreduced sum.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        Self { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = two_sum(p, e);
        Self { hi, lo }
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac(self) -> Self {
        let fl = self.hi.floor();
        let mut r = Self { hi: self.hi - fl, lo: self.lo };
        let (hi, lo) = two_sum(r.hi, r.lo);
        r = Self { hi, lo };
        if r.hi < 0.0 || (r.hi == 0.0 && r.lo < 0.0) {
            r = r.add(Self::from_f64(1.0));
        } else if r.hi >= 1.0 {
            r = r.add(Self::from_f64(-1.0));
        }
        r
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// `θ + mult·ω` as a double-double, where `mult` may be a half-integer.
pub fn orbit_point(theta: f64, mult: f64, omega: f64) -> DoubleDouble {
    DoubleDouble::from_f64(omega).mul_f64(mult).add(DoubleDouble::from_f64(theta))
}

/// `{θ + mult·ω}` in `[0, 1)`.
pub fn frac_orbit(theta: f64, mult: f64, omega: f64) -> f64 {
    let f = orbit_point(theta, mult, omega).frac().to_f64();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance of `x` to the nearest point of `Z/2`, in `[0, 1/4]`.
pub fn dist_to_half_lattice(x: DoubleDouble) -> f64 {
    let doubled = x.mul_f64(2.0).frac();
    let d = doubled.to_f64();
    d.min(1.0 - d) / 2.0
}

/// `|sin 2π x|` evaluated through the reduced distance to `Z/2`.
pub fn abs_sin_2pi(x: DoubleDouble) -> f64 {
    (2.0 * std::f64::consts::PI * dist_to_half_lattice(x)).sin()
}

/// Fast phase `{θ + nω}` for the operator kernels (single fma).
#[inline]
pub fn phase(theta: f64, n: f64, omega: f64) -> f64 {
    let x = n.mul_add(omega, theta);
    x - x.floor()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frac_is_in_unit_interval() {
        for &(t, m, w) in &[(0.3, 1e7, 0.618_033_988_749_894_9), (-0.7, 3.5, 0.1), (0.0, 0.0, 0.5)] {
            let f = frac_orbit(t, m, w);
            assert!((0.0..1.0).contains(&f), "{f}");
        }
    }

    #[test]
    fn exact_cancellation_is_resolved() {
        let omega = 0.618_033_988_749_894_9;
        let k0 = 1000.0;
        let theta = orbit_point(0.0, -k0 / 2.0, omega).frac().to_f64();
        let d = dist_to_half_lattice(orbit_point(theta, k0 / 2.0, omega));
        assert!(d < 1e-16, "{d}");
    }

    #[test]
    fn half_lattice_distance() {
        assert!((dist_to_half_lattice(DoubleDouble::from_f64(0.25)) - 0.25).abs() < 1e-16);
        assert!(dist_to_half_lattice(DoubleDouble::from_f64(0.5)) < 1e-16);
        assert!((dist_to_half_lattice(DoubleDouble::from_f64(0.6)) - 0.1).abs() < 1e-15);
    }
}
