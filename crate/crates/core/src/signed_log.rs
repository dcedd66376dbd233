//! Real numbers carried as `(sign, ln|value|)` so that quantities growing
//! like `e^{γk}` survive products of thousands of factors.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedLog {
    /// -1, 0 or +1.
    pub sign: i8,
    /// `ln|value|`; `-inf` for zero.
    pub ln_abs: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0, ln_abs: f64::NEG_INFINITY };
    pub const ONE: SignedLog = SignedLog { sign: 1, ln_abs: 0.0 };

    pub fn new(sign: i8, ln_abs: f64) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { sign: sign.signum(), ln_abs }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self { sign: if x > 0.0 { 1 } else { -1 }, ln_abs: x.abs().ln() }
        }
    }

    /// Value times `e^{log_scale}`.
    pub fn from_scaled(x: f64, log_scale: f64) -> Self {
        let mut s = Self::from_f64(x);
        if s.sign != 0 {
            s.ln_abs += log_scale;
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Back to a plain float; overflows to ±inf and underflows to 0.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.ln_abs.exp(),
        }
    }

    pub fn abs(&self) -> Self {
        Self { sign: self.sign.abs(), ln_abs: self.ln_abs }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.sign == 0 {
            return *other;
        }
        if other.sign == 0 {
            return *self;
        }
        let (big, small) = if self.ln_abs >= other.ln_abs { (self, other) } else { (other, self) };
        let ratio = (small.ln_abs - big.ln_abs).exp();
        let factor = if big.sign == small.sign { 1.0 + ratio } else { 1.0 - ratio };
        if factor == 0.0 {
            return Self::ZERO;
        }
        Self { sign: big.sign, ln_abs: big.ln_abs + factor.ln() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&-*other)
    }

    /// `|self|` compared against `|other|`.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.ln_abs.partial_cmp(&other.ln_abs).unwrap_or(Ordering::Equal)
    }
}

impl Neg for SignedLog {
    type Output = SignedLog;
    fn neg(self) -> SignedLog {
        SignedLog { sign: -self.sign, ln_abs: self.ln_abs }
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;
    fn mul(self, rhs: SignedLog) -> SignedLog {
        SignedLog::new(self.sign * rhs.sign, self.ln_abs + rhs.ln_abs)
    }
}

impl Div for SignedLog {
    type Output = SignedLog;
    /// Division by zero yields an infinite log-magnitude with the numerator's sign.
    fn div(self, rhs: SignedLog) -> SignedLog {
        if rhs.sign == 0 {
            return SignedLog { sign: self.sign, ln_abs: f64::INFINITY };
        }
        SignedLog::new(self.sign * rhs.sign, self.ln_abs - rhs.ln_abs)
    }
}

impl fmt::Display for SignedLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "+" }, self.ln_abs),
        }
    }
}

/// `ln Σ e^{x_i}` in a fixed summation order.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_infinite() {
        return max;
    }
    let s: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + s.ln()
}
