//! Finite unions of closed intervals with exact rational endpoints.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::report::{DiagnosticReport, Verdict};

/// Disjoint, sorted, non-degenerate closed intervals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalUnion {
    parts: Vec<(BigRational, BigRational)>,
}

pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite endpoint")
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Normalises arbitrary (possibly overlapping) intervals; empty and
    /// single-point pieces are dropped since they carry no measure.
    pub fn new(mut parts: Vec<(BigRational, BigRational)>) -> Self {
        parts.retain(|(a, b)| a < b);
        parts.sort();
        let mut merged: Vec<(BigRational, BigRational)> = Vec::with_capacity(parts.len());
        for (a, b) in parts {
            match merged.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        Self { parts: merged }
    }

    pub fn interval(a: BigRational, b: BigRational) -> Self {
        Self::new(vec![(a, b)])
    }

    pub fn from_f64(parts: &[(f64, f64)]) -> Self {
        Self::new(parts.iter().map(|(a, b)| (rational(*a), rational(*b))).collect())
    }

    pub fn parts(&self) -> &[(BigRational, BigRational)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn measure(&self) -> BigRational {
        self.parts.iter().fold(BigRational::zero(), |acc, (a, b)| acc + (b - a))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.parts.iter().any(|(a, b)| a <= x && x <= b)
    }

    pub fn translate(&self, shift: &BigRational) -> Self {
        Self { parts: self.parts.iter().map(|(a, b)| (a + shift, b + shift)).collect() }
    }

    pub fn intersect_interval(&self, lo: &BigRational, hi: &BigRational) -> Self {
        let parts = self
            .parts
            .iter()
            .filter_map(|(a, b)| {
                let a = if a > lo { a.clone() } else { lo.clone() };
                let b = if b < hi { b.clone() } else { hi.clone() };
                (a < b).then_some((a, b))
            })
            .collect();
        Self { parts }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.parts.iter().chain(&other.parts).cloned().collect())
    }
}

/// Largest number of the given unions sharing a common point, together with
/// such a point (closed intervals, so touching endpoints count).
fn max_multiplicity(sets: &[IntervalUnion]) -> (usize, Option<BigRational>) {
    // events: (x, kind) with openings (kind 0) ordered before closings (kind 1)
    let mut events: Vec<(BigRational, u8)> = Vec::new();
    for s in sets {
        for (a, b) in s.parts() {
            events.push((a.clone(), 0));
            events.push((b.clone(), 1));
        }
    }
    events.sort();
    let mut depth = 0usize;
    let mut best = (0usize, None);
    for (x, kind) in events {
        if kind == 0 {
            depth += 1;
            if depth > best.0 {
                best = (depth, Some(x));
            }
        } else {
            depth -= 1;
        }
    }
    best
}

fn floor_div(x: &BigRational, delta: &BigRational) -> BigInt {
    (x / delta).floor().to_integer()
}

/// `n + 1` points of `B` whose pairwise differences are positive integer
/// multiples of `δ`, returned in increasing order.
///
/// The offset `x ∈ [0, δ]` is chosen where the most translates
/// `A_i = (B − iδ) ∩ [0, δ]` overlap; since `Σ|A_i| = |B| > nδ` some point
/// lies in at least `n + 1` of them.
pub fn arithmetic_progression_find(b: &IntervalUnion, n: usize, delta: &BigRational) -> Result<Vec<BigRational>> {
    if !delta.is_positive() {
        return Err(Error::Precondition("step must be positive".into()));
    }
    if delta * BigRational::from_integer(BigInt::from(n)) >= b.measure() {
        return Err(Error::Precondition(format!(
            "step {} is not below |B|/n = {}",
            delta,
            b.measure() / BigRational::from_integer(BigInt::from(n.max(1)))
        )));
    }
    let (first, last) = match (b.parts().first(), b.parts().last()) {
        (Some(f), Some(l)) => (f.0.clone(), l.1.clone()),
        _ => return Err(Error::Precondition("empty set".into())),
    };
    let zero = BigRational::zero();
    let i_lo = floor_div(&first, delta) - BigInt::one();
    let i_hi = floor_div(&last, delta) + BigInt::one();
    let mut shifts = Vec::new();
    let mut translates = Vec::new();
    let mut i = i_lo;
    while i <= i_hi {
        let shift = BigRational::from_integer(i.clone()) * delta;
        let a = b.translate(&-shift.clone()).intersect_interval(&zero, delta);
        if !a.is_empty() {
            shifts.push(i.clone());
            translates.push(a);
        }
        i += BigInt::one();
    }
    let (mult, x) = max_multiplicity(&translates);
    let x = match x {
        Some(x) if mult > n => x,
        _ => return Err(Error::Precondition(format!("no offset of multiplicity {} (max {mult})", n + 1))),
    };
    let points: Vec<BigRational> = shifts
        .iter()
        .zip(&translates)
        .filter(|(_, a)| a.contains(&x))
        .take(n + 1)
        .map(|(i, _)| &x + BigRational::from_integer(i.clone()) * delta)
        .collect();
    debug_assert!(points.iter().all(|p| b.contains(p)));
    Ok(points)
}

/// `|∪A_i| >= (1/k)·Σ|A_i|` for sets of overlap multiplicity at most `k`.
pub fn bounded_overlap_check(sets: &[IntervalUnion], k: usize) -> Result<DiagnosticReport> {
    if k == 0 {
        return Err(Error::Precondition("multiplicity bound must be positive".into()));
    }
    let (mult, _) = max_multiplicity(sets);
    if mult > k {
        return Err(Error::Precondition(format!("overlap multiplicity {mult} exceeds {k}")));
    }
    let union = sets.iter().fold(IntervalUnion::empty(), |acc, s| acc.union(s));
    let total = sets.iter().fold(BigRational::zero(), |acc, s| acc + s.measure());
    let lhs = union.measure();
    let rhs = total / BigRational::from_integer(BigInt::from(k));
    let ok = lhs >= rhs;
    Ok(DiagnosticReport::new(
        "bounded_overlap",
        lhs.to_f64().unwrap_or(f64::NAN),
        rhs.to_f64().unwrap_or(f64::NAN),
        Verdict::from_bool(ok),
    )
    .input("k", k as u64)
    .input("sets", sets.len() as u64)
    .input("multiplicity", mult as u64)
    .input("exact", json!({"union": lhs.to_string(), "bound": rhs.to_string()})))
}

/// Pairwise differences of the points are positive integer multiples of `δ`
/// and every point lies in `B`.
pub fn is_progression_in(points: &[BigRational], b: &IntervalUnion, delta: &BigRational) -> bool {
    points.iter().all(|p| b.contains(p))
        && points.windows(2).all(|w| {
            let q = (&w[1] - &w[0]) / delta;
            q.is_integer() && q.is_positive()
        })
}
