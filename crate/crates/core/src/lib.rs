//! Quasi-periodic Schrödinger operators `(Hψ)(n) = ψ(n+1) + ψ(n−1) + f(θ + nω)ψ(n)`
//! on `ℤ`: transfer matrices, finite-volume determinants and Green's functions,
//! Lyapunov exponents, Diophantine arithmetic of the frequency, and the
//! interpolation estimates used to control sublevel sets of determinants.
//!
//! Every quantity that can over- or underflow is carried as a signed logarithm
//! ([`SignedLog`]); orbit phases are reduced modulo 1 in double-double precision.

pub mod arithmetic;
pub mod error;
pub mod experiments;
pub mod green;
pub mod interpolation;
pub mod linalg;
pub mod lyapunov;
pub mod operator;
pub mod phase;
pub mod quadrature;
pub mod report;
pub mod signed_log;

pub use error::{Error, Result};
pub use operator::{IntervalZ, OperatorParams, SymTridiagonal, GOLDEN_OMEGA, SQRT2_MINUS_1};
pub use report::{Check, DiagnosticReport, Verdict};
pub use signed_log::SignedLog;
