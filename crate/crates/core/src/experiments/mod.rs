//! Numerical experiments: box spectra, decay fits, parameter sweeps and the
//! seeded verification suites.

pub mod spectrum;
pub mod suites;
pub mod sweep;

pub use spectrum::{
    box_eigenproblem, craig_simon_check, craig_simon_check_vector, decay_rate_fit, decay_rate_fit_with_gamma,
    line_fit, BoxSpectrum, DecayFit, EigenPair,
};
pub use suites::{verify_suite, ToleranceConfig, SUITES};
pub use sweep::{phase_sweep, SweepConfig, SweepRow, SWEEP_HEADER};
