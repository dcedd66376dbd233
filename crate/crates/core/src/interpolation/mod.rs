//! Polynomial interpolation and the measure estimates built on it.

pub mod ensemble;
pub mod gfunction;
pub mod intervals;
pub mod lagrange;
pub mod logsum;
pub mod nodes;
pub mod ratio;
pub mod sublevel;

pub use ensemble::{random_chebyshev_poly, sublevel_ensemble, EnsembleRow};
pub use gfunction::{g_function, g_function_tanh_sinh, g_inverse, GFunction};
pub use intervals::{arithmetic_progression_find, bounded_overlap_check, IntervalUnion};
pub use lagrange::{interpolation_chain_check, lagrange_eval, lagrange_eval_log, Barycentric};
pub use logsum::{log_integral_cos, log_integral_cos_quadrature, log_moment_bounds, CosTwoPi, NormalFunction};
pub use nodes::{theta_nodes, NodeFamily};
pub use ratio::{interpolation_ratio, max_ratio_over_z, RatioBound};
pub use sublevel::{sublevel_measure, sublevel_set, ChebyshevPoly, LogAbsPoly, MonomialPoly};
