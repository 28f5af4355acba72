//! Polynomial selections of interval-valued functions sampled on a finite
//! grid, separation of two sampled functions by a polynomial of bounded
//! degree, n-convexity tests and Hyers-Ulam stabilization.
//!
//! Every decision procedure comes in two flavours: a combinatorial scan over
//! ordered `(n + 2)`-tuples of grid points, which produces certificates, and a
//! constructive solver, which produces witness polynomials. The [`oracle`]
//! module holds an independent brute-force check used by the test suites.
//!
//! Degree `n = 0` (constant selections) is accepted as an extension: it is
//! decided by pairwise intersection of the sampled intervals.

pub mod analysis;
pub mod config;
pub mod error;
pub mod lagrange;
mod lp;
pub mod oracle;
pub mod selection;
pub mod separation;
pub mod setvalued;
mod tuples;

pub use analysis::{
    hyers_ulam_epsilon, is_n_concave, is_n_convex, max_deviation, stabilize, ConvexityReport,
    Counterexample,
};
pub use config::Config;
pub use error::{Error, Result};
pub use lagrange::{coefficients, evaluate, interpolate, to_monomial, Nodes, Polynomial};
pub use selection::{
    check_selection, phi, solve_selection, tuple_condition, tuple_gap, witness_for_tuple,
    Certificate, FeasibilityReport, Tuple,
};
pub use separation::{
    affine_condition, check_separation, separate, separation_bounds, SampledFn, SeparationBounds,
    SeparationReport, Side, Violation,
};
pub use setvalued::{intersects, scaled_sum, Grid, Interval, IntervalFn};
