//! n-convexity, n-concavity and Hyers-Ulam stabilization of sampled functions.
//!
//! `f` is n-convex when every tuple `x_0 < x_1 < … < x_{n+1}` satisfies
//! `(−1)^n f(x_0) ≤ (−1)^n Σ c_i(x_0; x_1, …, x_{n+1}) f(x_i)`, i.e. `f` never
//! crosses its degree-`n` extrapolation from the right on the wrong side.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lagrange::Polynomial;
use crate::selection::{weights, Tuple};
use crate::separation::{separate, SampledFn};
use crate::tuples;

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub tuple: Tuple,
    /// Amount by which the inequality is violated (positive).
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

/// `f(x_0) − Σ c_i f(x_i)` for one tuple.
fn extrapolation_error(values: &[f64], xs: &[f64], idx: &[usize]) -> f64 {
    let c = weights(xs, idx);
    let extrapolated: f64 = idx[1..].iter().zip(&c).map(|(&i, ci)| ci * values[i]).sum();
    values[idx[0]] - extrapolated
}

fn validate(f: &SampledFn, n: usize, cfg: &Config) -> Result<()> {
    cfg.check_degree(n)?;
    f.grid().require_points(n)
}

fn convexity(f: &SampledFn, n: usize, sign: f64, cfg: &Config) -> Result<ConvexityReport> {
    validate(f, n, cfg)?;
    let orientation = if n.is_multiple_of(2) { sign } else { -sign };
    let tol = cfg.decision;
    let (values, xs) = (f.values(), f.xs());
    let hit = tuples::first_match(f.len(), n + 2, cfg.parallel, |idx| {
        let defect = orientation * extrapolation_error(values, xs, idx);
        (defect > tol).then_some(defect)
    });
    Ok(match hit {
        Some((idx, defect)) => ConvexityReport {
            holds: false,
            counterexample: Some(Counterexample {
                tuple: Tuple::new(idx, f.len())?,
                defect,
            }),
        },
        None => ConvexityReport {
            holds: true,
            counterexample: None,
        },
    })
}

pub fn is_n_convex(f: &SampledFn, n: usize, cfg: &Config) -> Result<ConvexityReport> {
    convexity(f, n, 1.0, cfg)
}

/// `f` is n-concave iff `−f` is n-convex.
pub fn is_n_concave(f: &SampledFn, n: usize, cfg: &Config) -> Result<ConvexityReport> {
    convexity(f, n, -1.0, cfg)
}

/// The tuple with the largest `|f(x_0) − Σ c_i f(x_i)|`, with that value.
pub fn max_deviation(f: &SampledFn, n: usize, cfg: &Config) -> Result<(Tuple, f64)> {
    validate(f, n, cfg)?;
    let (values, xs) = (f.values(), f.xs());
    let (idx, eps) = tuples::max_score(f.len(), n + 2, cfg.parallel, |idx| {
        extrapolation_error(values, xs, idx).abs()
    })
    .expect("grid holds at least one tuple");
    Ok((Tuple::new(idx, f.len())?, eps))
}

/// Smallest `ε` for which `|f(x_0) − Σ c_i f(x_i)| ≤ ε` on every tuple.
pub fn hyers_ulam_epsilon(f: &SampledFn, n: usize, cfg: &Config) -> Result<f64> {
    max_deviation(f, n, cfg).map(|(_, eps)| eps)
}

/// A polynomial `w` of degree at most `n` with `|f − w| ≤ ε / 2` on the grid.
///
/// Separates `f` from `f + ε` and shifts the separator down by `ε / 2`. If the
/// solver rejects a boundary case, `ε` is inflated once by ten decision
/// tolerances before giving up.
pub fn stabilize(f: &SampledFn, n: usize, epsilon: f64, cfg: &Config) -> Result<Polynomial> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid(format!(
            "epsilon must be finite and ≥ 0, got {epsilon}"
        )));
    }
    let (tuple, required) = max_deviation(f, n, cfg)?;
    if epsilon < required - cfg.decision {
        return Err(Error::EpsilonTooSmall {
            epsilon,
            required,
            indices: tuple.into_vec(),
        });
    }
    let mut eps = epsilon;
    for attempt in 0..2 {
        let upper = f.map(|v| v + eps);
        let report = separate(f, &upper, n, cfg)?;
        if let Some(phi) = report.witness {
            return Ok(phi.shifted(-0.5 * eps));
        }
        log::debug!("stabilize attempt {attempt} rejected at epsilon {eps:e}");
        eps += 10.0 * cfg.decision;
    }
    Err(Error::Solver(format!(
        "no separator between f and f + {eps:e} although epsilon ≥ {required:e}"
    )))
}
