//! Separation of two sampled functions by a polynomial of degree at most `n`.
//!
//! `f` and `g` can be separated (`f ≤ w ≤ g` on the grid for some `w ∈ P_n`)
//! iff `f ≤ g` pointwise and every tuple `x_0 < x_1 < … < x_{n+1}` satisfies
//!
//! ```text
//! f(x_0) ≤ Σ_{i odd} c_i g(x_i) + Σ_{i even} c_i f(x_i)     (upper bound)
//! g(x_0) ≥ Σ_{i odd} c_i f(x_i) + Σ_{i even} c_i g(x_i)     (lower bound)
//! ```
//!
//! with `c_i = c_i(x_0; x_1, …, x_{n+1})` and `i` counted from 1. Tuples with
//! `x_0 = x_1` collapse to the pointwise check and are not enumerated.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lagrange::Polynomial;
use crate::selection::{self, weights, Tuple};
use crate::setvalued::{Grid, Interval, IntervalFn};
use crate::tuples;

/// A real function sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFn {
    grid: Grid,
    values: Vec<f64>,
}

impl SampledFn {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "value at grid index {i} is not finite"
            )));
        }
        Ok(SampledFn { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.xs().iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn xs(&self) -> &[f64] {
        self.grid.xs()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, op: impl Fn(f64) -> f64) -> SampledFn {
        SampledFn {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| op(v)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `f(x_0)` exceeds the upper bound.
    Upper,
    /// `g(x_0)` falls below the lower bound.
    Lower,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `slack` is `upper − f(x_0)` or `g(x_0) − lower`, negative here.
    Inequality {
        tuple: Tuple,
        side: Side,
        slack: f64,
    },
    /// `gap = f(x) − g(x) > 0` at grid index `index`.
    Pointwise { index: usize, gap: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    pub separable: bool,
    pub witness: Option<Polynomial>,
    pub violation: Option<Violation>,
}

impl SeparationReport {
    fn rejected(violation: Violation) -> Self {
        SeparationReport {
            separable: false,
            witness: None,
            violation: Some(violation),
        }
    }
}

/// Right-hand sides of the two tuple inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationBounds {
    pub upper: f64,
    pub lower: f64,
}

fn shared_grid(f: &SampledFn, g: &SampledFn) -> Result<()> {
    if f.grid != g.grid {
        return Err(Error::invalid("f and g are sampled on different grids"));
    }
    Ok(())
}

fn raw_bounds(f: &[f64], g: &[f64], xs: &[f64], idx: &[usize]) -> SeparationBounds {
    let c = weights(xs, idx);
    let (mut upper, mut lower) = (0.0, 0.0);
    for (pos, (&i, &ci)) in idx[1..].iter().zip(&c).enumerate() {
        // pos 0 is i = 1 (odd)
        if pos % 2 == 0 {
            upper += ci * g[i];
            lower += ci * f[i];
        } else {
            upper += ci * f[i];
            lower += ci * g[i];
        }
    }
    SeparationBounds { upper, lower }
}

pub fn separation_bounds(f: &SampledFn, g: &SampledFn, t: &Tuple) -> Result<SeparationBounds> {
    shared_grid(f, g)?;
    let t = Tuple::new(t.indices().to_vec(), f.len())?;
    Ok(raw_bounds(&f.values, &g.values, f.xs(), t.indices()))
}

fn pointwise_violation(f: &SampledFn, g: &SampledFn, tol: f64) -> Option<Violation> {
    f.values
        .iter()
        .zip(&g.values)
        .position(|(a, b)| a > &(b + tol))
        .map(|index| Violation::Pointwise {
            index,
            gap: f.values[index] - g.values[index],
        })
}

fn validate(f: &SampledFn, g: &SampledFn, n: usize, cfg: &Config) -> Result<()> {
    shared_grid(f, g)?;
    cfg.check_degree(n)?;
    f.grid.require_points(n)
}

/// Checks the pointwise condition and then every tuple inequality, reporting
/// the first violation found. Never produces a witness.
pub fn check_separation(
    f: &SampledFn,
    g: &SampledFn,
    n: usize,
    cfg: &Config,
) -> Result<SeparationReport> {
    validate(f, g, n, cfg)?;
    let tol = cfg.decision;
    if let Some(v) = pointwise_violation(f, g, tol) {
        return Ok(SeparationReport::rejected(v));
    }
    let (fv, gv, xs) = (&f.values, &g.values, f.xs());
    let hit = tuples::first_match(f.len(), n + 2, cfg.parallel, |idx| {
        let b = raw_bounds(fv, gv, xs, idx);
        let upper_slack = b.upper - fv[idx[0]];
        let lower_slack = gv[idx[0]] - b.lower;
        if upper_slack < -tol {
            Some((Side::Upper, upper_slack))
        } else if lower_slack < -tol {
            Some((Side::Lower, lower_slack))
        } else {
            None
        }
    });
    Ok(match hit {
        Some((idx, (side, slack))) => SeparationReport::rejected(Violation::Inequality {
            tuple: Tuple::new(idx, f.len())?,
            side,
            slack,
        }),
        None => SeparationReport {
            separable: true,
            witness: None,
            violation: None,
        },
    })
}

/// Builds a separating polynomial through the selection problem for
/// `F = [f, g]`.
pub fn separate(f: &SampledFn, g: &SampledFn, n: usize, cfg: &Config) -> Result<SeparationReport> {
    validate(f, g, n, cfg)?;
    if let Some(v) = pointwise_violation(f, g, cfg.decision) {
        return Ok(SeparationReport::rejected(v));
    }
    // f may exceed g by at most the decision tolerance here.
    let intervals = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(&a, &b)| Interval::new(a.min(b), a.max(b)))
        .collect::<Result<Vec<_>>>()?;
    let tube = IntervalFn::new(f.grid.clone(), intervals)?;
    let report = selection::solve_selection(&tube, n, cfg)?;
    if report.feasible {
        return Ok(SeparationReport {
            separable: true,
            witness: report.witness,
            violation: None,
        });
    }
    let cert = report
        .certificate
        .expect("infeasible selection reports carry a certificate");
    let b = raw_bounds(&f.values, &g.values, f.xs(), cert.tuple.indices());
    let i0 = cert.tuple.indices()[0];
    let upper_slack = b.upper - f.values[i0];
    let lower_slack = g.values[i0] - b.lower;
    let (side, slack) = if upper_slack <= lower_slack {
        (Side::Upper, upper_slack)
    } else {
        (Side::Lower, lower_slack)
    };
    Ok(SeparationReport::rejected(Violation::Inequality {
        tuple: cert.tuple,
        side,
        slack,
    }))
}

/// Affine separability in interpolation form: for grid points `x < z < y`
/// with `z = t x + (1 − t) y`,
///
/// ```text
/// f(z) ≤ t g(x) + (1 − t) g(y)   and   g(z) ≥ t f(x) + (1 − t) f(y),
/// ```
///
/// together with `f ≤ g` at every grid point (the `t ∈ {0, 1}` cases).
pub fn affine_condition(f: &SampledFn, g: &SampledFn, cfg: &Config) -> Result<bool> {
    shared_grid(f, g)?;
    f.grid.require_points(1)?;
    let tol = cfg.decision;
    if pointwise_violation(f, g, tol).is_some() {
        return Ok(false);
    }
    let (xs, fv, gv) = (f.xs(), &f.values, &g.values);
    let m = xs.len();
    for a in 0..m {
        for b in a + 2..m {
            for z in a + 1..b {
                let t = (xs[z] - xs[b]) / (xs[a] - xs[b]);
                if fv[z] > t * gv[a] + (1.0 - t) * gv[b] + tol
                    || gv[z] < t * fv[a] + (1.0 - t) * fv[b] - tol
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
