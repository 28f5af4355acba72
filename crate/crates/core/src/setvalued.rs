//! Sampled domains, compact intervals and sign-aware scaled interval sums.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lagrange::Nodes;

/// A nonempty compact interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(format!(
                "interval [{lo}, {hi}] is not finite"
            )));
        }
        if lo > hi {
            return Err(Error::invalid(format!("interval [{lo}, {hi}] has lo > hi")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lo - tol <= v && v <= self.hi + tol
    }

    /// `a ⊆ self`.
    pub fn includes(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Signed separation between two intervals: positive when they are disjoint,
/// zero when they touch, negative when they overlap.
pub fn gap(a: &Interval, b: &Interval) -> f64 {
    a.lo.max(b.lo) - a.hi.min(b.hi)
}

/// `true` iff `max(a.lo, b.lo) ≤ min(a.hi, b.hi) + tol`.
pub fn intersects(a: &Interval, b: &Interval, tol: f64) -> bool {
    gap(a, b) <= tol
}

/// `Σ L_i · ivs[i]` as an interval.
///
/// Positive weights scale `[lo, hi]` to `[L lo, L hi]`, negative weights flip
/// it to `[L hi, L lo]`, and an exact zero contributes `[0, 0]`.
pub fn scaled_sum(weights: &[f64], ivs: &[Interval]) -> Result<Interval> {
    if weights.len() != ivs.len() {
        return Err(Error::invalid(format!(
            "{} weights for {} intervals",
            weights.len(),
            ivs.len()
        )));
    }
    Ok(scaled_sum_iter(weights.iter().copied().zip(ivs.iter())))
}

pub(crate) fn scaled_sum_iter<'a>(terms: impl Iterator<Item = (f64, &'a Interval)>) -> Interval {
    let (mut u, mut v) = (0.0, 0.0);
    for (l, iv) in terms {
        if l > 0.0 {
            u += l * iv.lo;
            v += l * iv.hi;
        } else if l < 0.0 {
            u += l * iv.hi;
            v += l * iv.lo;
        }
    }
    Interval { lo: u, hi: v }
}

/// Strictly increasing sample abscissae standing in for a real interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Nodes,
}

impl Grid {
    pub fn new(xs: Vec<f64>) -> Result<Self> {
        Self::with_separation(xs, Config::default().node_separation)
    }

    pub fn with_separation(xs: Vec<f64>, min_separation: f64) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::invalid(format!(
                "a grid needs at least 2 points, got {}",
                xs.len()
            )));
        }
        Ok(Grid {
            nodes: Nodes::with_separation(xs, min_separation)?,
        })
    }

    pub fn xs(&self) -> &[f64] {
        self.nodes.as_slice()
    }

    pub fn nodes(&self) -> &Nodes {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Degree-`n` problems need at least `n + 2` points.
    pub(crate) fn require_points(&self, n: usize) -> Result<()> {
        if self.len() < n + 2 {
            return Err(Error::invalid(format!(
                "degree {n} needs at least {} grid points, got {}",
                n + 2,
                self.len()
            )));
        }
        Ok(())
    }
}

/// An interval-valued function sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalFn {
    grid: Grid,
    intervals: Vec<Interval>,
}

impl IntervalFn {
    pub fn new(grid: Grid, intervals: Vec<Interval>) -> Result<Self> {
        if grid.len() != intervals.len() {
            return Err(Error::invalid(format!(
                "{} grid points but {} intervals",
                grid.len(),
                intervals.len()
            )));
        }
        for (i, iv) in intervals.iter().enumerate() {
            Interval::new(iv.lo, iv.hi)
                .map_err(|e| Error::invalid(format!("interval at grid index {i}: {e}")))?;
        }
        Ok(IntervalFn { grid, intervals })
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        let intervals = grid
            .xs()
            .iter()
            .map(|&x| {
                let (lo, hi) = f(x);
                Interval::new(lo, hi)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(grid, intervals)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn xs(&self) -> &[f64] {
        self.grid.xs()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `F ⊆ other` pointwise on a shared grid.
    pub fn is_subset_of(&self, other: &IntervalFn) -> bool {
        self.grid == other.grid
            && self
                .intervals
                .iter()
                .zip(&other.intervals)
                .all(|(a, b)| b.includes(a))
    }
}
