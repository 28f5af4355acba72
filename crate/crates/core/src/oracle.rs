//! Brute-force ground truth and seeded instance generators.
//!
//! [`brute_force_feasible`] never looks at tuples or Lagrange weights: it
//! enumerates every vertex candidate of the polyhedron
//! `{a ∈ R^{n+1} : lo_i ≤ Σ_j a_j x_i^j ≤ hi_i}` by making `n + 1` rows active
//! at one of their faces, solving the Vandermonde system, and testing all
//! rows. The polyhedron contains no line once it has `n + 1` distinct rows, so
//! it is nonempty iff some candidate passes. Candidates that land within a
//! rounding band of the tolerance are re-decided in exact rational
//! arithmetic.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{is_n_concave, is_n_convex};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::selection::{tuple_condition, Tuple};
use crate::separation::SampledFn;
use crate::setvalued::{scaled_sum, Grid, Interval, IntervalFn};

/// Largest row count the oracle accepts.
pub const MAX_ROWS: usize = 14;

const AMBIGUITY_BAND: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Interval constraints on the values of a polynomial with `dimension`
/// monomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    rows: Vec<Row>,
    dimension: usize,
}

impl ConstraintSystem {
    pub fn new(rows: Vec<Row>, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if rows.windows(2).any(|w| w[0].x >= w[1].x) {
            return Err(Error::invalid("row abscissae must be strictly increasing"));
        }
        if let Some(i) = rows.iter().position(|r| !(r.lo <= r.hi)) {
            return Err(Error::invalid(format!("row {i} has lo > hi")));
        }
        Ok(ConstraintSystem { rows, dimension })
    }

    /// Rows of `F` for degree-`n` selections.
    pub fn from_interval_fn(f: &IntervalFn, n: usize) -> Self {
        let rows = f
            .xs()
            .iter()
            .zip(f.intervals())
            .map(|(&x, iv)| Row {
                x,
                lo: iv.lo,
                hi: iv.hi,
            })
            .collect();
        ConstraintSystem {
            rows,
            dimension: n + 1,
        }
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of vertex candidates the oracle may visit.
    pub fn candidate_bound(&self) -> u128 {
        let (m, d) = (self.rows.len() as u128, self.dimension as u128);
        let mut binom = 1u128;
        for k in 0..d {
            binom = binom * (m - k) / (k + 1);
        }
        binom << d
    }
}

/// LU factors of a small dense matrix with partial pivoting.
struct Lu {
    a: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(mut a: Vec<Vec<f64>>) -> Option<Self> {
        let d = a.len();
        let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
        let mut perm: Vec<usize> = (0..d).collect();
        for k in 0..d {
            let p = (k..d).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
            if a[p][k].abs() <= 1e-14 * scale {
                return None;
            }
            a.swap(k, p);
            perm.swap(k, p);
            for i in k + 1..d {
                let factor = a[i][k] / a[k][k];
                a[i][k] = factor;
                for j in k + 1..d {
                    a[i][j] -= factor * a[k][j];
                }
            }
        }
        Some(Lu { a, perm })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let d = self.a.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..d {
            for j in 0..i {
                y[i] -= self.a[i][j] * y[j];
            }
        }
        for i in (0..d).rev() {
            for j in i + 1..d {
                y[i] -= self.a[i][j] * y[j];
            }
            y[i] /= self.a[i][i];
        }
        y
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite input")
}

/// Exact version of the candidate test.
fn exact_candidate(rows: &[Row], active: &[usize], faces: &[f64], tol: f64) -> bool {
    let d = active.len();
    let mut a: Vec<Vec<BigRational>> = active
        .iter()
        .map(|&i| {
            let x = rational(rows[i].x);
            let mut row = Vec::with_capacity(d + 1);
            let mut p = BigRational::from_integer(BigInt::from(1));
            for _ in 0..d {
                row.push(p.clone());
                p *= &x;
            }
            row
        })
        .collect();
    for (row, &face) in a.iter_mut().zip(faces) {
        row.push(rational(face));
    }
    for k in 0..d {
        let Some(p) = (k..d).find(|&i| !a[i][k].is_zero()) else {
            return false;
        };
        a.swap(k, p);
        for i in 0..d {
            if i != k && !a[i][k].is_zero() {
                let factor = &a[i][k] / &a[k][k];
                for j in k..=d {
                    let t = &factor * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    let coeffs: Vec<BigRational> = (0..d).map(|k| &a[k][d] / &a[k][k]).collect();
    let tol = rational(tol);
    rows.iter().all(|r| {
        let x = rational(r.x);
        let y = coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c);
        let below = rational(r.lo) - &y;
        let above = &y - rational(r.hi);
        below <= tol && above <= tol
    })
}

/// Monomial coefficients (lowest degree first) of a polynomial meeting every
/// row within `tol`, or `None` when no such polynomial exists.
pub fn brute_force_feasible(cs: &ConstraintSystem, tol: f64) -> Result<Option<Vec<f64>>> {
    let (rows, d) = (&cs.rows, cs.dimension);
    if rows.len() < d + 1 {
        return Err(Error::invalid(format!(
            "{} rows are too few for dimension {d}",
            rows.len()
        )));
    }
    if rows.len() > MAX_ROWS {
        return Err(Error::invalid(format!(
            "the brute-force oracle is limited to {MAX_ROWS} rows, got {}",
            rows.len()
        )));
    }
    let scale = rows
        .iter()
        .fold(1.0f64, |s, r| s.max(r.lo.abs()).max(r.hi.abs()));
    let band = AMBIGUITY_BAND * scale;
    let mut faces = vec![0.0; d];
    for active in (0..rows.len()).combinations(d) {
        let vander = active
            .iter()
            .map(|&i| (0..d).map(|j| rows[i].x.powi(j as i32)).collect())
            .collect();
        let Some(lu) = Lu::factor(vander) else {
            log::debug!("skipping singular active set {active:?}");
            continue;
        };
        for mask in 0..(1u32 << d) {
            for (b, &i) in active.iter().enumerate() {
                faces[b] = if mask >> b & 1 == 1 {
                    rows[i].hi
                } else {
                    rows[i].lo
                };
            }
            let coeffs = lu.solve(&faces);
            let worst = rows
                .iter()
                .map(|r| {
                    let y = horner(&coeffs, r.x);
                    (r.lo - y).max(y - r.hi)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            if worst <= tol - band
                || (worst <= tol + band && exact_candidate(rows, &active, &faces, tol))
            {
                return Ok(Some(coeffs));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    /// Intervals inflated around a random polynomial.
    Feasible,
    /// A random tuple is planted with a strictly violated intersection.
    Infeasible,
    /// Independent intervals with endpoints in `[-10, 10]`.
    Random,
}

/// `m` stratified points in `[a, b]`, one per equal-width cell.
pub fn gen_grid(rng: &mut impl Rng, m: usize, a: f64, b: f64) -> Grid {
    let width = (b - a) / m as f64;
    let xs = (0..m)
        .map(|i| a + width * (i as f64 + 0.1 + 0.8 * rng.gen::<f64>()))
        .collect();
    Grid::new(xs).expect("stratified points are separated")
}

/// Random monomial coefficients in `[-amplitude, amplitude]`.
pub fn gen_coefficients(rng: &mut impl Rng, n: usize, amplitude: f64) -> Vec<f64> {
    (0..=n)
        .map(|_| rng.gen_range(-amplitude..=amplitude))
        .collect()
}

fn radius(rng: &mut impl Rng) -> f64 {
    if rng.gen_bool(0.85) {
        rng.gen_range(0.0..1.5)
    } else {
        0.0
    }
}

/// Deterministic random interval-valued function on a grid in `[-1, 1]`.
pub fn gen_instance(seed: u64, m: usize, n: usize, kind: InstanceKind) -> IntervalFn {
    assert!(m >= n + 2, "need at least n + 2 points");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = gen_grid(&mut rng, m, -1.0, 1.0);
    let xs = grid.xs().to_vec();
    let around_polynomial = |rng: &mut ChaCha8Rng| -> Vec<Interval> {
        let w = gen_coefficients(rng, n, 2.0);
        xs.iter()
            .map(|&x| {
                let y = horner(&w, x);
                Interval::new(y - radius(rng), y + radius(rng)).unwrap()
            })
            .collect()
    };
    match kind {
        InstanceKind::Feasible => IntervalFn::new(grid, around_polynomial(&mut rng)).unwrap(),
        InstanceKind::Random => {
            let ivs = xs
                .iter()
                .map(|_| {
                    let (a, b): (f64, f64) =
                        (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
                    Interval::new(a.min(b), a.max(b)).unwrap()
                })
                .collect();
            IntervalFn::new(grid, ivs).unwrap()
        }
        InstanceKind::Infeasible => {
            let mut ivs = around_polynomial(&mut rng);
            let mut idx = sample(&mut rng, m, n + 2).into_vec();
            idx.sort_unstable();
            let x0 = xs[idx[0]];
            let rest: Vec<f64> = idx[1..].iter().map(|&i| xs[i]).collect();
            let l = crate::lagrange::coefficients(
                x0,
                &crate::lagrange::Nodes::with_separation(rest, 0.0).unwrap(),
            );
            let tail: Vec<Interval> = idx[1..].iter().map(|&i| ivs[i]).collect();
            let sum = scaled_sum(&l, &tail).unwrap();
            let offset = rng.gen_range(0.25..2.0);
            let width = radius(&mut rng);
            ivs[idx[0]] = if rng.gen_bool(0.5) {
                Interval::new(sum.hi + offset, sum.hi + offset + width).unwrap()
            } else {
                Interval::new(sum.lo - offset - width, sum.lo - offset).unwrap()
            };
            let f = IntervalFn::new(grid, ivs).unwrap();
            let t = Tuple::new(idx, m).unwrap();
            assert!(
                !tuple_condition(&f, &t, &Config::default()).unwrap(),
                "planted tuple must be violated"
            );
            f
        }
    }
}

/// `f = w + exp`, `g = w + 2e − exp` on a grid in `[0, 1]`: `f` is n-convex,
/// `g` is n-concave and `f ≤ g`.
pub fn gen_sandwich(seed: u64, m: usize, n: usize) -> (SampledFn, SampledFn) {
    let (grid, w) = sandwich_base(seed, m, n);
    let e = std::f64::consts::E;
    let f = SampledFn::from_fn(grid.clone(), |x| horner(&w, x) + x.exp()).unwrap();
    let g = SampledFn::from_fn(grid, |x| horner(&w, x) + 2.0 * e - x.exp()).unwrap();
    let cfg = Config::default();
    assert!(
        is_n_convex(&f, n, &cfg).unwrap().holds,
        "f must be n-convex"
    );
    assert!(
        is_n_concave(&g, n, &cfg).unwrap().holds,
        "g must be n-concave"
    );
    assert!(f.values().iter().zip(g.values()).all(|(a, b)| a <= b));
    (f, g)
}

/// `f = w − exp`, `g = w + exp` on a grid in `[0, 1]`: `f` is n-concave, `g`
/// is n-convex and `f ≤ g`.
pub fn gen_reverse_sandwich(seed: u64, m: usize, n: usize) -> (SampledFn, SampledFn) {
    let (grid, w) = sandwich_base(seed, m, n);
    let f = SampledFn::from_fn(grid.clone(), |x| horner(&w, x) - x.exp()).unwrap();
    let g = SampledFn::from_fn(grid, |x| horner(&w, x) + x.exp()).unwrap();
    let cfg = Config::default();
    assert!(
        is_n_concave(&f, n, &cfg).unwrap().holds,
        "f must be n-concave"
    );
    assert!(
        is_n_convex(&g, n, &cfg).unwrap().holds,
        "g must be n-convex"
    );
    assert!(f.values().iter().zip(g.values()).all(|(a, b)| a <= b));
    (f, g)
}

fn sandwich_base(seed: u64, m: usize, n: usize) -> (Grid, Vec<f64>) {
    assert!(m >= n + 2, "need at least n + 2 points");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a4d_7769_6368);
    let grid = gen_grid(&mut rng, m, 0.0, 1.0);
    let w = gen_coefficients(&mut rng, n, 1.0);
    (grid, w)
}
