//! Polynomial selections of interval-valued functions.
//!
//! An interval-valued function `F` sampled on a grid has a selection in `P_n`
//! iff every ordered tuple `x_0 < x_1 < … < x_{n+1}` of grid points satisfies
//!
//! ```text
//! F(x_0) ∩ Σ_{i=1}^{n+1} c_i(x_0; x_1, …, x_{n+1}) F(x_i) ≠ ∅.
//! ```
//!
//! [`check_selection`] scans every such tuple and reports the first failure.
//! [`witness_for_tuple`] builds a polynomial through the intervals of one
//! tuple. [`solve_selection`] produces a global witness by a minimax linear
//! program over the polynomial's values at a few reference grid points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lagrange::{basis_into, Nodes, Polynomial};
use crate::lp::{BoxLp, Halfspace};
use crate::setvalued::{gap, scaled_sum_iter, Interval, IntervalFn};
use crate::tuples;

/// Strictly increasing grid indices `i_0 < i_1 < … < i_{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tuple {
    indices: Vec<usize>,
}

impl Tuple {
    /// Validates the indices against a grid of `m` points.
    pub fn new(indices: Vec<usize>, m: usize) -> Result<Self> {
        if indices.len() < 2 {
            return Err(Error::invalid("a tuple needs at least two indices"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "tuple {indices:?} is not strictly increasing"
            )));
        }
        if indices[indices.len() - 1] >= m {
            return Err(Error::invalid(format!(
                "tuple {indices:?} exceeds a grid of {m} points"
            )));
        }
        Ok(Tuple { indices })
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        Tuple { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Degree `n` for which this is an `(n + 2)`-tuple.
    pub fn degree(&self) -> usize {
        self.indices.len() - 2
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.indices
    }
}

/// A failing tuple and the distance separating `F(x_0)` from the scaled sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub tuple: Tuple,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub witness: Option<Polynomial>,
    pub certificate: Option<Certificate>,
}

impl FeasibilityReport {
    fn feasible(witness: Option<Polynomial>) -> Self {
        FeasibilityReport {
            feasible: true,
            witness,
            certificate: None,
        }
    }

    fn infeasible(certificate: Certificate) -> Self {
        FeasibilityReport {
            feasible: false,
            witness: None,
            certificate: Some(certificate),
        }
    }
}

/// Extrapolation weights `L_i = c_i(x_{i_0}; x_{i_1}, …)` for a tuple.
pub(crate) fn weights_into(xs: &[f64], idx: &[usize], rest: &mut Vec<f64>, out: &mut Vec<f64>) {
    rest.clear();
    rest.extend(idx[1..].iter().map(|&i| xs[i]));
    out.clear();
    out.resize(rest.len(), 0.0);
    basis_into(xs[idx[0]], rest, out);
}

pub(crate) fn weights(xs: &[f64], idx: &[usize]) -> Vec<f64> {
    let (mut rest, mut out) = (Vec::new(), Vec::new());
    weights_into(xs, idx, &mut rest, &mut out);
    out
}

/// The interval `[u, v] = Σ L_i F(x_i)` over the trailing tuple points.
fn tuple_sum(f: &IntervalFn, idx: &[usize], l: &[f64]) -> Interval {
    let ivs = f.intervals();
    scaled_sum_iter(l.iter().copied().zip(idx[1..].iter().map(|&i| &ivs[i])))
}

fn raw_gap(f: &IntervalFn, idx: &[usize]) -> f64 {
    let l = weights(f.xs(), idx);
    gap(&f.intervals()[idx[0]], &tuple_sum(f, idx, &l))
}

fn check_tuple(f: &IntervalFn, t: &Tuple) -> Result<()> {
    if t.indices[t.indices.len() - 1] >= f.len() {
        return Err(Error::invalid(format!(
            "tuple {:?} exceeds a grid of {} points",
            t.indices,
            f.len()
        )));
    }
    Ok(())
}

/// Signed distance between `F(x_0)` and `Σ L_i F(x_i)`; positive means the
/// tuple fails.
pub fn tuple_gap(f: &IntervalFn, t: &Tuple) -> Result<f64> {
    check_tuple(f, t)?;
    Ok(raw_gap(f, &t.indices))
}

pub fn tuple_condition(f: &IntervalFn, t: &Tuple, cfg: &Config) -> Result<bool> {
    Ok(tuple_gap(f, t)? <= cfg.decision)
}

fn validate(f: &IntervalFn, n: usize, cfg: &Config) -> Result<()> {
    cfg.check_degree(n)?;
    f.grid().require_points(n)
}

fn first_failure(f: &IntervalFn, n: usize, cfg: &Config) -> Option<Certificate> {
    let tol = cfg.decision;
    tuples::first_match(f.len(), n + 2, cfg.parallel, |idx| {
        let g = raw_gap(f, idx);
        (g > tol).then_some(g)
    })
    .map(|(idx, gap)| Certificate {
        tuple: Tuple::from_sorted(idx),
        gap,
    })
}

/// Decides selection feasibility by scanning every `(n + 2)`-tuple. The
/// witness slot is always empty; the certificate is the lexicographically
/// first failing tuple.
pub fn check_selection(f: &IntervalFn, n: usize, cfg: &Config) -> Result<FeasibilityReport> {
    validate(f, n, cfg)?;
    Ok(match first_failure(f, n, cfg) {
        Some(c) => FeasibilityReport::infeasible(c),
        None => FeasibilityReport::feasible(None),
    })
}

/// The polynomial `φ_t` of degree `n` through `(x_0, t u + (1 − t) v)` and
/// `(x_i, t y_i + (1 − t) z_i)` for every trailing tuple point except `x_n`.
///
/// `y_i`, `z_i` are the endpoints of `F(x_i)` ordered by the sign of `L_i` so
/// that `L_i F(x_i) = [L_i y_i, L_i z_i]`, and `[u, v] = Σ L_i F(x_i)`. The
/// omitted point is reproduced automatically: `φ_t(x_n) = t y_n + (1 − t) z_n`.
pub fn phi(f: &IntervalFn, t: &Tuple, param: f64) -> Result<Polynomial> {
    check_tuple(f, t)?;
    let idx = &t.indices;
    let n = t.degree();
    let xs = f.xs();
    let l = weights(xs, idx);
    let sum = tuple_sum(f, idx, &l);
    let head = param * sum.lo + (1.0 - param) * sum.hi;
    if n == 0 {
        return Ok(Polynomial::constant(head));
    }
    let mut nodes = vec![xs[idx[0]]];
    let mut values = vec![head];
    for (j, (&i, &lj)) in idx[1..].iter().zip(&l).enumerate() {
        if j + 1 == n {
            continue;
        }
        let iv = f.intervals()[i];
        let (y, z) = if lj > 0.0 {
            (iv.lo, iv.hi)
        } else {
            (iv.hi, iv.lo)
        };
        nodes.push(xs[i]);
        values.push(param * y + (1.0 - param) * z);
    }
    Polynomial::new(Nodes::with_separation(nodes, 0.0)?, values)
}

/// A polynomial through the intervals at all points of one tuple.
///
/// Cases are tried in order: the sum's left end lies in `F(x_0)`, its right
/// end does, or `F(x_0)` sits strictly inside the sum.
pub fn witness_for_tuple(f: &IntervalFn, t: &Tuple, cfg: &Config) -> Result<Polynomial> {
    check_tuple(f, t)?;
    let idx = &t.indices;
    let head = f.intervals()[idx[0]];
    let l = weights(f.xs(), idx);
    let sum = tuple_sum(f, idx, &l);
    let tol = cfg.decision;
    if head.contains(sum.lo, tol) {
        phi(f, t, 1.0)
    } else if head.contains(sum.hi, tol) {
        phi(f, t, 0.0)
    } else if sum.lo < head.lo && head.hi < sum.hi {
        let lambda = (sum.hi - head.lo) / (sum.hi - sum.lo);
        phi(f, t, lambda)
    } else {
        Err(Error::InfeasibleTuple {
            indices: idx.clone(),
            gap: gap(&head, &sum),
        })
    }
}

/// Largest amount by which `w` leaves the sampled intervals (negative when it
/// is strictly inside all of them).
pub fn membership_violation(f: &IntervalFn, w: &Polynomial) -> f64 {
    f.xs()
        .iter()
        .zip(f.intervals())
        .map(|(&x, iv)| {
            let y = w.eval(x);
            (iv.lo - y).max(y - iv.hi)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Grid indices closest to the Chebyshev extrema of the grid's span.
fn reference_indices(xs: &[f64], n: usize) -> Vec<usize> {
    let (a, b) = (xs[0], xs[xs.len() - 1]);
    let mut used = vec![false; xs.len()];
    let mut chosen = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let target = if n == 0 {
            0.5 * (a + b)
        } else {
            let c = (std::f64::consts::PI * k as f64 / n as f64).cos();
            0.5 * (a + b) - 0.5 * (b - a) * c
        };
        let best = (0..xs.len())
            .filter(|&i| !used[i])
            .min_by(|&i, &j| (xs[i] - target).abs().total_cmp(&(xs[j] - target).abs()))
            .expect("grid has at least n + 2 points");
        used[best] = true;
        chosen.push(best);
    }
    chosen.sort_unstable();
    chosen
}

const LP_SEEDS: [u64; 3] = [0x5eed_0001, 0x5eed_0002, 0x5eed_0003];

/// Minimizes the largest interval violation over polynomials of degree `n`.
///
/// The polynomial is parametrized by its values at `n + 1` reference grid
/// points. Returns the optimizer and its measured violation.
pub(crate) fn minimax_fit(f: &IntervalFn, n: usize) -> Option<(Polynomial, f64)> {
    let xs = f.xs();
    let refs = reference_indices(xs, n);
    let ref_xs: Vec<f64> = refs.iter().map(|&i| xs[i]).collect();
    let scale = f
        .intervals()
        .iter()
        .fold(1.0f64, |s, iv| s.max(iv.lo.abs()).max(iv.hi.abs()));
    let d = n + 1;

    let mut row = vec![0.0; d];
    let mut constraints = Vec::with_capacity(2 * xs.len());
    for (&x, iv) in xs.iter().zip(f.intervals()) {
        basis_into(x, &ref_xs, &mut row);
        let mut up: Vec<f64> = row.clone();
        up.push(-1.0);
        constraints.push(Halfspace { a: up, b: iv.hi });
        let mut down: Vec<f64> = row.iter().map(|v| -v).collect();
        down.push(-1.0);
        constraints.push(Halfspace { a: down, b: -iv.lo });
    }
    let mut objective = vec![0.0; d];
    objective.push(1.0);
    let mut lower = vec![-4.0 * scale; d];
    lower.push(-2.0 * scale);
    let mut upper = vec![4.0 * scale; d];
    upper.push(2.0 * scale);
    let lp = BoxLp {
        objective,
        lower,
        upper,
        constraints,
    };

    let nodes = Nodes::with_separation(ref_xs, 0.0).ok()?;
    let mut best: Option<(Polynomial, f64)> = None;
    for seed in LP_SEEDS {
        let Some(z) = lp.minimize(&mut ChaCha8Rng::seed_from_u64(seed)) else {
            log::debug!("minimax LP failed with seed {seed:#x}");
            continue;
        };
        let Ok(w) = Polynomial::new(nodes.clone(), z[..d].to_vec()) else {
            continue;
        };
        let viol = membership_violation(f, &w);
        // The LP objective is the violation itself; a mismatch means the
        // elimination lost accuracy and another ordering is worth a try.
        let consistent = (viol - z[d]).abs() <= 1e-9 * scale;
        if best.as_ref().is_none_or(|(_, b)| viol < *b) {
            best = Some((w, viol));
        }
        if consistent {
            break;
        }
    }
    best
}

/// Vertex search used when the linear program could not deliver a usable
/// point: every choice of `n + 1` grid points and interval endpoints.
fn vertex_witness(f: &IntervalFn, n: usize, tol: f64) -> Option<Polynomial> {
    use itertools::Itertools;
    const MAX_POINTS: usize = 24;
    if f.len() > MAX_POINTS {
        return None;
    }
    let xs = f.xs();
    let ivs = f.intervals();
    for subset in (0..f.len()).combinations(n + 1) {
        let nodes = Nodes::with_separation(subset.iter().map(|&i| xs[i]).collect(), 0.0).ok()?;
        for mask in 0..(1u32 << (n + 1)) {
            let values = subset
                .iter()
                .enumerate()
                .map(|(b, &i)| {
                    if mask >> b & 1 == 1 {
                        ivs[i].hi
                    } else {
                        ivs[i].lo
                    }
                })
                .collect();
            let w = Polynomial::new(nodes.clone(), values).ok()?;
            if membership_violation(f, &w) <= tol {
                return Some(w);
            }
        }
    }
    None
}

/// Decides selection feasibility and returns a witness polynomial when one
/// exists. The verdict always matches [`check_selection`].
pub fn solve_selection(f: &IntervalFn, n: usize, cfg: &Config) -> Result<FeasibilityReport> {
    validate(f, n, cfg)?;
    let fit = minimax_fit(f, n);
    if let Some((w, viol)) = &fit {
        if *viol <= 0.0 {
            return Ok(FeasibilityReport::feasible(Some(w.clone())));
        }
    }
    if let Some(cert) = first_failure(f, n, cfg) {
        return Ok(FeasibilityReport::infeasible(cert));
    }
    // Feasible to within the decision tolerance.
    if let Some((w, viol)) = fit {
        if viol <= cfg.acceptance {
            return Ok(FeasibilityReport::feasible(Some(w)));
        }
    }
    log::warn!(
        "minimax LP unusable for degree {n} on {} points; falling back to vertex search",
        f.len()
    );
    vertex_witness(f, n, cfg.acceptance)
        .map(|w| FeasibilityReport::feasible(Some(w)))
        .ok_or_else(|| Error::Solver("no witness found although every tuple passes".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrange::coefficients;
    use crate::setvalued::Grid;

    fn grid(xs: &[f64]) -> Grid {
        Grid::new(xs.to_vec()).unwrap()
    }

    fn abs_tube() -> IntervalFn {
        IntervalFn::from_fn(grid(&[-1.0, 0.0, 1.0]), |x| {
            (x.abs() - 0.25, x.abs() + 0.25)
        })
        .unwrap()
    }

    fn square_tube() -> IntervalFn {
        IntervalFn::from_fn(grid(&[-2.0, -1.0, 0.0, 1.0, 2.0]), |x| {
            (x * x - 1.0, x * x + 1.0)
        })
        .unwrap()
    }

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn tuple_validation() {
        assert!(Tuple::new(vec![0, 0, 1], 3).is_err());
        assert!(Tuple::new(vec![0, 1, 3], 3).is_err());
        assert!(Tuple::new(vec![1], 3).is_err());
        assert_eq!(Tuple::new(vec![0, 1, 2], 3).unwrap().degree(), 1);
        let t = Tuple::new(vec![0, 1, 5], 6).unwrap();
        assert!(tuple_gap(&abs_tube(), &t).is_err());
    }

    #[test]
    fn square_tube_tuples_all_pass() {
        let f = square_tube();
        for idx in [[0, 1, 2, 3], [0, 2, 3, 4], [1, 2, 3, 4], [0, 1, 3, 4]] {
            assert!(tuple_condition(&f, &Tuple::new(idx.to_vec(), 5).unwrap(), &cfg()).unwrap());
        }
    }

    #[test]
    fn abs_tube_fails_with_unit_gap() {
        let f = abs_tube();
        let t = Tuple::new(vec![0, 1, 2], 3).unwrap();
        assert!(!tuple_condition(&f, &t, &cfg()).unwrap());
        assert!((tuple_gap(&f, &t).unwrap() - 1.0).abs() < 1e-12);
        let report = check_selection(&f, 1, &cfg()).unwrap();
        assert!(!report.feasible);
        let c = report.certificate.unwrap();
        assert_eq!(c.tuple.indices(), &[0, 1, 2]);
        assert!((c.gap - 1.0).abs() < 1e-9);
        assert!(matches!(
            witness_for_tuple(&f, &t, &cfg()),
            Err(Error::InfeasibleTuple { .. })
        ));
    }

    #[test]
    fn degenerate_polynomial_tubes_pass_every_tuple() {
        let w = |x: f64| 0.5 - x + 0.25 * x * x;
        let f = IntervalFn::from_fn(grid(&[-1.0, -0.3, 0.2, 0.9, 1.5]), |x| (w(x), w(x))).unwrap();
        let report = check_selection(&f, 2, &cfg()).unwrap();
        assert!(report.feasible && report.witness.is_none());
        let t = Tuple::new(vec![0, 1, 3, 4], 5).unwrap();
        let p = witness_for_tuple(&f, &t, &cfg()).unwrap();
        for &x in f.xs() {
            assert!((p.eval(x) - w(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_line_witness() {
        let f = IntervalFn::new(
            grid(&[-1.0, 0.0, 1.0]),
            vec![
                Interval::new(0.0, 2.0).unwrap(),
                Interval::point(0.0),
                Interval::new(0.0, 2.0).unwrap(),
            ],
        )
        .unwrap();
        let t = Tuple::new(vec![0, 1, 2], 3).unwrap();
        // L = [2, -1]: u = 2·0 − 1·2 = −2, v = 0, so the right end lies in F(−1).
        let l = weights(f.xs(), t.indices());
        let sum = tuple_sum(&f, t.indices(), &l);
        assert_eq!((sum.lo, sum.hi), (-2.0, 0.0));
        let w = witness_for_tuple(&f, &t, &cfg()).unwrap();
        for x in [-1.0, 0.0, 1.0] {
            assert!(w.eval(x).abs() < 1e-12);
        }
    }

    #[test]
    fn inner_case_interpolates_between_ends() {
        // F(x_0) strictly inside [u, v].
        let f = IntervalFn::new(
            grid(&[0.0, 1.0, 2.0]),
            vec![
                Interval::new(0.4, 0.6).unwrap(),
                Interval::new(0.0, 1.0).unwrap(),
                Interval::new(0.0, 1.0).unwrap(),
            ],
        )
        .unwrap();
        let t = Tuple::new(vec![0, 1, 2], 3).unwrap();
        let w = witness_for_tuple(&f, &t, &cfg()).unwrap();
        assert!((w.eval(0.0) - 0.4).abs() < 1e-12);
        assert!(membership_violation(&f, &w) <= 1e-12);
    }

    #[test]
    fn phi_reproduces_skipped_point() {
        let f = square_tube();
        let t = Tuple::new(vec![0, 1, 2, 4], 5).unwrap();
        let l = weights(f.xs(), t.indices());
        for param in [0.0, 0.3, 1.0] {
            let p = phi(&f, &t, param).unwrap();
            let iv = f.intervals()[2];
            let (y, z) = if l[1] > 0.0 {
                (iv.lo, iv.hi)
            } else {
                (iv.hi, iv.lo)
            };
            assert!((p.eval(0.0) - (param * y + (1.0 - param) * z)).abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_tube_witnesses() {
        let f = square_tube();
        for idx in [vec![0, 1, 2, 3], vec![0, 1, 3, 4], vec![1, 2, 3, 4]] {
            let t = Tuple::new(idx.clone(), 5).unwrap();
            let w = witness_for_tuple(&f, &t, &cfg()).unwrap();
            for &i in &idx {
                assert!(f.intervals()[i].contains(w.eval(f.xs()[i]), 1e-9));
            }
        }
        let report = solve_selection(&f, 2, &cfg()).unwrap();
        assert!(report.feasible);
        assert!(membership_violation(&f, report.witness.as_ref().unwrap()) <= 1e-6);
    }

    #[test]
    fn solve_reports_certificate() {
        let report = solve_selection(&abs_tube(), 1, &cfg()).unwrap();
        assert!(!report.feasible && report.witness.is_none());
        assert_eq!(report.certificate.unwrap().tuple.indices(), &[0, 1, 2]);
    }

    #[test]
    fn exact_selection_is_recovered() {
        let w = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let f =
            IntervalFn::from_fn(grid(&[-1.0, -0.5, 0.1, 0.4, 0.8, 1.0]), |x| (w(x), w(x))).unwrap();
        let report = solve_selection(&f, 3, &cfg()).unwrap();
        let p = report.witness.unwrap();
        for &x in f.xs() {
            assert!((p.eval(x) - w(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn minimal_grid() {
        let f = IntervalFn::from_fn(grid(&[0.0, 1.0, 3.0]), |x| (x - 0.1, x + 0.1)).unwrap();
        assert!(check_selection(&f, 1, &cfg()).unwrap().feasible);
        assert!(solve_selection(&f, 1, &cfg()).unwrap().feasible);
    }

    #[test]
    fn grid_too_small_or_degree_too_large() {
        assert!(matches!(
            check_selection(&abs_tube(), 2, &cfg()),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            solve_selection(&abs_tube(), 2, &cfg()),
            Err(Error::InvalidInput(_))
        ));
        let small = Config {
            max_degree: 0,
            ..cfg()
        };
        assert!(check_selection(&abs_tube(), 1, &small).is_err());
    }

    #[test]
    fn constants_need_a_common_point() {
        let g = grid(&[0.0, 1.0, 2.0]);
        let ok = IntervalFn::from_fn(g.clone(), |x| (x - 1.5, x + 0.5)).unwrap();
        let report = solve_selection(&ok, 0, &cfg()).unwrap();
        assert!(report.feasible);
        assert!(membership_violation(&ok, report.witness.as_ref().unwrap()) <= 1e-9);
        let bad = IntervalFn::from_fn(g, |x| (x - 0.4, x + 0.4)).unwrap();
        let report = check_selection(&bad, 0, &cfg()).unwrap();
        assert_eq!(report.certificate.unwrap().tuple.indices(), &[0, 1]);
    }

    #[test]
    fn parallel_scan_matches_serial() {
        let f = IntervalFn::from_fn(grid(&[-1.0, -0.7, -0.2, 0.1, 0.3, 0.6, 0.9, 1.0]), |x| {
            let c = (3.0 * x).sin();
            (c - 0.05, c + 0.05)
        })
        .unwrap();
        for n in 1..=3 {
            let a = check_selection(&f, n, &cfg()).unwrap();
            let b = check_selection(&f, n, &cfg().with_parallel(true)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn weights_match_public_coefficients() {
        let xs = [-1.0, -0.2, 0.5, 2.0];
        let l = weights(&xs, &[0, 1, 2, 3]);
        let c = coefficients(-1.0, &Nodes::new(vec![-0.2, 0.5, 2.0]).unwrap());
        assert_eq!(l, c);
    }
}
