//! Seidel's randomized incremental algorithm for box-bounded linear programs
//! in a handful of variables.
//!
//! Constraints are added one at a time in random order. Whenever the current
//! optimum violates the new constraint, the new optimum lies on its boundary
//! hyperplane, so one variable is eliminated and the problem is re-solved one
//! dimension lower over the constraints seen so far.

use rand::seq::SliceRandom;
use rand::Rng;

/// `a · z ≤ b`.
#[derive(Debug, Clone)]
pub(crate) struct Halfspace {
    pub a: Vec<f64>,
    pub b: f64,
}

/// Minimize `objective · z` subject to `lower ≤ z ≤ upper` and `constraints`.
#[derive(Debug, Clone)]
pub(crate) struct BoxLp {
    pub objective: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub constraints: Vec<Halfspace>,
}

const VIOLATION_RTOL: f64 = 1e-11;
const PIVOT_ATOL: f64 = 1e-13;

impl BoxLp {
    /// Returns `None` when the program is infeasible or the elimination hit a
    /// numerically degenerate pivot.
    pub fn minimize(&self, rng: &mut impl Rng) -> Option<Vec<f64>> {
        let mut order: Vec<&Halfspace> = self.constraints.iter().collect();
        order.shuffle(rng);
        let order: Vec<Halfspace> = order.into_iter().cloned().collect();
        solve(&self.objective, &self.lower, &self.upper, &order)
    }
}

fn satisfied(h: &Halfspace, z: &[f64]) -> bool {
    let mut lhs = 0.0;
    let mut mag = h.b.abs();
    for (a, x) in h.a.iter().zip(z) {
        lhs += a * x;
        mag += (a * x).abs();
    }
    lhs <= h.b + VIOLATION_RTOL * (1.0 + mag)
}

fn box_vertex(c: &[f64], lo: &[f64], hi: &[f64]) -> Vec<f64> {
    c.iter()
        .zip(lo.iter().zip(hi))
        .map(|(&cj, (&l, &u))| if cj < 0.0 { u } else { l })
        .collect()
}

fn solve(c: &[f64], lo: &[f64], hi: &[f64], cons: &[Halfspace]) -> Option<Vec<f64>> {
    if c.len() == 1 {
        return solve_line(c[0], lo[0], hi[0], cons);
    }
    let mut z = box_vertex(c, lo, hi);
    for (k, h) in cons.iter().enumerate() {
        if !satisfied(h, &z) {
            z = on_boundary(c, lo, hi, &cons[..k], h)?;
        }
    }
    Some(z)
}

fn solve_line(c: f64, lo: f64, hi: f64, cons: &[Halfspace]) -> Option<Vec<f64>> {
    let (mut l, mut u) = (lo, hi);
    for h in cons {
        let a = h.a[0];
        if a > PIVOT_ATOL {
            u = u.min(h.b / a);
        } else if a < -PIVOT_ATOL {
            l = l.max(h.b / a);
        } else if h.b < -VIOLATION_RTOL * (1.0 + h.b.abs()) {
            return None;
        }
    }
    if l > u {
        if l - u > VIOLATION_RTOL * (1.0 + l.abs() + u.abs()) {
            return None;
        }
        let mid = 0.5 * (l + u);
        return Some(vec![mid]);
    }
    Some(vec![if c < 0.0 { u } else { l }])
}

/// Optimum over `prior` and the box, restricted to `h.a · z = h.b`.
fn on_boundary(
    c: &[f64],
    lo: &[f64],
    hi: &[f64],
    prior: &[Halfspace],
    h: &Halfspace,
) -> Option<Vec<f64>> {
    let d = c.len();
    let p = (0..d).max_by(|&i, &j| h.a[i].abs().total_cmp(&h.a[j].abs()))?;
    let ap = h.a[p];
    if ap.abs() <= PIVOT_ATOL {
        return None;
    }
    // z_p = beta + Σ_{j ≠ p} gamma_j z_j
    let beta = h.b / ap;
    let keep: Vec<usize> = (0..d).filter(|&j| j != p).collect();
    let gamma: Vec<f64> = keep.iter().map(|&j| -h.a[j] / ap).collect();

    let project = |g: &Halfspace| Halfspace {
        a: keep
            .iter()
            .zip(&gamma)
            .map(|(&j, &gj)| g.a[j] + g.a[p] * gj)
            .collect(),
        b: g.b - g.a[p] * beta,
    };

    let mut sub = Vec::with_capacity(prior.len() + 2);
    sub.push(Halfspace {
        a: gamma.clone(),
        b: hi[p] - beta,
    });
    sub.push(Halfspace {
        a: gamma.iter().map(|g| -g).collect(),
        b: beta - lo[p],
    });
    sub.extend(prior.iter().map(project));

    let c_sub: Vec<f64> = keep
        .iter()
        .zip(&gamma)
        .map(|(&j, &gj)| c[j] + c[p] * gj)
        .collect();
    let lo_sub: Vec<f64> = keep.iter().map(|&j| lo[j]).collect();
    let hi_sub: Vec<f64> = keep.iter().map(|&j| hi[j]).collect();

    let y = solve(&c_sub, &lo_sub, &hi_sub, &sub)?;
    let zp = beta + gamma.iter().zip(&y).map(|(g, v)| g * v).sum::<f64>();
    let mut z = Vec::with_capacity(d);
    z.extend_from_slice(&y[..p]);
    z.push(zp);
    z.extend_from_slice(&y[p..]);
    Some(z)
}
