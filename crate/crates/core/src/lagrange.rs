//! Lagrange basis coefficients and polynomials stored as interpolation data.
//!
//! For distinct nodes `x_1 < … < x_k` the coefficient
//!
//! ```text
//! c_i(x; x_1, …, x_k) = ∏_{j ≠ i} (x − x_j) / (x_i − x_j)
//! ```
//!
//! is the value at `x` of the i-th cardinal basis polynomial. With `k = 1` the
//! product is empty and the single coefficient is `1`. When `x` lies to the
//! left of every node the coefficients alternate in sign, starting positive.

use std::sync::OnceLock;

use crate::config::Config;
use crate::error::{Error, Result};

/// Strictly increasing abscissae with a guaranteed minimum separation.
#[derive(Debug, Clone, PartialEq)]
pub struct Nodes {
    xs: Vec<f64>,
}

impl Nodes {
    /// Validates with the default node separation.
    pub fn new(xs: Vec<f64>) -> Result<Self> {
        Self::with_separation(xs, Config::default().node_separation)
    }

    pub fn with_separation(xs: Vec<f64>, min_separation: f64) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::invalid("node sequence is empty"));
        }
        if let Some(i) = xs.iter().position(|x| !x.is_finite()) {
            return Err(Error::invalid(format!("node {i} is not finite")));
        }
        for (i, w) in xs.windows(2).enumerate() {
            if w[1] - w[0] < min_separation || w[1] <= w[0] {
                return Err(Error::invalid(format!(
                    "nodes {i} and {} are not strictly increasing with separation {min_separation:e} ({} then {})",
                    i + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(Nodes { xs })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.xs
    }
}

/// Lagrange coefficients `c_i(x; nodes)` for every node.
pub fn coefficients(x: f64, nodes: &Nodes) -> Vec<f64> {
    let mut out = vec![0.0; nodes.len()];
    basis_into(x, nodes.as_slice(), &mut out);
    out
}

/// Unchecked variant of [`coefficients`] writing into `out`.
///
/// Callers guarantee that `xs` is strictly increasing.
pub(crate) fn basis_into(x: f64, xs: &[f64], out: &mut [f64]) {
    debug_assert_eq!(xs.len(), out.len());
    for (i, &xi) in xs.iter().enumerate() {
        let mut prod = 1.0;
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                prod *= (x - xj) / (xi - xj);
            }
        }
        out[i] = prod;
    }
}

/// A polynomial of degree at most `nodes.len() - 1`, stored by its values at
/// the nodes. The monomial form is derived lazily and cached once.
#[derive(Debug, Clone)]
pub struct Polynomial {
    nodes: Nodes,
    values: Vec<f64>,
    monomial: OnceLock<Vec<f64>>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.values == other.values
    }
}

impl Polynomial {
    pub fn new(nodes: Nodes, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::invalid(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("value {i} is not finite")));
        }
        Ok(Polynomial {
            nodes,
            values,
            monomial: OnceLock::new(),
        })
    }

    /// The constant polynomial `value`, stored on a single node.
    pub fn constant(value: f64) -> Self {
        Polynomial {
            nodes: Nodes { xs: vec![0.0] },
            values: vec![value],
            monomial: OnceLock::new(),
        }
    }

    pub fn nodes(&self) -> &Nodes {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Upper bound on the degree implied by the number of nodes.
    pub fn degree_bound(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let xs = self.nodes.as_slice();
        let mut acc = 0.0;
        for (i, (&xi, &vi)) in xs.iter().zip(&self.values).enumerate() {
            let mut prod = vi;
            for (j, &xj) in xs.iter().enumerate() {
                if j != i {
                    prod *= (x - xj) / (xi - xj);
                }
            }
            acc += prod;
        }
        acc
    }

    /// `self + delta`, keeping the same nodes.
    pub fn shifted(&self, delta: f64) -> Polynomial {
        Polynomial {
            nodes: self.nodes.clone(),
            values: self.values.iter().map(|v| v + delta).collect(),
            monomial: OnceLock::new(),
        }
    }

    /// Monomial coefficients, lowest degree first.
    ///
    /// The conversion is accepted when the monomial form reproduces every
    /// stored value to within `tol · max(1, max |value|)`.
    pub fn monomial(&self, tol: f64) -> Result<&[f64]> {
        let coeffs = self.monomial.get_or_init(|| newton_to_monomial(self));
        let scale = self.values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let mut worst = (0usize, 0.0f64);
        for (i, (&x, &v)) in self.nodes.as_slice().iter().zip(&self.values).enumerate() {
            let dev = (eval_monomial(coeffs, x) - v).abs();
            if dev > worst.1 || dev.is_nan() {
                worst = (i, dev);
            }
        }
        if !(worst.1 <= tol * scale) {
            return Err(Error::Conditioning {
                node: worst.0,
                deviation: worst.1,
            });
        }
        Ok(coeffs)
    }
}

/// Newton divided differences expanded into the power basis.
fn newton_to_monomial(p: &Polynomial) -> Vec<f64> {
    let xs = p.nodes.as_slice();
    let k = xs.len();
    let mut dd = p.values.clone();
    for level in 1..k {
        for i in (level..k).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
        }
    }
    // p(x) = dd0 + (x - x0)(dd1 + (x - x1)(dd2 + …))
    let mut coeffs = vec![dd[k - 1]];
    for i in (0..k - 1).rev() {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (j, &c) in coeffs.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= xs[i] * c;
        }
        next[0] += dd[i];
        coeffs = next;
    }
    coeffs
}

/// Horner evaluation of `Σ coeffs[j] x^j`.
pub fn eval_monomial(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// The unique polynomial of degree at most `k - 1` through `k` points.
pub fn interpolate(points: &[(f64, f64)]) -> Result<Polynomial> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    Polynomial::new(Nodes::new(xs)?, ys)
}

pub fn evaluate(p: &Polynomial, x: f64) -> f64 {
    p.eval(x)
}

/// Monomial coefficients checked against the default evaluation tolerance.
pub fn to_monomial(p: &Polynomial) -> Result<Vec<f64>> {
    p.monomial(Config::default().evaluation)
        .map(<[f64]>::to_vec)
}
