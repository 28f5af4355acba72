//! Machine-readable reports. Field order is fixed so identical runs produce
//! byte-identical JSON.

use std::fmt::Write as _;

use polysel::{Config, Polynomial};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub degree: usize,
    pub verdict: &'static str,
    pub witness: Option<Witness>,
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_error: Option<f64>,
    pub tolerances: Tolerances,
}

#[derive(Debug, Serialize)]
pub struct Witness {
    /// Monomial coefficients, lowest degree first; `null` when the monomial
    /// conversion is ill-conditioned.
    pub coefficients: Option<Vec<f64>>,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest excursion outside the required bounds over the grid
    /// (negative when strictly inside).
    pub max_violation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl Witness {
    pub fn new(w: &Polynomial, max_violation: f64, cfg: &Config) -> Self {
        let (coefficients, warning) = match w.monomial(cfg.evaluation) {
            Ok(c) => (Some(c.to_vec()), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Witness {
            coefficients,
            nodes: w.nodes().as_slice().to_vec(),
            values: w.values().to_vec(),
            max_violation,
            warning,
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Failing tuple of the intersection condition.
    Tuple {
        indices: Vec<usize>,
        x: Vec<f64>,
        gap: f64,
    },
    /// Failing tuple of one of the two separation inequalities.
    Inequality {
        indices: Vec<usize>,
        x: Vec<f64>,
        side: &'static str,
        slack: f64,
    },
    /// `f > g` at one grid point.
    Pointwise { index: usize, x: f64, gap: f64 },
    /// Failing tuple of the n-convexity inequality.
    Convexity {
        indices: Vec<usize>,
        x: Vec<f64>,
        defect: f64,
    },
    /// Tuple attaining the largest extrapolation deviation.
    Deviation {
        indices: Vec<usize>,
        x: Vec<f64>,
        deviation: f64,
    },
}

#[derive(Debug, Serialize)]
pub struct Tolerances {
    pub decision: f64,
    pub acceptance: f64,
    pub evaluation: f64,
    pub node_separation: f64,
}

impl From<&Config> for Tolerances {
    fn from(cfg: &Config) -> Self {
        Tolerances {
            decision: cfg.decision,
            acceptance: cfg.acceptance,
            evaluation: cfg.evaluation,
            node_separation: cfg.node_separation,
        }
    }
}

fn list<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}: {} (degree {})",
            self.command, self.verdict, self.degree
        );
        if let Some(eps) = self.epsilon {
            let _ = writeln!(s, "epsilon: {eps}");
        }
        if let Some(err) = self.sup_error {
            let _ = writeln!(s, "sup error: {err}");
        }
        if let Some(w) = &self.witness {
            match &w.coefficients {
                Some(c) => {
                    let _ = writeln!(s, "witness coefficients: [{}]", list(c));
                }
                None => {
                    let _ = writeln!(s, "witness nodes: [{}]", list(&w.nodes));
                    let _ = writeln!(s, "witness values: [{}]", list(&w.values));
                }
            }
            let _ = writeln!(s, "max violation: {}", w.max_violation);
            if let Some(msg) = &w.warning {
                let _ = writeln!(s, "warning: {msg}");
            }
        }
        match &self.certificate {
            Some(Certificate::Tuple { indices, x, gap }) => {
                let _ = writeln!(
                    s,
                    "certificate: tuple [{}] at x = [{}], gap {gap}",
                    list(indices),
                    list(x)
                );
            }
            Some(Certificate::Inequality {
                indices,
                x,
                side,
                slack,
            }) => {
                let _ = writeln!(
                    s,
                    "certificate: {side} inequality fails on tuple [{}] at x = [{}], slack {slack}",
                    list(indices),
                    list(x)
                );
            }
            Some(Certificate::Pointwise { index, x, gap }) => {
                let _ = writeln!(
                    s,
                    "certificate: f > g at index {index} (x = {x}), gap {gap}"
                );
            }
            Some(Certificate::Convexity { indices, x, defect }) => {
                let _ = writeln!(
                    s,
                    "certificate: tuple [{}] at x = [{}], defect {defect}",
                    list(indices),
                    list(x)
                );
            }
            Some(Certificate::Deviation {
                indices,
                x,
                deviation,
            }) => {
                let _ = writeln!(
                    s,
                    "attained on tuple [{}] at x = [{}], deviation {deviation}",
                    list(indices),
                    list(x)
                );
            }
            None => {}
        }
        let _ = writeln!(
            s,
            "tolerances: decision {}, acceptance {}",
            self.tolerances.decision, self.tolerances.acceptance
        );
        s
    }
}
