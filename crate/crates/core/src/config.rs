/// Numerical policy shared by every decision procedure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    /// Minimum gap between consecutive nodes or grid points.
    pub node_separation: f64,
    /// Agreement required between the monomial and interpolation forms.
    pub evaluation: f64,
    /// Additive slack used when testing interval intersections and
    /// tuple inequalities.
    pub decision: f64,
    /// Slack accepted when verifying witness polynomials against the data.
    pub acceptance: f64,
    /// Largest supported polynomial degree.
    pub max_degree: usize,
    /// Evaluate tuple scans on the rayon thread pool. Reported certificates
    /// are identical either way.
    pub parallel: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            node_separation: 1e-9,
            evaluation: 1e-9,
            decision: 1e-9,
            acceptance: 1e-6,
            max_degree: 10,
            parallel: false,
        }
    }
}

impl Config {
    pub fn with_decision(mut self, tol: f64) -> Self {
        self.decision = tol;
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub(crate) fn check_degree(&self, n: usize) -> crate::Result<()> {
        if n > self.max_degree {
            return Err(crate::Error::invalid(format!(
                "degree {n} exceeds the supported bound {}",
                self.max_degree
            )));
        }
        Ok(())
    }
}
