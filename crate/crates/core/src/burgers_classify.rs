//! Drift classification: residual checks against Burgers equation
//! -mu_t = mu_xx / 2 + mu mu_x, decomposition of drifts into sums of
//! heat-solution log-derivatives, and the odd-order Bessel classification.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::heat_polynomials::{check_poly_identities, IdentityReport};
use crate::heat_solutions::HeatSolution;

type Field = Arc<dyn Fn(f64, f64) -> Result<f64> + Send + Sync>;

/// Rectangle in (t, x) on which a drift is probed.
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    pub t_lo: f64,
    pub t_hi: f64,
    pub x_lo: f64,
    pub x_hi: f64,
}

impl Rect {
    /// Uniform n x n grid over the rectangle interior.
    pub fn grid(&self, n: usize) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(n * n);
        for i in 0..n {
            let t = self.t_lo + (self.t_hi - self.t_lo) * i as f64 / (n - 1).max(1) as f64;
            for j in 0..n {
                let x = self.x_lo + (self.x_hi - self.x_lo) * j as f64 / (n - 1).max(1) as f64;
                pts.push((t, x));
            }
        }
        pts
    }

    pub fn contains(&self, t: f64, x: f64) -> bool {
        (self.t_lo..=self.t_hi).contains(&t) && (self.x_lo..=self.x_hi).contains(&x)
    }
}

/// A drift field mu(t,x) with its analytic spatial derivative.
#[derive(Clone)]
pub struct DriftSpec {
    pub mu: Field,
    pub mu_x: Field,
    pub domain: Rect,
    pub description: String,
}

impl std::fmt::Debug for DriftSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DriftSpec({}, {:?})", self.description, self.domain)
    }
}

impl DriftSpec {
    pub fn new<M, D>(mu: M, mu_x: D, domain: Rect, description: impl Into<String>) -> Self
    where
        M: Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
        D: Fn(f64, f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self { mu: Arc::new(mu), mu_x: Arc::new(mu_x), domain, description: description.into() }
    }

    /// Log-derivative drift of a catalog heat solution.
    pub fn from_heat_solution(h: &HeatSolution, domain: Rect) -> Self {
        let h1 = h.clone();
        let h2 = h.clone();
        let name = h.kind().catalog_name().to_string();
        Self::new(
            move |t, x| h1.drift(t, x),
            move |t, x| h2.drift_dx(t, x),
            domain,
            format!("log-derivative drift of {name}"),
        )
    }
}

/// Max over the grid of |mu_t + mu_xx / 2 + mu mu_x| / (1 + mu^2).
///
/// mu_t is a central difference of mu (step 1e-5); mu_xx is a central
/// difference of the analytic mu_x, which keeps roundoff well below the
/// 1e-6 acceptance threshold.
pub fn burgers_residual(d: &DriftSpec, grid: &[(f64, f64)]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("burgers_residual: empty grid".into()));
    }
    const STEP: f64 = 1e-5;
    let mut worst = 0.0f64;
    for &(t, x) in grid {
        if !d.domain.contains(t, x) {
            return Err(Error::OutOfDomain(format!(
                "probe ({t}, {x}) outside {:?} for {}",
                d.domain, d.description
            )));
        }
        let mu = (d.mu)(t, x)?;
        let mu_t = ((d.mu)(t + STEP, x)? - (d.mu)(t - STEP, x)?) / (2.0 * STEP);
        let mu_xx = ((d.mu_x)(t, x + STEP)? - (d.mu_x)(t, x - STEP)?) / (2.0 * STEP);
        let mu_x = (d.mu_x)(t, x)?;
        let res = (mu_t + 0.5 * mu_xx + mu * mu_x).abs() / (1.0 + mu * mu);
        worst = worst.max(res);
    }
    Ok(worst)
}

/// Class index of the odd-order Bessel process: order 2n + 1 has drift
/// n/x, a sum of n copies of the log-derivative of h(t,x) = x.
///
/// Order 1 is driftless and assigned the degenerate index 0.
pub fn classify_bessel_order(m: i64) -> Result<usize> {
    if m < 1 {
        return Err(Error::InvalidParameter(format!("Bessel order must be >= 1, got {m}")));
    }
    if m % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "even Bessel order {m}: the log-derivative decomposition covers odd orders only"
        )));
    }
    Ok(((m - 1) / 2) as usize)
}

/// The decomposition of an odd-order Bessel drift: n copies of the
/// linear-in-x solution.
pub fn bessel_decomposition(m: i64) -> Result<Vec<HeatSolution>> {
    let n = classify_bessel_order(m)?;
    Ok((0..n).map(|_| HeatSolution::linear_x()).collect())
}

/// Max over the grid of |target_x/target - sum of part_x/part|.
pub fn verify_decomposition(
    target: &HeatSolution,
    parts: &[HeatSolution],
    grid: &[(f64, f64)],
) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("verify_decomposition: empty grid".into()));
    }
    let mut worst = 0.0f64;
    for &(t, x) in grid {
        let lhs = target.drift(t, x)?;
        let mut rhs = 0.0;
        for p in parts {
            rhs += p.drift(t, x)?;
        }
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// The associated-function drift recursion checks, restricted to the ratio
/// chains; shares machinery with the heat-polynomial identity report.
pub fn wn_drift_recursion_check(n: i64, points: &[(f64, f64)]) -> Result<IdentityReport> {
    check_poly_identities(n, points)
}
