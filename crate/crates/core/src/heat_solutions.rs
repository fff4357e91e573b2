//! Catalog of positive backward-heat solutions h(t,x) whose logarithmic
//! derivative h_x/h is a Burgers-equation drift.
//!
//! The catalog covers the five classical entries: a constant (standard
//! Brownian motion), an exponential (Brownian motion with linear drift), the
//! Gaussian kernel pinned at time s (Brownian bridge), the identity in x
//! (3D Bessel process) and the Bessel-bridge kernel pinned at s
//! (3D Bessel bridge).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    Constant,
    Exponential,
    GaussianKernel,
    LinearX,
    BesselBridgeKernel,
}

impl SolutionKind {
    /// Exact catalog string used by the CLI and config files.
    pub fn catalog_name(self) -> &'static str {
        match self {
            SolutionKind::Constant => "constant",
            SolutionKind::Exponential => "bm_drift",
            SolutionKind::GaussianKernel => "brownian_bridge",
            SolutionKind::LinearX => "bessel3",
            SolutionKind::BesselBridgeKernel => "bessel_bridge",
        }
    }
}

/// Spatial domain on which a solution is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    WholeLine,
    PositiveHalfLine,
}

impl Domain {
    pub fn contains(self, x: f64) -> bool {
        match self {
            Domain::WholeLine => x.is_finite(),
            Domain::PositiveHalfLine => x.is_finite() && x > 0.0,
        }
    }
}

/// Immutable evaluator for one backward-heat solution. All evaluations are
/// pure, so values may be shared freely across threads.
#[derive(Debug, Clone)]
pub struct HeatSolution {
    kind: SolutionKind,
    c: f64,
    lambda: f64,
    pin: Option<f64>,
}

const LN_2PI: f64 = 1.8378770664093453;

impl HeatSolution {
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("constant c must be positive, got {c}")));
        }
        Ok(Self { kind: SolutionKind::Constant, c, lambda: 0.0, pin: None })
    }

    pub fn exponential(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter("lambda must be finite".into()));
        }
        Ok(Self { kind: SolutionKind::Exponential, c: 1.0, lambda, pin: None })
    }

    pub fn gaussian_kernel(s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("pin time s must be positive, got {s}")));
        }
        Ok(Self { kind: SolutionKind::GaussianKernel, c: 1.0, lambda: 0.0, pin: Some(s) })
    }

    pub fn linear_x() -> Self {
        Self { kind: SolutionKind::LinearX, c: 1.0, lambda: 0.0, pin: None }
    }

    pub fn bessel_bridge_kernel(s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("pin time s must be positive, got {s}")));
        }
        Ok(Self { kind: SolutionKind::BesselBridgeKernel, c: 1.0, lambda: 0.0, pin: Some(s) })
    }

    /// Build a catalog entry from a kind and a positional parameter list.
    pub fn make_catalog_solution(kind: SolutionKind, params: &[f64]) -> Result<Self> {
        let expect = |n: usize| -> Result<()> {
            if params.len() != n {
                Err(Error::InvalidParameter(format!(
                    "{:?} takes {} parameter(s), got {}",
                    kind,
                    n,
                    params.len()
                )))
            } else {
                Ok(())
            }
        };
        match kind {
            SolutionKind::Constant => {
                expect(1)?;
                Self::constant(params[0])
            }
            SolutionKind::Exponential => {
                expect(1)?;
                Self::exponential(params[0])
            }
            SolutionKind::GaussianKernel => {
                expect(1)?;
                Self::gaussian_kernel(params[0])
            }
            SolutionKind::LinearX => {
                expect(0)?;
                Ok(Self::linear_x())
            }
            SolutionKind::BesselBridgeKernel => {
                expect(1)?;
                Self::bessel_bridge_kernel(params[0])
            }
        }
    }

    /// Resolve a catalog name string ("constant", "bm_drift", "brownian_bridge",
    /// "bessel3", "bessel_bridge") with its named parameters.
    pub fn from_name(name: &str, c: Option<f64>, lambda: Option<f64>, s: Option<f64>) -> Result<Self> {
        match name {
            "constant" => Self::constant(c.unwrap_or(1.0)),
            "bm_drift" => Self::exponential(
                lambda.ok_or_else(|| Error::InvalidParameter("bm_drift requires lambda".into()))?,
            ),
            "brownian_bridge" => Self::gaussian_kernel(
                s.ok_or_else(|| Error::InvalidParameter("brownian_bridge requires s".into()))?,
            ),
            "bessel3" => Ok(Self::linear_x()),
            "bessel_bridge" => Self::bessel_bridge_kernel(
                s.ok_or_else(|| Error::InvalidParameter("bessel_bridge requires s".into()))?,
            ),
            other => Err(Error::InvalidParameter(format!("unknown process name '{other}'"))),
        }
    }

    pub fn kind(&self) -> SolutionKind {
        self.kind
    }

    pub fn domain(&self) -> Domain {
        match self.kind {
            SolutionKind::LinearX | SolutionKind::BesselBridgeKernel => Domain::PositiveHalfLine,
            _ => Domain::WholeLine,
        }
    }

    /// Pin horizon s for kinds only defined on t < s.
    pub fn pin(&self) -> Option<f64> {
        self.pin
    }

    fn check_point(&self, t: f64, x: f64) -> Result<f64> {
        if !t.is_finite() || !x.is_finite() {
            return Err(Error::OutOfDomain(format!("non-finite point ({t}, {x})")));
        }
        if !self.domain().contains(x) {
            return Err(Error::OutOfDomain(format!(
                "x = {x} outside the {:?} domain of {:?}",
                self.domain(),
                self.kind
            )));
        }
        match self.pin {
            Some(s) if t >= s => Err(Error::OutOfDomain(format!(
                "t = {t} at or past the pin time s = {s} of {:?}",
                self.kind
            ))),
            Some(s) => Ok(s - t),
            None => Ok(f64::INFINITY),
        }
    }

    /// h(t, x).
    pub fn value(&self, t: f64, x: f64) -> Result<f64> {
        let tau = self.check_point(t, x)?;
        Ok(match self.kind {
            SolutionKind::Constant => self.c,
            SolutionKind::Exponential => (self.lambda * x - 0.5 * self.lambda * self.lambda * t).exp(),
            SolutionKind::GaussianKernel => {
                (2.0 * std::f64::consts::PI * tau).sqrt().recip() * (-x * x / (2.0 * tau)).exp()
            }
            SolutionKind::LinearX => x,
            SolutionKind::BesselBridgeKernel => {
                x * (2.0 * std::f64::consts::PI * tau * tau * tau).sqrt().recip()
                    * (-x * x / (2.0 * tau)).exp()
            }
        })
    }

    /// ln h(t, x); stays finite where `value` underflows.
    pub fn log_value(&self, t: f64, x: f64) -> Result<f64> {
        let tau = self.check_point(t, x)?;
        Ok(match self.kind {
            SolutionKind::Constant => self.c.ln(),
            SolutionKind::Exponential => self.lambda * x - 0.5 * self.lambda * self.lambda * t,
            SolutionKind::GaussianKernel => -0.5 * (LN_2PI + tau.ln()) - x * x / (2.0 * tau),
            SolutionKind::LinearX => x.ln(),
            SolutionKind::BesselBridgeKernel => {
                x.ln() - 0.5 * LN_2PI - 1.5 * tau.ln() - x * x / (2.0 * tau)
            }
        })
    }

    /// h_x(t, x), analytic.
    pub fn dx(&self, t: f64, x: f64) -> Result<f64> {
        let tau = self.check_point(t, x)?;
        Ok(match self.kind {
            SolutionKind::Constant => 0.0,
            SolutionKind::Exponential => self.lambda * self.value(t, x)?,
            SolutionKind::GaussianKernel => -x / tau * self.value(t, x)?,
            SolutionKind::LinearX => 1.0,
            SolutionKind::BesselBridgeKernel => (1.0 / x - x / tau) * self.value(t, x)?,
        })
    }

    /// h_t(t, x), analytic.
    pub fn dt(&self, t: f64, x: f64) -> Result<f64> {
        let tau = self.check_point(t, x)?;
        Ok(match self.kind {
            SolutionKind::Constant | SolutionKind::LinearX => 0.0,
            SolutionKind::Exponential => {
                -0.5 * self.lambda * self.lambda * self.value(t, x)?
            }
            SolutionKind::GaussianKernel => {
                (0.5 / tau - x * x / (2.0 * tau * tau)) * self.value(t, x)?
            }
            SolutionKind::BesselBridgeKernel => {
                (1.5 / tau - x * x / (2.0 * tau * tau)) * self.value(t, x)?
            }
        })
    }

    /// The drift mu(t,x) = h_x/h. Simplified analytically per kind so it does
    /// not underflow where h itself does.
    pub fn drift(&self, t: f64, x: f64) -> Result<f64> {
        let tau = self.check_point(t, x)?;
        let mu = match self.kind {
            SolutionKind::Constant => 0.0,
            SolutionKind::Exponential => self.lambda,
            SolutionKind::GaussianKernel => -x / tau,
            SolutionKind::LinearX => 1.0 / x,
            SolutionKind::BesselBridgeKernel => 1.0 / x - x / tau,
        };
        if !mu.is_finite() {
            return Err(Error::OutOfDomain(format!(
                "drift of {:?} undefined at ({t}, {x})",
                self.kind
            )));
        }
        Ok(mu)
    }

    /// Analytic spatial derivative of the drift, mu_x(t,x).
    pub fn drift_dx(&self, t: f64, x: f64) -> Result<f64> {
        let tau = self.check_point(t, x)?;
        Ok(match self.kind {
            SolutionKind::Constant | SolutionKind::Exponential => 0.0,
            SolutionKind::GaussianKernel => -1.0 / tau,
            SolutionKind::LinearX => -1.0 / (x * x),
            SolutionKind::BesselBridgeKernel => -1.0 / (x * x) - 1.0 / tau,
        })
    }
}

/// Drift evaluator mu = h_x / h as a standalone closure.
pub fn log_derivative_drift(h: &HeatSolution) -> impl Fn(f64, f64) -> Result<f64> + '_ {
    move |t, x| h.drift(t, x)
}

/// Max over the grid of |h_t + 0.5 h_xx| / (1 + |h|), with h_xx by central
/// difference of the analytic h_x (step 1e-5).
pub fn heat_residual(h: &HeatSolution, grid: &[(f64, f64)]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("heat_residual: empty grid".into()));
    }
    const STEP: f64 = 1e-5;
    let mut worst = 0.0f64;
    for &(t, x) in grid {
        let hxx = (h.dx(t, x + STEP)? - h.dx(t, x - STEP)?) / (2.0 * STEP);
        let ht = h.dt(t, x)?;
        let v = h.value(t, x)?;
        worst = worst.max((ht + 0.5 * hxx).abs() / (1.0 + v.abs()));
    }
    Ok(worst)
}

/// 20x20 probe grid interior to the solution's domain, used by the residual
/// and decomposition checks.
pub fn standard_grid(h: &HeatSolution) -> Vec<(f64, f64)> {
    let (x_lo, x_hi) = match h.domain() {
        Domain::WholeLine => (-2.0, 2.0),
        Domain::PositiveHalfLine => (0.5, 3.0),
    };
    let t_hi = h.pin().map(|s| 0.8 * s).unwrap_or(1.0);
    let t_lo = 0.05_f64.min(0.1 * t_hi);
    let n = 20;
    let mut grid = Vec::with_capacity(n * n);
    for i in 0..n {
        let t = t_lo + (t_hi - t_lo) * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let x = x_lo + (x_hi - x_lo) * j as f64 / (n - 1) as f64;
            grid.push((t, x));
        }
    }
    grid
}

/// All five catalog members with reference parameters (c=1, lambda=0.5, s=2).
pub fn reference_catalog() -> Vec<HeatSolution> {
    vec![
        HeatSolution::constant(1.0).unwrap(),
        HeatSolution::exponential(0.5).unwrap(),
        HeatSolution::gaussian_kernel(2.0).unwrap(),
        HeatSolution::linear_x(),
        HeatSolution::bessel_bridge_kernel(2.0).unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_x_point_values() {
        let h = HeatSolution::linear_x();
        assert_eq!(h.value(0.7, 2.0).unwrap(), 2.0);
        assert_eq!(h.dx(0.7, 2.0).unwrap(), 1.0);
        assert_eq!(h.dt(0.7, 2.0).unwrap(), 0.0);
        assert_eq!(h.drift(0.7, 2.0).unwrap(), 0.5);
    }

    #[test]
    fn gaussian_kernel_drift() {
        // mu = -x / (s - t); hand differentiation cross-checked against the
        // analytic dx/value ratio.
        let h = HeatSolution::gaussian_kernel(3.0).unwrap();
        assert_abs_diff_eq!(h.drift(0.0, 1.0).unwrap(), -1.0 / 3.0, epsilon = 1e-15);
        let ratio = h.dx(0.5, 1.2).unwrap() / h.value(0.5, 1.2).unwrap();
        assert_abs_diff_eq!(h.drift(0.5, 1.2).unwrap(), ratio, epsilon = 1e-12);
    }

    #[test]
    fn bessel_bridge_drift() {
        let h = HeatSolution::bessel_bridge_kernel(2.0).unwrap();
        assert_abs_diff_eq!(h.drift(0.0, 1.0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn drift_matches_dx_over_value_on_grid() {
        for h in reference_catalog() {
            for &(t, x) in &standard_grid(&h) {
                let ratio = h.dx(t, x).unwrap() / h.value(t, x).unwrap();
                assert_abs_diff_eq!(h.drift(t, x).unwrap(), ratio, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn heat_residual_constant_and_linear_exact() {
        let grid = standard_grid(&HeatSolution::linear_x());
        assert_eq!(heat_residual(&HeatSolution::constant(1.0).unwrap(), &grid).unwrap(), 0.0);
        assert_eq!(heat_residual(&HeatSolution::linear_x(), &grid).unwrap(), 0.0);
    }

    #[test]
    fn heat_residual_exponential_small() {
        let h = HeatSolution::exponential(0.5).unwrap();
        let r = heat_residual(&h, &standard_grid(&h)).unwrap();
        assert!(r <= 1e-8, "residual {r}");
    }

    #[test]
    fn all_catalog_members_solve_backward_heat() {
        for h in reference_catalog() {
            let r = heat_residual(&h, &standard_grid(&h)).unwrap();
            assert!(r <= 1e-8, "{:?}: residual {r}", h.kind());
        }
    }

    #[test]
    fn positivity_in_interior() {
        for h in reference_catalog() {
            for &(t, x) in &standard_grid(&h) {
                assert!(h.value(t, x).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn exponential_drift_is_lambda() {
        let h = HeatSolution::exponential(1.0).unwrap();
        assert_eq!(h.drift(0.3, -4.0).unwrap(), 1.0);
        assert_eq!(HeatSolution::constant(2.0).unwrap().drift(1.0, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn pinned_evaluation_past_pin_is_error() {
        let h = HeatSolution::gaussian_kernel(3.0).unwrap();
        assert!(h.value(3.0, 0.0).is_err());
        assert!(h.value(3.5, 0.0).is_err());
        assert!(h.value(2.999, 0.0).is_ok());
    }

    #[test]
    fn half_line_domain_enforced() {
        let h = HeatSolution::linear_x();
        assert!(h.value(0.0, 0.0).is_err());
        assert!(h.value(0.0, -1.0).is_err());
        assert!(HeatSolution::bessel_bridge_kernel(2.0).unwrap().drift(0.5, -0.1).is_err());
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(HeatSolution::constant(0.0).is_err());
        assert!(HeatSolution::constant(-1.0).is_err());
        assert!(HeatSolution::gaussian_kernel(-2.0).is_err());
        assert!(HeatSolution::bessel_bridge_kernel(0.0).is_err());
        assert!(HeatSolution::make_catalog_solution(SolutionKind::LinearX, &[1.0]).is_err());
        assert!(HeatSolution::make_catalog_solution(SolutionKind::Constant, &[]).is_err());
    }

    #[test]
    fn catalog_names_resolve() {
        for (name, needs_s) in [
            ("constant", false),
            ("bm_drift", false),
            ("brownian_bridge", true),
            ("bessel3", false),
            ("bessel_bridge", true),
        ] {
            let s = if needs_s { Some(2.0) } else { None };
            let h = HeatSolution::from_name(name, Some(1.0), Some(0.5), s).unwrap();
            assert_eq!(h.kind().catalog_name(), name);
        }
        assert!(HeatSolution::from_name("ornstein", None, None, None).is_err());
    }

    #[test]
    fn bessel_bridge_drift_decomposes() {
        // h_x/h = k_x/k + g_x/g pointwise.
        let bb = HeatSolution::bessel_bridge_kernel(2.0).unwrap();
        let k = HeatSolution::linear_x();
        let g = HeatSolution::gaussian_kernel(2.0).unwrap();
        for &(t, x) in &standard_grid(&bb) {
            let lhs = bb.drift(t, x).unwrap();
            let rhs = k.drift(t, x).unwrap() + g.drift(t, x).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn log_value_matches_value() {
        for h in reference_catalog() {
            for &(t, x) in standard_grid(&h).iter().step_by(17) {
                let v = h.value(t, x).unwrap();
                assert_abs_diff_eq!(h.log_value(t, x).unwrap(), v.ln(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(heat_residual(&HeatSolution::linear_x(), &[]).is_err());
    }
}
