//! Hitting-time densities of diffusions with drift h_x/h: the unbounded-state
//! case weights a Brownian moving-boundary density by the h-ratio
//! h(u, b(u)) / h(0, y); the bounded case (state space (0, a) before
//! absorption) weights the Brownian exit-through-a image series by
//! h(u, a) / h(0, y).

use crate::brownian_fpt::{
    affine_boundary_log_density, upper_before_lower_density, volterra_uniform, MovingBoundary,
    SeriesParams,
};
use crate::error::{Error, Result};
use crate::heat_solutions::{Domain, HeatSolution};
use crate::quad::{adaptive_simpson, integrate_to_infinity};

/// Support starts just above zero; the densities behave like
/// u^{-3/2} exp(-c/u) there and are assigned 0 below this cutoff.
pub const SUPPORT_EPS: f64 = 1e-10;
/// Pinned solutions are evaluated strictly before the pin.
pub const PIN_GUARD: f64 = 1e-9;
/// Default Volterra resolution for non-affine boundaries.
pub const DEFAULT_VOLTERRA_STEPS: usize = 2000;

/// A diffusion started at `start` whose drift is the sum of the component
/// log-derivatives; the class index is the number of components.
#[derive(Debug, Clone)]
pub struct ProcessSpec {
    pub name: String,
    pub start: f64,
    pub components: Vec<HeatSolution>,
    pub horizon: Option<f64>,
    pub absorbing_floor: Option<f64>,
}

impl ProcessSpec {
    pub fn new(name: impl Into<String>, start: f64, components: Vec<HeatSolution>) -> Self {
        Self { name: name.into(), start, components, horizon: None, absorbing_floor: None }
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = Some(horizon);
        self
    }

    pub fn with_absorbing_floor(mut self, floor: f64) -> Self {
        self.absorbing_floor = Some(floor);
        self
    }

    /// Class index n: the number of heat-solution components in the drift.
    pub fn class_index(&self) -> usize {
        self.components.len()
    }

    /// Sum of the component log-derivative drifts.
    pub fn drift(&self, t: f64, x: f64) -> Result<f64> {
        let mut mu = 0.0;
        for h in &self.components {
            mu += h.drift(t, x)?;
        }
        Ok(mu)
    }

    /// Earliest pin time among components, if any.
    pub fn pin(&self) -> Option<f64> {
        self.components.iter().filter_map(|h| h.pin()).fold(None, |acc, s| {
            Some(acc.map_or(s, |a: f64| a.min(s)))
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidParameter("process has no drift components".into()));
        }
        for h in &self.components {
            if !h.domain().contains(self.start) {
                return Err(Error::Precondition(format!(
                    "start y = {} outside the domain of component {:?}",
                    self.start,
                    h.kind()
                )));
            }
        }
        let mu = self.drift(0.0, self.start)?;
        if !mu.is_finite() {
            return Err(Error::Precondition(format!("drift not finite at (0, {})", self.start)));
        }
        Ok(())
    }
}

/// How a density curve was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Volterra,
    Series,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::ClosedForm => "closed_form",
            Method::Volterra => "volterra",
            Method::Series => "series",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct DensityMeta {
    pub process: String,
    pub boundary: String,
    pub method: Method,
}

enum EvalKind {
    /// h-ratio times the Bachelier-Levy closed form for b(t) = a + c t.
    UnboundedAffine { h: HeatSolution, log_h0: f64, y: f64, a: f64, c: f64 },
    /// h-ratio times a Volterra solution sampled on a grid.
    UnboundedGrid { h: HeatSolution, log_h0: f64, bnd: MovingBoundary, grid: Vec<f64>, p: Vec<f64> },
    /// h(u,a)/h(0,y) times the Brownian exit-through-a image series.
    Bounded { h: HeatSolution, log_h0: f64, y: f64, a: f64, sp: SeriesParams },
}

/// Evaluable first-hitting-time density q(u) on [0, horizon). Immutable and
/// safe to share across threads once constructed.
pub struct FptDensity {
    horizon: f64,
    defect: f64,
    meta: DensityMeta,
    eval: EvalKind,
}

impl FptDensity {
    /// Density value q(u); 0 outside (SUPPORT_EPS, horizon).
    pub fn eval(&self, u: f64) -> f64 {
        if !(u > SUPPORT_EPS) || u >= self.horizon {
            return 0.0;
        }
        let v = match &self.eval {
            EvalKind::UnboundedAffine { h, log_h0, y, a, c } => {
                let b = a + c * u;
                let lp = match affine_boundary_log_density(*y, *a, *c, u) {
                    Ok(lp) => lp,
                    Err(_) => return 0.0,
                };
                match h.log_value(u, b) {
                    Ok(lh) => (lh - log_h0 + lp).exp(),
                    Err(_) => 0.0,
                }
            }
            EvalKind::UnboundedGrid { h, log_h0, bnd, grid, p } => {
                let pv = interp_linear(grid, p, u).max(0.0);
                if pv == 0.0 {
                    return 0.0;
                }
                match h.log_value(u, bnd.level(u)) {
                    Ok(lh) => (lh - log_h0 + pv.ln()).exp(),
                    Err(_) => 0.0,
                }
            }
            EvalKind::Bounded { h, log_h0, y, a, sp } => {
                let series = match upper_before_lower_density(0.0, *y, u, *a, sp) {
                    Ok(s) => s,
                    Err(_) => return 0.0,
                };
                if series <= 0.0 {
                    return 0.0;
                }
                match h.log_value(u, *a) {
                    Ok(lh) => (lh - log_h0 + series.ln()).exp(),
                    Err(_) => 0.0,
                }
            }
        };
        v.max(0.0)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// 1 minus the total mass on the support: absorption elsewhere
    /// (pinning, escape to infinity).
    pub fn defect(&self) -> f64 {
        self.defect
    }

    pub fn meta(&self) -> &DensityMeta {
        &self.meta
    }

    /// CDF at t by adaptive Simpson quadrature (absolute tolerance 1e-8).
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::Precondition(format!(
                "cdf argument {t} outside support [0, {}]",
                self.horizon
            )));
        }
        if t <= SUPPORT_EPS {
            return Ok(0.0);
        }
        Ok(adaptive_simpson(|u| self.eval(u), SUPPORT_EPS, t, 1e-8).clamp(0.0, 1.0))
    }

    /// Precomputed CDF table for fast repeated lookups (KS statistics, CSV).
    pub fn cdf_table(&self, points: usize) -> CdfTable {
        let n = points.max(2);
        let mut ts = Vec::with_capacity(n + 1);
        let mut fs = Vec::with_capacity(n + 1);
        let h = self.horizon / n as f64;
        let mut acc = 0.0;
        ts.push(0.0);
        fs.push(0.0);
        let mut prev = 0.0;
        let mut f_prev = self.eval(0.0);
        for i in 1..=n {
            let t = i as f64 * h;
            let mid = 0.5 * (prev + t);
            let f_t = self.eval(t);
            acc += (t - prev) / 6.0 * (f_prev + 4.0 * self.eval(mid) + f_t);
            ts.push(t);
            fs.push(acc.min(1.0));
            prev = t;
            f_prev = f_t;
        }
        CdfTable { ts, fs }
    }
}

/// Piecewise-linear CDF lookup built by `FptDensity::cdf_table`.
pub struct CdfTable {
    ts: Vec<f64>,
    fs: Vec<f64>,
}

impl CdfTable {
    pub fn eval(&self, t: f64) -> f64 {
        interp_linear(&self.ts, &self.fs, t)
    }

    pub fn horizon(&self) -> f64 {
        *self.ts.last().unwrap()
    }
}

fn interp_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        // linear from the origin for density grids starting above 0
        if xs[0] > 0.0 && x > 0.0 {
            return ys[0] * x / xs[0];
        }
        return if x >= xs[0] { ys[0] } else { 0.0 };
    }
    if x >= *xs.last().unwrap() {
        return *ys.last().unwrap();
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    let w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + w * (ys[i + 1] - ys[i])
}

fn describe_boundary(bnd: &MovingBoundary) -> String {
    match bnd.affine_slope() {
        Some(c) if c == 0.0 => format!("constant a = {}", bnd.a()),
        Some(c) => format!("affine a = {}, slope = {}", bnd.a(), c),
        None => format!("general boundary from a = {}", bnd.a()),
    }
}

/// Effective support end: the boundary horizon capped just below any pin.
fn effective_horizon(h: &HeatSolution, horizon: Option<f64>) -> Result<f64> {
    let mut end = horizon.unwrap_or(f64::INFINITY);
    if let Some(s) = h.pin() {
        end = end.min(s - PIN_GUARD);
    }
    if !(end > 0.0) {
        return Err(Error::Precondition(format!("empty support: horizon resolves to {end}")));
    }
    Ok(end)
}

fn total_mass(d: &FptDensity) -> f64 {
    if d.horizon.is_finite() {
        // Doubling windows so an early hump is never missed by a coarse
        // first pass over a long support.
        let mut lo = SUPPORT_EPS;
        let mut hi = 1.0f64.min(d.horizon);
        let mut mass = 0.0;
        loop {
            mass += adaptive_simpson(|u| d.eval(u), lo, hi, 1e-9);
            if hi >= d.horizon {
                return mass;
            }
            lo = hi;
            hi = (2.0 * hi).min(d.horizon);
        }
    } else {
        integrate_to_infinity(|u| d.eval(u), SUPPORT_EPS, 1e-8)
    }
}

fn finish(mut d: FptDensity) -> Result<FptDensity> {
    let mass = total_mass(&d);
    d.defect = 1.0 - mass;
    if !(-1e-6..=1.0 + 1e-6).contains(&d.defect) {
        return Err(Error::Numerical(format!(
            "density mass {mass} outside [0, 1] for process '{}'",
            d.meta.process
        )));
    }
    d.defect = d.defect.clamp(0.0, 1.0);
    Ok(d)
}

/// Unbounded-state-space hitting density: q(u) = h(u, b(u)) / h(0, y) * p^B_f(u).
///
/// For affine boundaries p^B_f is the Bachelier-Levy closed form; otherwise
/// it is solved from the Volterra integral equation on a 2000-step grid.
pub fn unbounded_fpt_density(
    h: &HeatSolution,
    y: f64,
    bnd: &MovingBoundary,
) -> Result<FptDensity> {
    if bnd.a() == y {
        return Err(Error::Precondition("boundary level a equals the start y".into()));
    }
    let h0 = h.value(0.0, y)?;
    if !(h0 > 0.0) {
        return Err(Error::Precondition(format!("h(0, y) = {h0} is not positive")));
    }
    let log_h0 = h.log_value(0.0, y)?;
    let horizon = effective_horizon(h, bnd.horizon())?;

    // The boundary must stay inside h's spatial domain across the support.
    if h.domain() == Domain::PositiveHalfLine {
        let probe_end = if horizon.is_finite() { horizon } else { 1e6 };
        for i in 1..=400 {
            let u = probe_end * i as f64 / 400.0;
            if bnd.level(u) <= 0.0 {
                return Err(Error::Precondition(format!(
                    "boundary leaves the positive half-line at t = {u}"
                )));
            }
        }
    }

    let meta = |method: Method| DensityMeta {
        process: h.kind().catalog_name().to_string(),
        boundary: describe_boundary(bnd),
        method,
    };

    let d = match bnd.affine_slope() {
        Some(c) => FptDensity {
            horizon,
            defect: 0.0,
            meta: meta(Method::ClosedForm),
            eval: EvalKind::UnboundedAffine { h: h.clone(), log_h0, y, a: bnd.a(), c },
        },
        None => {
            if !horizon.is_finite() {
                return Err(Error::Precondition(
                    "a finite horizon is required for non-affine boundaries".into(),
                ));
            }
            let (grid, p) = volterra_uniform(bnd, y, horizon, DEFAULT_VOLTERRA_STEPS)?;
            FptDensity {
                horizon,
                defect: 0.0,
                meta: meta(Method::Volterra),
                eval: EvalKind::UnboundedGrid {
                    h: h.clone(),
                    log_h0,
                    bnd: bnd.clone(),
                    grid,
                    p,
                },
            }
        }
    };
    finish(d)
}

/// Bounded-state-space hitting density for a process living on (0, a) before
/// absorption: q(u) = h(u, a) / h(0, y) times the density of Brownian motion
/// reaching a at u without touching 0 first.
pub fn bounded_fpt_density(
    h: &HeatSolution,
    y: f64,
    a: f64,
    horizon: f64,
    sp: &SeriesParams,
) -> Result<FptDensity> {
    sp.validate()?;
    if !(y > 0.0 && y < a) {
        return Err(Error::Precondition(format!("bounded case needs 0 < y < a, got y = {y}, a = {a}")));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::Precondition(format!("bounded case needs a finite positive horizon, got {horizon}")));
    }
    if let Some(s) = h.pin() {
        if horizon > s {
            return Err(Error::Precondition(format!("horizon {horizon} exceeds the pin time {s}")));
        }
    }
    let h0 = h.value(0.0, y)?;
    if !(h0 > 0.0) {
        return Err(Error::Precondition(format!("h(0, y) = {h0} is not positive")));
    }
    let log_h0 = h.log_value(0.0, y)?;
    let horizon = effective_horizon(h, Some(horizon))?;
    let d = FptDensity {
        horizon,
        defect: 0.0,
        meta: DensityMeta {
            process: h.kind().catalog_name().to_string(),
            boundary: format!("constant a = {a} (bounded, absorbing floor 0)"),
            method: Method::Series,
        },
        eval: EvalKind::Bounded { h: h.clone(), log_h0, y, a, sp: *sp },
    };
    finish(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian_fpt::affine_boundary_density;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_h_is_identity_weight() {
        let h = HeatSolution::constant(2.5).unwrap();
        let bnd = MovingBoundary::affine(1.0, 1.0).with_horizon(4.0);
        let d = unbounded_fpt_density(&h, 0.0, &bnd).unwrap();
        for t in [0.2, 0.5, 1.0, 3.0] {
            assert_abs_diff_eq!(
                d.eval(t),
                affine_boundary_density(0.0, 1.0, 1.0, t).unwrap(),
                epsilon = 1e-14
            );
        }
        assert_eq!(d.meta().method, Method::ClosedForm);
    }

    #[test]
    fn brownian_bridge_linear_barrier_curve() {
        // Brownian bridge pinned at s = 3, start 1, barrier 2 - t.
        let h = HeatSolution::gaussian_kernel(3.0).unwrap();
        let bnd = MovingBoundary::affine(2.0, -1.0).with_horizon(3.0);
        let d = unbounded_fpt_density(&h, 1.0, &bnd).unwrap();
        // Frozen from direct evaluation of g(u, 2-u)/g(0,1) * p^B(u).
        assert_abs_diff_eq!(d.eval(0.5), 0.7251401609957068, epsilon = 1e-12);
        assert_abs_diff_eq!(d.eval(1.0), 0.4495360120501389, epsilon = 1e-12);
        assert_abs_diff_eq!(d.eval(2.5), 0.14502803219914137, epsilon = 1e-12);
        // The bridge must cross the descending barrier before the pin.
        assert!(d.defect() < 1e-6, "defect {}", d.defect());
    }

    #[test]
    fn bessel_from_above_is_scaled_affine() {
        // 3D Bessel from y = 3 down to a = 1: the h-ratio is a/y = 1/3.
        let h = HeatSolution::linear_x();
        let bnd = MovingBoundary::constant(1.0).with_horizon(50.0);
        let d = unbounded_fpt_density(&h, 3.0, &bnd).unwrap();
        for t in [0.3, 1.0, 5.0] {
            assert_abs_diff_eq!(
                d.eval(t),
                affine_boundary_density(3.0, 1.0, 0.0, t).unwrap() / 3.0,
                epsilon = 1e-14
            );
        }
        // Mass on [0, 50] is (a/y) P(T_{y-a} <= 50) for Brownian motion,
        // i.e. 2(1 - Phi(2/sqrt(50)))/3; the full-line limit is a/y = 1/3.
        assert_abs_diff_eq!(1.0 - d.defect(), 0.25909913692984055, epsilon = 1e-8);
    }

    #[test]
    fn bessel_bridge_down_crossing_mass_one() {
        // Example fixture: Bessel bridge pinned at s = 4 from y = 3 must pass
        // through a = 1 on its way to 0.
        let h = HeatSolution::bessel_bridge_kernel(4.0).unwrap();
        let bnd = MovingBoundary::constant(1.0).with_horizon(4.0);
        let d = unbounded_fpt_density(&h, 3.0, &bnd).unwrap();
        assert!(d.defect().abs() < 1e-5, "defect {}", d.defect());
        assert_abs_diff_eq!(d.eval(2.0), 0.23471021784286633, epsilon = 1e-10);
        assert_abs_diff_eq!(d.eval(3.9), 0.10856895231242994, epsilon = 1e-10);
    }

    #[test]
    fn bounded_bessel_mass_one() {
        // h = x: the ratio a/y cancels the gambler's-ruin y/a exactly.
        let h = HeatSolution::linear_x();
        let d = bounded_fpt_density(&h, 0.5, 1.5, 25.0, &SeriesParams::default()).unwrap();
        assert!(d.defect().abs() <= 1e-4, "defect {}", d.defect());
        assert_abs_diff_eq!(d.eval(0.5), 1.1213221036903296, epsilon = 1e-10);
        assert_abs_diff_eq!(d.eval(2.0), 0.04514283174124953, epsilon = 1e-10);
    }

    #[test]
    fn bounded_rejects_start_above_barrier() {
        let h = HeatSolution::bessel_bridge_kernel(4.0).unwrap();
        assert!(bounded_fpt_density(&h, 3.0, 1.0, 4.0, &SeriesParams::default()).is_err());
    }

    #[test]
    fn bounded_rejects_horizon_past_pin() {
        let h = HeatSolution::gaussian_kernel(2.0).unwrap();
        assert!(bounded_fpt_density(&h, 0.5, 1.0, 3.0, &SeriesParams::default()).is_err());
    }

    #[test]
    fn unbounded_rejects_start_on_boundary() {
        let h = HeatSolution::constant(1.0).unwrap();
        let bnd = MovingBoundary::constant(1.0).with_horizon(1.0);
        assert!(unbounded_fpt_density(&h, 1.0, &bnd).is_err());
    }

    #[test]
    fn boundary_must_stay_in_half_line_domain() {
        let h = HeatSolution::linear_x();
        // 2 - t goes negative before t = 4.
        let bnd = MovingBoundary::affine(2.0, -1.0).with_horizon(4.0);
        assert!(unbounded_fpt_density(&h, 0.5, &bnd).is_err());
    }

    #[test]
    fn cdf_endpoints() {
        let h = HeatSolution::constant(1.0).unwrap();
        let bnd = MovingBoundary::constant(1.0).with_horizon(4.0);
        let d = unbounded_fpt_density(&h, 0.0, &bnd).unwrap();
        assert_eq!(d.cdf(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(d.cdf(d.horizon()).unwrap(), 1.0 - d.defect(), epsilon = 1e-6);
        assert!(d.cdf(5.0).is_err());
        // monotone
        let mut prev = 0.0;
        for i in 1..=20 {
            let c = d.cdf(4.0 * i as f64 / 20.0).unwrap();
            assert!(c + 1e-12 >= prev);
            prev = c;
        }
    }

    #[test]
    fn cdf_table_matches_cdf() {
        let h = HeatSolution::gaussian_kernel(3.0).unwrap();
        let bnd = MovingBoundary::affine(2.0, -1.0).with_horizon(3.0);
        let d = unbounded_fpt_density(&h, 1.0, &bnd).unwrap();
        let table = d.cdf_table(2000);
        for t in [0.3, 1.0, 1.7, 2.4, 2.9] {
            assert_abs_diff_eq!(table.eval(t), d.cdf(t).unwrap(), epsilon = 1e-6);
        }
    }

    #[test]
    fn ratio_invariance_under_scaling_h() {
        // Multiplying h by a positive constant leaves q unchanged.
        let bnd = MovingBoundary::constant(1.0).with_horizon(10.0);
        let d1 = unbounded_fpt_density(&HeatSolution::constant(1.0).unwrap(), 0.2, &bnd).unwrap();
        let d2 = unbounded_fpt_density(&HeatSolution::constant(7.0).unwrap(), 0.2, &bnd).unwrap();
        for t in [0.1, 1.0, 5.0] {
            assert_abs_diff_eq!(d1.eval(t), d2.eval(t), epsilon = 1e-14);
        }
    }

    #[test]
    fn volterra_route_matches_closed_form_for_linear_slope() {
        // Same barrier given as a general slope function: Volterra route.
        let h = HeatSolution::gaussian_kernel(3.0).unwrap();
        let general = MovingBoundary::general(2.0, |_| -1.0, 3.0).unwrap();
        let d_gen = unbounded_fpt_density(&h, 1.0, &general).unwrap();
        assert_eq!(d_gen.meta().method, Method::Volterra);
        let affine = MovingBoundary::affine(2.0, -1.0).with_horizon(3.0);
        let d_cf = unbounded_fpt_density(&h, 1.0, &affine).unwrap();
        for t in [0.5, 1.0, 2.0, 2.8] {
            assert_abs_diff_eq!(d_gen.eval(t), d_cf.eval(t), epsilon = 2e-4);
        }
    }

    #[test]
    fn process_spec_drift_and_class() {
        let p = ProcessSpec::new(
            "bessel_bridge",
            1.0,
            vec![
                HeatSolution::linear_x(),
                HeatSolution::gaussian_kernel(2.0).unwrap(),
            ],
        );
        assert_eq!(p.class_index(), 2);
        assert_abs_diff_eq!(p.drift(0.0, 1.0).unwrap(), 1.0 - 0.5, epsilon = 1e-14);
        p.validate().unwrap();
        let bad = ProcessSpec::new("bad", -1.0, vec![HeatSolution::linear_x()]);
        assert!(bad.validate().is_err());
    }
}
