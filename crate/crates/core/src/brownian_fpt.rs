//! First-hitting and first-exit densities of standard Brownian motion:
//! single-barrier and affine-boundary closed forms, the bilateral image
//! series for two-sided exit from an interval, and a second-kind Volterra
//! integral-equation solver for general C^2 moving boundaries.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

const LN_2PI: f64 = 1.8378770664093453;
/// Exponents below this underflow exp() to zero.
const EXP_UNDERFLOW: f64 = -745.0;

/// Truncation control for the image series.
#[derive(Debug, Clone, Copy)]
pub struct SeriesParams {
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesParams {
    fn default() -> Self {
        Self { tol: 1e-12, max_terms: 200 }
    }
}

impl SeriesParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("series tol must be > 0, got {}", self.tol)));
        }
        if self.max_terms < 1 {
            return Err(Error::InvalidParameter("series max_terms must be >= 1".into()));
        }
        Ok(())
    }
}

type SlopeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Cumulative integral of the slope on a uniform knot grid, evaluated by
/// cubic Hermite interpolation (the slope itself supplies the derivatives).
#[derive(Clone)]
struct CumTable {
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl CumTable {
    const KNOTS: usize = 4096;

    fn build(slope: &SlopeFn, horizon: f64) -> Self {
        let step = horizon / Self::KNOTS as f64;
        let mut values = Vec::with_capacity(Self::KNOTS + 1);
        let mut slopes = Vec::with_capacity(Self::KNOTS + 1);
        values.push(0.0);
        slopes.push(slope(0.0));
        let mut acc = 0.0;
        for i in 0..Self::KNOTS {
            let a = i as f64 * step;
            let b = a + step;
            acc += adaptive_simpson(|u| slope(u), a, b, 1e-10 / Self::KNOTS as f64);
            values.push(acc);
            slopes.push(slope(b));
        }
        Self { step, values, slopes }
    }

    fn eval(&self, t: f64) -> f64 {
        let n = self.values.len() - 1;
        if t <= 0.0 {
            return self.slopes[0] * t;
        }
        let end = n as f64 * self.step;
        if t >= end {
            return self.values[n] + self.slopes[n] * (t - end);
        }
        let i = ((t / self.step) as usize).min(n - 1);
        let u = (t - i as f64 * self.step) / self.step;
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * self.step, self.slopes[i + 1] * self.step);
        let u2 = u * u;
        let u3 = u2 * u;
        (2.0 * u3 - 3.0 * u2 + 1.0) * v0
            + (u3 - 2.0 * u2 + u) * m0
            + (-2.0 * u3 + 3.0 * u2) * v1
            + (u3 - u2) * m1
    }
}

#[derive(Clone)]
enum BoundaryForm {
    /// b(t) = a + c t; cumulative handled analytically.
    Affine { c: f64 },
    General { slope: SlopeFn, table: CumTable },
}

/// Moving boundary b(t) = a + integral of f' over [0, t].
#[derive(Clone)]
pub struct MovingBoundary {
    a: f64,
    horizon: Option<f64>,
    form: BoundaryForm,
}

impl std::fmt::Debug for MovingBoundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.form {
            BoundaryForm::Affine { c } => write!(f, "MovingBoundary({} + {} t)", self.a, c),
            BoundaryForm::General { .. } => write!(f, "MovingBoundary({} + general slope)", self.a),
        }
    }
}

impl MovingBoundary {
    pub fn constant(a: f64) -> Self {
        Self { a, horizon: None, form: BoundaryForm::Affine { c: 0.0 } }
    }

    pub fn affine(a: f64, c: f64) -> Self {
        Self { a, horizon: None, form: BoundaryForm::Affine { c } }
    }

    /// Boundary with an arbitrary continuous slope; the cumulative integral is
    /// precomputed on a 4096-knot grid over [0, horizon].
    pub fn general<F>(a: f64, slope: F, horizon: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidParameter(format!("boundary horizon must be positive, got {horizon}")));
        }
        let slope: SlopeFn = Arc::new(slope);
        // Probe finiteness of the slope before committing to the table.
        for i in 0..=1000 {
            let t = horizon * i as f64 / 1000.0;
            let s = slope(t);
            if !s.is_finite() {
                return Err(Error::InvalidParameter(format!("boundary slope not finite at t = {t}")));
            }
        }
        let table = CumTable::build(&slope, horizon);
        Ok(Self { a, horizon: Some(horizon), form: BoundaryForm::General { slope, table } })
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = Some(horizon);
        self
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn horizon(&self) -> Option<f64> {
        self.horizon
    }

    /// Slope c when the boundary is affine.
    pub fn affine_slope(&self) -> Option<f64> {
        match &self.form {
            BoundaryForm::Affine { c } => Some(*c),
            BoundaryForm::General { .. } => None,
        }
    }

    /// b(t).
    pub fn level(&self, t: f64) -> f64 {
        match &self.form {
            BoundaryForm::Affine { c } => self.a + c * t,
            BoundaryForm::General { table, .. } => self.a + table.eval(t),
        }
    }

    /// b'(t) = f'(t).
    pub fn slope(&self, t: f64) -> f64 {
        match &self.form {
            BoundaryForm::Affine { c } => *c,
            BoundaryForm::General { slope, .. } => slope(t),
        }
    }
}

/// Density of the first time Brownian motion started at y > 0 hits 0.
pub fn constant_barrier_density(y: f64, t: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Precondition(format!("constant_barrier_density requires y > 0, got {y}")));
    }
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("constant_barrier_density requires t > 0, got {t}")));
    }
    let e = -y * y / (2.0 * t);
    if e < EXP_UNDERFLOW {
        return Ok(0.0);
    }
    Ok(y / (2.0 * std::f64::consts::PI * t * t * t).sqrt() * e.exp())
}

/// log of `affine_boundary_density`; used for overflow-safe products.
pub fn affine_boundary_log_density(y: f64, a: f64, c: f64, t: f64) -> Result<f64> {
    if a == y {
        return Err(Error::Precondition("boundary starts at the process (a = y)".into()));
    }
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("affine_boundary_density requires t > 0, got {t}")));
    }
    let d = a - y + c * t;
    Ok((a - y).abs().ln() - 0.5 * (LN_2PI + 3.0 * t.ln()) - d * d / (2.0 * t))
}

/// Bachelier-Levy density of the first time Brownian motion started at y
/// hits the line a + c t.
pub fn affine_boundary_density(y: f64, a: f64, c: f64, t: f64) -> Result<f64> {
    Ok(affine_boundary_log_density(y, a, c, t)?.exp())
}

/// Density of T ^ T0, the first exit of Brownian motion started at
/// 0 < y < a from the interval (0, a): bilateral method-of-images series.
pub fn two_sided_first_exit_density(y: f64, a: f64, t: f64, sp: &SeriesParams) -> Result<f64> {
    sp.validate()?;
    if !(y > 0.0 && y < a) {
        return Err(Error::Precondition(format!("need 0 < y < a, got y = {y}, a = {a}")));
    }
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("need t > 0, got {t}")));
    }
    let sum = image_series(t, sp, |n| [Some(2.0 * n * a + y), Some(2.0 * n * a + a - y)])?;
    Ok((sum / (2.0 * std::f64::consts::PI * t * t * t).sqrt()).max(0.0))
}

/// Density (in s) of Brownian motion started at y at time t reaching a while
/// 0 has not been hit: the one-sided image series over reflections 2na + a - y.
/// Integrated over s this is the gambler's-ruin probability y/a.
pub fn upper_before_lower_density(t: f64, y: f64, s: f64, a: f64, sp: &SeriesParams) -> Result<f64> {
    sp.validate()?;
    if !(y > 0.0 && y < a) {
        return Err(Error::Precondition(format!("need 0 < y < a, got y = {y}, a = {a}")));
    }
    if !(s > t) || !(t >= 0.0) {
        return Err(Error::Precondition(format!("need s > t >= 0, got t = {t}, s = {s}")));
    }
    let dt = s - t;
    let sum = image_series(dt, sp, |n| [Some(2.0 * n * a + a - y), None])?;
    Ok((sum / (2.0 * std::f64::consts::PI * dt * dt * dt).sqrt()).max(0.0))
}

/// Sum z exp(-z^2 / 2t) over image points, widening the symmetric window
/// n in [-N, N] until the newest batch is below tol relative to the sum.
fn image_series<F>(t: f64, sp: &SeriesParams, points: F) -> Result<f64>
where
    F: Fn(f64) -> [Option<f64>; 2],
{
    let term = |z: f64| -> f64 {
        let e = -z * z / (2.0 * t);
        if e < EXP_UNDERFLOW {
            0.0
        } else {
            z * e.exp()
        }
    };
    let mut sum = 0.0;
    let mut n: i64 = 0;
    loop {
        let mut batch_max = 0.0f64;
        let signs: &[i64] = if n == 0 { &[0] } else { &[1, -1] };
        for &sgn in signs {
            for z in points((sgn * n) as f64).into_iter().flatten() {
                let v = term(z);
                sum += v;
                batch_max = batch_max.max(v.abs());
            }
        }
        if n > 0 && batch_max < sp.tol * (sum.abs() + 1e-300) {
            return Ok(sum);
        }
        n += 1;
        if n as usize > sp.max_terms {
            return Err(Error::Numerical(format!(
                "image series did not converge within {} terms (t = {t})",
                sp.max_terms
            )));
        }
    }
}

/// Kernel of the second-kind Volterra equation for the first-passage density
/// over a moving boundary. The diagonal limit (tau -> t) is zero for C^2
/// boundaries and is assigned directly by the solver.
fn volterra_kernel(bnd: &MovingBoundary, t: f64, tau: f64, z: f64) -> f64 {
    let dt = t - tau;
    let arg = bnd.level(t) - z;
    let e = -arg * arg / (2.0 * dt);
    if e < EXP_UNDERFLOW {
        return 0.0;
    }
    0.5 * (bnd.slope(t) - arg / dt) / (2.0 * std::f64::consts::PI * dt).sqrt() * e.exp()
}

/// Solve for the first-passage density p(t) of Brownian motion from y over
/// the boundary b on the given increasing grid, via the trapezoid-discretized
/// Volterra equation p(t) = -2 Psi(t,0,y) + 2 int_0^t p(tau) Psi(t,tau,b(tau)) dtau.
pub fn volterra_fpt_density(bnd: &MovingBoundary, y: f64, grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("volterra: empty grid".into()));
    }
    if !(grid[0] > 0.0) {
        return Err(Error::Precondition(format!("volterra grid must start above 0, got {}", grid[0])));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Precondition("volterra grid must be strictly increasing".into()));
        }
    }
    if (bnd.level(0.0) - y).abs() < 1e-12 {
        return Err(Error::Precondition("boundary starts at the process (b(0) = y)".into()));
    }
    let m = grid.len();
    // Node 0 is tau = 0 where p = 0; node j >= 1 is grid[j-1].
    let node = |j: usize| if j == 0 { 0.0 } else { grid[j - 1] };
    let mut p = vec![0.0f64; m + 1];
    let mut f = vec![0.0f64; m + 1]; // p_j * Psi(t_i, tau_j, b(tau_j)) scratch
    for i in 1..=m {
        let t = node(i);
        if !bnd.slope(t).is_finite() {
            return Err(Error::Numerical(format!("boundary slope blew up at t = {t}")));
        }
        for j in 1..i {
            let tau = node(j);
            f[j] = p[j] * volterra_kernel(bnd, t, tau, bnd.level(tau));
        }
        f[0] = 0.0;
        f[i] = 0.0; // diagonal kernel limit
        let mut integral = 0.0;
        for j in 0..i {
            integral += (node(j + 1) - node(j)) * 0.5 * (f[j] + f[j + 1]);
        }
        p[i] = -2.0 * volterra_kernel(bnd, t, 0.0, y) + 2.0 * integral;
    }
    Ok(p[1..].to_vec())
}

/// Uniform-grid convenience wrapper: `steps` nodes over (0, horizon].
pub fn volterra_uniform(
    bnd: &MovingBoundary,
    y: f64,
    horizon: f64,
    steps: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if steps < 2 {
        return Err(Error::InvalidParameter("volterra needs at least 2 steps".into()));
    }
    if !(horizon > 0.0) {
        return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
    }
    let h = horizon / steps as f64;
    let grid: Vec<f64> = (1..=steps).map(|i| i as f64 * h).collect();
    let p = volterra_fpt_density(bnd, y, &grid)?;
    Ok((grid, p))
}
