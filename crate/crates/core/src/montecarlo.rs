//! Euler-Maruyama validation engine: simulates the drifted SDE against a
//! moving boundary, detects crossings (with a Brownian-bridge correction for
//! within-step crossings), and compares empirical sub-CDFs with theoretical
//! densities via the Kolmogorov-Smirnov distance.
//!
//! Determinism contract: each path draws from its own stream seeded by
//! (seed, path index), so results are bit-identical regardless of how the
//! paths are partitioned across workers.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::brownian_fpt::MovingBoundary;
use crate::error::{Error, Result};
use crate::fpt_transform::{FptDensity, ProcessSpec};

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    /// Number of independent paths.
    pub paths: usize,
    /// Euler step.
    pub dt: f64,
    pub seed: u64,
    /// Sample the within-step Brownian-bridge crossing probability.
    pub bridge_correction: bool,
    /// Absorption clamp near 0 for half-line processes.
    pub floor_eps: f64,
    /// Stop this long before a pin time; defaults to one dt.
    pub pin_guard: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            paths: 5500,
            dt: 1e-3,
            seed: 0,
            bridge_correction: true,
            floor_eps: 1e-6,
            pin_guard: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Crossed the boundary.
    Hit,
    /// Absorbed at the floor (or at a pin, for bridges).
    Floor,
    /// Censored at the horizon.
    Survived,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Hit => "hit",
            Outcome::Floor => "floor",
            Outcome::Survived => "survived",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PathRecord {
    pub outcome: Outcome,
    pub time: f64,
}

#[derive(Debug, Clone)]
pub struct SimResult {
    /// One record per path, in path-index order.
    pub records: Vec<PathRecord>,
    pub n_hit: usize,
    pub n_absorbed_floor: usize,
    pub n_survived_horizon: usize,
    pub seed: u64,
    pub dt: f64,
    pub horizon: f64,
}

impl SimResult {
    pub fn n(&self) -> usize {
        self.records.len()
    }

    /// Hit times in ascending order.
    pub fn sorted_hit_times(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self
            .records
            .iter()
            .filter(|r| r.outcome == Outcome::Hit)
            .map(|r| r.time)
            .collect();
        ts.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        ts
    }
}

/// splitmix64 finalizer; decorrelates per-path stream seeds.
fn path_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(0x243F6A8885A308D3);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

struct PathSetup<'a> {
    process: &'a ProcessSpec,
    boundary: &'a MovingBoundary,
    cfg: &'a SimConfig,
    stop_time: f64,
    pinned: bool,
}

fn run_path(setup: &PathSetup<'_>, index: usize) -> Result<PathRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(path_seed(setup.cfg.seed, index as u64));
    let dt = setup.cfg.dt;
    let stop = setup.stop_time;
    let mut t = 0.0;
    let mut x = setup.process.start;
    let floor = setup.process.absorbing_floor;

    while t < stop - 1e-15 {
        let mut h = dt.min(stop - t);
        let mu = setup.process.drift(t, x)?;
        let mut refinements = 0;
        while mu.abs() * h > 1.0 {
            h *= 0.5;
            refinements += 1;
            if refinements > 20 {
                return Err(Error::Numerical(format!(
                    "drift overflow at (t = {t}, x = {x}) after 20 step halvings; dt too coarse"
                )));
            }
        }
        let z: f64 = rng.sample(StandardNormal);
        let tn = t + h;
        let xn = x + mu * h + h.sqrt() * z;
        let d0 = x - setup.boundary.level(t);
        let d1 = xn - setup.boundary.level(tn);
        if d0 * d1 <= 0.0 {
            // Crossed within the step; linear interpolation of the signed gap.
            let frac = if (d0 - d1).abs() > 0.0 { d0 / (d0 - d1) } else { 0.5 };
            return Ok(PathRecord { outcome: Outcome::Hit, time: t + frac * h });
        }
        if setup.cfg.bridge_correction {
            // P(bridge crossed inside the step) = exp(-2 d0 d1 / h); skip the
            // draw when the probability underflows.
            let ex = -2.0 * d0 * d1 / h;
            if ex > -40.0 {
                let u: f64 = rng.random();
                if u < ex.exp() {
                    return Ok(PathRecord { outcome: Outcome::Hit, time: t + 0.5 * h });
                }
            }
        }
        if let Some(fl) = floor {
            if xn <= fl + setup.cfg.floor_eps {
                return Ok(PathRecord { outcome: Outcome::Floor, time: tn });
            }
        }
        t = tn;
        x = xn;
    }
    // Pinned processes are absorbed at the pin; everything else is censored.
    let outcome = if setup.pinned { Outcome::Floor } else { Outcome::Survived };
    Ok(PathRecord { outcome, time: stop })
}

/// Simulate `cfg.paths` independent Euler-Maruyama paths of the process
/// against the moving boundary.
pub fn simulate_paths(
    process: &ProcessSpec,
    boundary: &MovingBoundary,
    cfg: &SimConfig,
) -> Result<SimResult> {
    process.validate()?;
    if cfg.paths < 1 {
        return Err(Error::InvalidParameter("paths must be >= 1".into()));
    }
    if !(cfg.dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {}", cfg.dt)));
    }
    let horizon = process
        .horizon
        .or(boundary.horizon())
        .ok_or_else(|| Error::Precondition("simulation requires a finite horizon".into()))?;
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::Precondition(format!("bad simulation horizon {horizon}")));
    }
    if cfg.dt >= horizon / 10.0 {
        return Err(Error::InvalidParameter(format!(
            "dt = {} too coarse for horizon {horizon} (need dt < horizon/10)",
            cfg.dt
        )));
    }
    if (process.start - boundary.level(0.0)).abs() < 1e-12 {
        return Err(Error::Precondition("start y equals the boundary level b(0)".into()));
    }
    let pin = process.pin();
    let stop_time = match pin {
        Some(s) => horizon.min(s - cfg.pin_guard.unwrap_or(cfg.dt)),
        None => horizon,
    };
    if !(stop_time > 0.0) {
        return Err(Error::Precondition(format!("stop time {stop_time} not positive")));
    }
    let pinned = pin.is_some_and(|s| s <= horizon + cfg.dt);

    let setup = PathSetup { process, boundary, cfg, stop_time, pinned };
    let records: Vec<PathRecord> = (0..cfg.paths)
        .into_par_iter()
        .map(|i| run_path(&setup, i))
        .collect::<Result<Vec<_>>>()?;

    let mut n_hit = 0;
    let mut n_absorbed_floor = 0;
    let mut n_survived_horizon = 0;
    for r in &records {
        match r.outcome {
            Outcome::Hit => n_hit += 1,
            Outcome::Floor => n_absorbed_floor += 1,
            Outcome::Survived => n_survived_horizon += 1,
        }
    }
    Ok(SimResult {
        records,
        n_hit,
        n_absorbed_floor,
        n_survived_horizon,
        seed: cfg.seed,
        dt: cfg.dt,
        horizon: stop_time,
    })
}

/// Empirical sub-distribution of hit times: F(t) = #{hits <= t} / n.
/// Censored and absorbed paths contribute mass at infinity, matching the
/// defective-density convention.
pub struct EmpiricalCdf {
    times: Vec<f64>,
    n: usize,
}

impl EmpiricalCdf {
    pub fn eval(&self, t: f64) -> f64 {
        self.times.partition_point(|&x| x <= t) as f64 / self.n as f64
    }

    pub fn jump_points(&self) -> &[f64] {
        &self.times
    }

    pub fn terminal_mass(&self) -> f64 {
        self.times.len() as f64 / self.n as f64
    }
}

pub fn empirical_cdf(result: &SimResult) -> EmpiricalCdf {
    EmpiricalCdf { times: result.sorted_hit_times(), n: result.n() }
}

/// Sup-norm gap between the empirical sub-CDF and the theoretical CDF,
/// evaluated at the hit-time jump points (both sides sub-distributions).
pub fn ks_distance(result: &SimResult, theoretical: &FptDensity) -> Result<f64> {
    if result.horizon > theoretical.horizon() * (1.0 + 1e-6) + 1e-6 {
        return Err(Error::Precondition(format!(
            "mismatched supports: simulation ran to {} but the density stops at {}",
            result.horizon,
            theoretical.horizon()
        )));
    }
    let table = theoretical.cdf_table(4000);
    let n = result.n() as f64;
    let hits = result.sorted_hit_times();
    let mut ks = 0.0f64;
    for (i, &t) in hits.iter().enumerate() {
        let f = table.eval(t);
        ks = ks.max((i as f64 / n - f).abs());
        ks = ks.max(((i + 1) as f64 / n - f).abs());
    }
    // Terminal gap between total masses.
    ks = ks.max((hits.len() as f64 / n - (1.0 - theoretical.defect())).abs());
    Ok(ks)
}

/// Asymptotic KS critical value at the given significance level.
pub fn ks_critical_value(n: usize, alpha_percent: f64) -> f64 {
    let c = if alpha_percent <= 1.0 {
        1.63
    } else if alpha_percent <= 5.0 {
        1.36
    } else {
        1.22
    };
    c / (n as f64).sqrt()
}
