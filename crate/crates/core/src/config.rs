//! Experiment configuration: a flat key=value format shared by the CLI flags
//! and config files, plus the named reference fixtures (example1, example3,
//! example8).

use crate::brownian_fpt::{MovingBoundary, SeriesParams};
use crate::error::{Error, Result};
use crate::fpt_transform::{bounded_fpt_density, unbounded_fpt_density, FptDensity, ProcessSpec};
use crate::heat_solutions::{Domain, HeatSolution};
use crate::montecarlo::SimConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub process: String,
    pub c: Option<f64>,
    pub lambda: Option<f64>,
    pub s: Option<f64>,
    pub y: f64,
    pub barrier: f64,
    pub slope: f64,
    pub bounded: bool,
    pub horizon: f64,
    pub grid: usize,
    pub paths: usize,
    pub dt: f64,
    pub seed: u64,
    pub output: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            process: "constant".into(),
            c: None,
            lambda: None,
            s: None,
            y: 0.0,
            barrier: 1.0,
            slope: 0.0,
            bounded: false,
            horizon: 4.0,
            grid: 400,
            paths: 5500,
            dt: 1e-3,
            seed: 42,
            output: None,
        }
    }
}

impl ExperimentConfig {
    /// Named fixtures mirroring the reference examples.
    pub fn fixture(name: &str) -> Result<Self> {
        let mut cfg = Self::default();
        match name {
            // Brownian bridge started at 1, pinned at s = 3, linear barrier 2 - t.
            "example1" => {
                cfg.process = "brownian_bridge".into();
                cfg.s = Some(3.0);
                cfg.y = 1.0;
                cfg.barrier = 2.0;
                cfg.slope = -1.0;
                cfg.horizon = 3.0;
            }
            // 3D Bessel bridge started at 3, pinned at s = 4, down-crossing a = 1.
            "example3" => {
                cfg.process = "bessel_bridge".into();
                cfg.s = Some(4.0);
                cfg.y = 3.0;
                cfg.barrier = 1.0;
                cfg.horizon = 4.0;
            }
            // 3D Bessel process reaching a = 1.5 from below (bounded case).
            "example8" => {
                cfg.process = "bessel3".into();
                cfg.y = 0.5;
                cfg.barrier = 1.5;
                cfg.bounded = true;
                cfg.horizon = 8.0;
            }
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown fixture '{other}' (expected example1, example3 or example8)"
                )))
            }
        }
        Ok(cfg)
    }

    /// Parse a key=value text (with # comments) over the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Apply key=value lines to an existing config.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("line {}: expected key=value, got '{line}'", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num(key: &str, value: &str) -> Result<f64> {
            value.parse().map_err(|_| {
                Error::InvalidParameter(format!("key '{key}': '{value}' is not a number"))
            })
        }
        match key {
            "process" => self.process = value.to_string(),
            "c" => self.c = Some(num(key, value)?),
            "lambda" => self.lambda = Some(num(key, value)?),
            "s" => self.s = Some(num(key, value)?),
            "y" => self.y = num(key, value)?,
            "barrier" => self.barrier = num(key, value)?,
            "slope" => self.slope = num(key, value)?,
            "bounded" => {
                self.bounded = value.parse().map_err(|_| {
                    Error::InvalidParameter(format!("key 'bounded': '{value}' is not a bool"))
                })?
            }
            "horizon" => self.horizon = num(key, value)?,
            "grid" => self.grid = num(key, value)? as usize,
            "paths" => self.paths = num(key, value)? as usize,
            "dt" => self.dt = num(key, value)?,
            "seed" => {
                self.seed = value.parse().map_err(|_| {
                    Error::InvalidParameter(format!("key 'seed': '{value}' is not a u64"))
                })?
            }
            "output" => self.output = Some(value.to_string()),
            other => return Err(Error::InvalidParameter(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Serialize losslessly back to the key=value format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("process={}\n", self.process));
        if let Some(c) = self.c {
            out.push_str(&format!("c={c}\n"));
        }
        if let Some(l) = self.lambda {
            out.push_str(&format!("lambda={l}\n"));
        }
        if let Some(s) = self.s {
            out.push_str(&format!("s={s}\n"));
        }
        out.push_str(&format!("y={}\n", self.y));
        out.push_str(&format!("barrier={}\n", self.barrier));
        out.push_str(&format!("slope={}\n", self.slope));
        out.push_str(&format!("bounded={}\n", self.bounded));
        out.push_str(&format!("horizon={}\n", self.horizon));
        out.push_str(&format!("grid={}\n", self.grid));
        out.push_str(&format!("paths={}\n", self.paths));
        out.push_str(&format!("dt={}\n", self.dt));
        out.push_str(&format!("seed={}\n", self.seed));
        if let Some(o) = &self.output {
            out.push_str(&format!("output={o}\n"));
        }
        out
    }

    pub fn solution(&self) -> Result<HeatSolution> {
        HeatSolution::from_name(&self.process, self.c, self.lambda, self.s)
    }

    pub fn boundary(&self) -> MovingBoundary {
        MovingBoundary::affine(self.barrier, self.slope).with_horizon(self.horizon)
    }

    pub fn process_spec(&self) -> Result<ProcessSpec> {
        let h = self.solution()?;
        let mut p = ProcessSpec::new(self.process.clone(), self.y, vec![h.clone()])
            .with_horizon(self.horizon);
        if h.domain() == Domain::PositiveHalfLine || self.bounded {
            p = p.with_absorbing_floor(0.0);
        }
        Ok(p)
    }

    /// Build the theoretical density this config describes.
    pub fn density(&self) -> Result<FptDensity> {
        let h = self.solution()?;
        if self.bounded {
            if self.slope != 0.0 {
                return Err(Error::Precondition(
                    "the bounded case supports constant boundaries only".into(),
                ));
            }
            bounded_fpt_density(&h, self.y, self.barrier, self.horizon, &SeriesParams::default())
        } else {
            unbounded_fpt_density(&h, self.y, &self.boundary())
        }
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            paths: self.paths,
            dt: self.dt,
            seed: self.seed,
            ..Default::default()
        }
    }
}
