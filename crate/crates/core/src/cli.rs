//! Report and CSV generation behind the command-line front end. All output
//! is decimal CSV with 17 significant digits so files round-trip exactly and
//! are reproducible byte for byte given (config, seed).

use std::fmt::Write as _;

use crate::burgers_classify::{
    burgers_residual, classify_bessel_order, verify_decomposition, DriftSpec, Rect,
};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::heat_polynomials::{assoc_w, check_poly_identities, heat_poly_v};
use crate::heat_solutions::{heat_residual, standard_grid, HeatSolution, SolutionKind};
use crate::montecarlo::{empirical_cdf, ks_critical_value, ks_distance, simulate_paths};

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// `density`: columns t,density,cdf on a uniform grid over the support.
pub fn density_csv(cfg: &ExperimentConfig) -> Result<String> {
    if cfg.grid < 2 {
        return Err(Error::InvalidParameter("grid must be >= 2".into()));
    }
    let d = cfg.density()?;
    let end = d.horizon().min(cfg.horizon);
    let mut out = String::from("t,density,cdf\n");
    let mut acc = 0.0;
    let mut prev_t = 0.0;
    let mut prev_f = d.eval(0.0);
    for i in 0..=cfg.grid {
        let t = end * i as f64 / cfg.grid as f64;
        let f = d.eval(t);
        if i > 0 {
            let mid = d.eval(0.5 * (prev_t + t));
            acc += (t - prev_t) / 6.0 * (prev_f + 4.0 * mid + f);
        }
        let _ = writeln!(out, "{},{},{}", fmt(t), fmt(f), fmt(acc.min(1.0)));
        prev_t = t;
        prev_f = f;
    }
    Ok(out)
}

/// `simulate`: one row per path plus a trailing summary comment.
pub fn simulate_csv(cfg: &ExperimentConfig) -> Result<String> {
    let process = cfg.process_spec()?;
    let boundary = cfg.boundary();
    let result = simulate_paths(&process, &boundary, &cfg.sim_config())?;
    let mut out = String::from("path_index,outcome,time\n");
    for (i, rec) in result.records.iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", i, rec.outcome.label(), fmt(rec.time));
    }
    let _ = writeln!(
        out,
        "# n_hit={} n_absorbed={} n_survived={}",
        result.n_hit, result.n_absorbed_floor, result.n_survived_horizon
    );
    Ok(out)
}

/// Result of `compare`: theoretical vs simulated CDF with the KS verdict.
pub struct CompareReport {
    pub n: usize,
    pub ks: f64,
    pub crit_1pct: f64,
    pub crit_5pct: f64,
    pub csv: String,
}

impl CompareReport {
    pub fn pass_1pct(&self) -> bool {
        self.ks < self.crit_1pct
    }

    pub fn text(&self) -> String {
        format!(
            "n={}\nks_distance={}\ncritical_1pct={}\ncritical_5pct={}\nverdict_1pct={}\nverdict_5pct={}\n",
            self.n,
            fmt(self.ks),
            fmt(self.crit_1pct),
            fmt(self.crit_5pct),
            if self.ks < self.crit_1pct { "PASS" } else { "FAIL" },
            if self.ks < self.crit_5pct { "PASS" } else { "FAIL" },
        )
    }
}

/// `compare`: run the theoretical density and the simulation on the same
/// config and quantify the gap.
pub fn compare_run(cfg: &ExperimentConfig) -> Result<CompareReport> {
    let d = cfg.density()?;
    let process = cfg.process_spec()?;
    let result = simulate_paths(&process, &cfg.boundary(), &cfg.sim_config())?;
    let ks = ks_distance(&result, &d)?;
    let table = d.cdf_table(cfg.grid.max(2));
    let emp = empirical_cdf(&result);
    let mut csv = String::from("t,theoretical_cdf,empirical_cdf\n");
    let end = d.horizon().min(cfg.horizon);
    for i in 0..=cfg.grid.max(2) {
        let t = end * i as f64 / cfg.grid.max(2) as f64;
        let _ = writeln!(csv, "{},{},{}", fmt(t), fmt(table.eval(t)), fmt(emp.eval(t)));
    }
    Ok(CompareReport {
        n: cfg.paths,
        ks,
        crit_1pct: ks_critical_value(cfg.paths, 1.0),
        crit_5pct: ks_critical_value(cfg.paths, 5.0),
        csv,
    })
}

/// `classify --bessel m`.
pub fn classify_bessel_csv(m: i64) -> Result<String> {
    let n = classify_bessel_order(m)?;
    Ok(format!("bessel_order,class_index\n{m},{n}\n"))
}

/// `classify --drift name`: Burgers/heat residuals and, for the Bessel
/// bridge, the two-component decomposition error.
pub fn classify_drift_csv(
    name: &str,
    c: Option<f64>,
    lambda: Option<f64>,
    s: Option<f64>,
) -> Result<String> {
    let h = HeatSolution::from_name(name, c, lambda, s)?;
    let grid = standard_grid(&h);
    let rect = Rect {
        t_lo: -1.0,
        t_hi: h.pin().map_or(f64::INFINITY, |p| p - 1e-4),
        x_lo: f64::NEG_INFINITY,
        x_hi: f64::INFINITY,
    };
    let spec = DriftSpec::from_heat_solution(&h, rect);
    let burgers = burgers_residual(&spec, &grid)?;
    let heat = heat_residual(&h, &grid)?;
    let decomposition = if h.kind() == SolutionKind::BesselBridgeKernel {
        let s = h.pin().unwrap();
        let parts = vec![HeatSolution::linear_x(), HeatSolution::gaussian_kernel(s)?];
        verify_decomposition(&h, &parts, &grid)?
    } else {
        0.0
    };
    Ok(format!(
        "process,class_index,heat_residual,burgers_residual,decomposition_error\n{},1,{},{},{}\n",
        name,
        fmt(heat),
        fmt(burgers),
        fmt(decomposition)
    ))
}

/// `heatpoly`: table of v_k and w_k for k = 0..=n at a fixed point.
pub fn heatpoly_csv(n: i64, x: f64, t: f64) -> Result<String> {
    let mut out = String::from("n,x,t,v,w\n");
    for k in 0..=n.max(0) {
        let v = heat_poly_v(k, x, t)?;
        let w = if t > 0.0 { fmt(assoc_w(k, x, t)?) } else { "nan".into() };
        let _ = writeln!(out, "{},{},{},{},{}", k, fmt(x), fmt(t), fmt(v), w);
    }
    Ok(out)
}

/// `heatpoly --check`: identity violations at pseudo-random points in
/// (0.1, 3)^2 drawn deterministically from the seed.
pub fn heatpoly_check_csv(n_max: i64, points: usize, seed: u64) -> Result<String> {
    if points == 0 {
        return Err(Error::InvalidParameter("points must be >= 1".into()));
    }
    let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        0.1 + 2.9 * (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let pts: Vec<(f64, f64)> = (0..points).map(|_| (next(), next())).collect();
    let rep = check_poly_identities(n_max, &pts)?;
    let mut out = String::from("identity,max_violation\n");
    let _ = writeln!(out, "v_derivative,{}", fmt(rep.max_v_derivative));
    let _ = writeln!(out, "w_derivative,{}", fmt(rep.max_w_derivative));
    let _ = writeln!(out, "hi_chain,{}", fmt(rep.max_hi_chain));
    let _ = writeln!(out, "hj_chain,{}", fmt(rep.max_hj_chain));
    let _ = writeln!(out, "# skipped={}", rep.skipped);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_csv_shape_and_monotone_cdf() {
        let mut cfg = ExperimentConfig::fixture("example1").unwrap();
        cfg.grid = 50;
        let csv = density_csv(&cfg).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,density,cdf");
        assert_eq!(lines.len(), 52);
        let mut prev = -1.0;
        for line in &lines[1..] {
            let cdf: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
            assert!(cdf >= prev);
            prev = cdf;
        }
        // near-full mass by the pin
        assert!(prev > 0.999, "terminal cdf {prev}");
    }

    #[test]
    fn simulate_csv_summary_counts() {
        let mut cfg = ExperimentConfig::fixture("example1").unwrap();
        cfg.paths = 50;
        cfg.dt = 1e-2;
        let csv = simulate_csv(&cfg).unwrap();
        assert!(csv.starts_with("path_index,outcome,time\n"));
        assert_eq!(csv.lines().count(), 52);
        assert!(csv.lines().last().unwrap().starts_with("# n_hit="));
    }

    #[test]
    fn heatpoly_table_values() {
        let csv = heatpoly_csv(2, 1.0, 1.0).unwrap();
        let last = csv.lines().last().unwrap();
        let v: f64 = last.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(v, 2.0); // v_2(1,1) = x^2 + t
        let first = csv.lines().nth(1).unwrap();
        let v0: f64 = first.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(v0, 1.0);
    }

    #[test]
    fn heatpoly_check_within_tolerance() {
        let csv = heatpoly_check_csv(10, 50, 1).unwrap();
        for line in csv.lines().skip(1).filter(|l| !l.starts_with('#')) {
            let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!(v <= 1e-7, "{line}");
        }
    }

    #[test]
    fn classify_outputs() {
        assert!(classify_bessel_csv(5).unwrap().contains("5,2"));
        assert!(classify_bessel_csv(4).is_err());
        let csv = classify_drift_csv("bessel_bridge", None, None, Some(2.0)).unwrap();
        let row = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        let burgers: f64 = fields[3].parse().unwrap();
        let decomp: f64 = fields[4].parse().unwrap();
        assert!(burgers <= 1e-6);
        assert!(decomp <= 1e-10);
    }
}
