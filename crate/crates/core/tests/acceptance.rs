//! End-to-end acceptance gate: one test per criterion, each printing a
//! single PASS/FAIL line (visible with --nocapture).

use std::time::Instant;

use burgers_fpt::brownian_fpt::{
    affine_boundary_density, two_sided_first_exit_density, upper_before_lower_density,
    volterra_uniform, MovingBoundary, SeriesParams,
};
use burgers_fpt::burgers_classify::{burgers_residual, verify_decomposition, DriftSpec, Rect};
use burgers_fpt::config::ExperimentConfig;
use burgers_fpt::fpt_transform::bounded_fpt_density;
use burgers_fpt::heat_polynomials::check_poly_identities;
use burgers_fpt::heat_solutions::{heat_residual, reference_catalog, standard_grid, HeatSolution};
use burgers_fpt::montecarlo::{ks_critical_value, ks_distance, simulate_paths};
use burgers_fpt::quad::integrate_to_infinity;

fn report(n: u32, what: &str, ok: bool, detail: String, t0: Instant) -> bool {
    println!(
        "criterion {n} ({what}): {} [{detail}; {:.2}s]",
        if ok { "PASS" } else { "FAIL" },
        t0.elapsed().as_secs_f64()
    );
    ok
}

#[test]
fn criterion_1_heat_catalog_residuals() {
    let t0 = Instant::now();
    let mut worst_heat = 0.0f64;
    let mut worst_burgers = 0.0f64;
    for h in reference_catalog() {
        let grid = standard_grid(&h);
        worst_heat = worst_heat.max(heat_residual(&h, &grid).unwrap());
        let rect = Rect {
            t_lo: -1.0,
            t_hi: h.pin().map_or(2.0, |s| s - 1e-3),
            x_lo: -1e6,
            x_hi: 1e6,
        };
        let d = DriftSpec::from_heat_solution(&h, rect);
        worst_burgers = worst_burgers.max(burgers_residual(&d, &grid).unwrap());
    }
    let ok = worst_heat <= 1e-8 && worst_burgers <= 1e-6;
    assert!(report(
        1,
        "heat catalog",
        ok,
        format!("heat residual {worst_heat:.2e}, burgers residual {worst_burgers:.2e}"),
        t0
    ));
}

#[test]
fn criterion_2_drift_decomposition() {
    let t0 = Instant::now();
    let target = HeatSolution::bessel_bridge_kernel(2.0).unwrap();
    let parts = vec![HeatSolution::linear_x(), HeatSolution::gaussian_kernel(2.0).unwrap()];
    let err = verify_decomposition(&target, &parts, &standard_grid(&target)).unwrap();
    let ok = err <= 1e-10;
    assert!(report(2, "drift decomposition", ok, format!("max error {err:.2e}"), t0));
}

#[test]
fn criterion_3_volterra_vs_closed_form() {
    let t0 = Instant::now();
    let bnd = MovingBoundary::affine(1.0, 1.0);
    let max_rel = |steps: usize| -> f64 {
        let (grid, p) = volterra_uniform(&bnd, 0.0, 4.0, steps).unwrap();
        let mut worst = 0.0f64;
        for (t, v) in grid.iter().zip(&p) {
            let exact = affine_boundary_density(0.0, 1.0, 1.0, *t).unwrap();
            if exact >= 1e-300 {
                worst = worst.max((v - exact).abs() / exact);
            }
        }
        worst
    };
    let e_full = max_rel(2000);
    let e_half = max_rel(1000);
    // The kernel vanishes identically on affine boundaries, so the solver is
    // exact up to roundoff at every resolution; halving then cannot show a
    // 3x reduction and the check degenerates to the floating-point floor.
    let ok = e_full <= 1e-6 && (e_half >= 3.0 * e_full || (e_full <= 1e-12 && e_half <= 1e-12));
    assert!(report(
        3,
        "volterra oracle",
        ok,
        format!("rel err {e_full:.2e} at 2000 steps, {e_half:.2e} at 1000"),
        t0
    ));
}

#[test]
fn criterion_4_series_normalization() {
    let t0 = Instant::now();
    let sp = SeriesParams::default();
    let exit_mass = integrate_to_infinity(
        |t| two_sided_first_exit_density(0.5, 1.0, t, &sp).unwrap(),
        1e-10,
        1e-9,
    );
    let up_mass = integrate_to_infinity(
        |s| upper_before_lower_density(0.0, 0.5, s, 1.0, &sp).unwrap(),
        1e-10,
        1e-9,
    );
    let ok = (exit_mass - 1.0).abs() <= 1e-6 && (up_mass - 0.5).abs() <= 1e-6;
    assert!(report(
        4,
        "series normalization",
        ok,
        format!("exit mass {exit_mass:.9}, upper mass {up_mass:.9}"),
        t0
    ));
}

#[test]
fn criterion_5_bounded_mass() {
    let t0 = Instant::now();
    let h = HeatSolution::linear_x();
    let d = bounded_fpt_density(&h, 0.5, 1.5, 60.0, &SeriesParams::default()).unwrap();
    let mass = 1.0 - d.defect();
    let ok = (mass - 1.0).abs() <= 1e-4;
    assert!(report(5, "bounded mass", ok, format!("mass {mass:.8}"), t0));
}

#[test]
fn criterion_6_simulation_matches_theory() {
    let t0 = Instant::now();
    let crit = ks_critical_value(5500, 1.0);
    let mut detail = String::new();
    let mut all_ok = true;
    for name in ["example1", "example3", "example8"] {
        let mut cfg = ExperimentConfig::fixture(name).unwrap();
        cfg.paths = 5500;
        cfg.dt = 1e-3;
        let d = cfg.density().unwrap();
        let process = cfg.process_spec().unwrap();
        let boundary = cfg.boundary();
        let mut passes = 0;
        for seed in 0..100u64 {
            cfg.seed = seed;
            let r = simulate_paths(&process, &boundary, &cfg.sim_config()).unwrap();
            if ks_distance(&r, &d).unwrap() < crit {
                passes += 1;
            }
        }
        if passes < 95 {
            all_ok = false;
        }
        detail.push_str(&format!("{name}: {passes}/100  "));
    }
    assert!(report(
        6,
        "simulation agreement",
        all_ok,
        format!("{}at 1% critical {crit:.5}", detail),
        t0
    ));
}

#[test]
fn criterion_7_polynomial_identities() {
    let t0 = Instant::now();
    let mut state: u64 = 0x9E3779B97F4A7C15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        0.1 + 2.9 * (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let pts: Vec<(f64, f64)> = (0..50).map(|_| (next(), next())).collect();
    let rep = check_poly_identities(10, &pts).unwrap();
    let worst = rep.max_violation();
    let ok = worst <= 1e-7;
    assert!(report(7, "polynomial identities", ok, format!("max violation {worst:.2e}"), t0));
}

#[test]
fn criterion_8_weight_factor_is_detectable() {
    let t0 = Instant::now();
    // Deliberately wrong theory: drop the h-ratio by using the constant
    // solution, leaving the bare Brownian interval-exit density.
    let wrong = bounded_fpt_density(
        &HeatSolution::constant(1.0).unwrap(),
        0.5,
        1.5,
        8.0,
        &SeriesParams::default(),
    )
    .unwrap();
    let cfg = ExperimentConfig::fixture("example8").unwrap();
    let r = simulate_paths(&cfg.process_spec().unwrap(), &cfg.boundary(), &cfg.sim_config())
        .unwrap();
    let ks = ks_distance(&r, &wrong).unwrap();
    let ok = ks > 0.1;
    assert!(report(8, "weight factor regression guard", ok, format!("ks {ks:.4}"), t0));
}

#[test]
fn criterion_9_determinism_across_workers() {
    let t0 = Instant::now();
    let exe = env!("CARGO_BIN_EXE_burgers-fpt");
    let run = |threads: &str| -> Vec<u8> {
        let out = std::process::Command::new(exe)
            .args([
                "simulate",
                "--fixture",
                "example1",
                "--paths",
                "400",
                "--dt",
                "0.005",
                "--seed",
                "123",
            ])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let first = run("1");
    let ok = run("1") == first && run("2") == first && run("4") == first;
    let ok = ok && !first.is_empty();
    assert!(report(
        9,
        "determinism",
        ok,
        format!("{} bytes, identical across 1/2/4 workers and reruns", first.len()),
        t0
    ));
}
