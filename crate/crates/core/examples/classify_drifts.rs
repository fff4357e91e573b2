//! Drift classification: every catalog drift solves the Burgers equation;
//! sums of such drifts generally do not (the equation is nonlinear), but
//! odd-order Bessel drifts n/x decompose into n copies of 1/x, and the 3D
//! Bessel bridge drift splits into the Bessel and bridge parts.

use burgers_fpt::burgers_classify::{
    burgers_residual, classify_bessel_order, verify_decomposition, DriftSpec, Rect,
};
use burgers_fpt::heat_solutions::{reference_catalog, standard_grid, HeatSolution};

fn main() {
    println!("Burgers residuals of the catalog drifts:");
    for h in reference_catalog() {
        let grid = standard_grid(&h);
        let rect = Rect {
            t_lo: -1.0,
            t_hi: h.pin().map_or(2.0, |s| s - 1e-3),
            x_lo: -1e6,
            x_hi: 1e6,
        };
        let d = DriftSpec::from_heat_solution(&h, rect);
        let r = burgers_residual(&d, &grid).unwrap();
        println!("  {:<40} {r:.3e}", d.description);
        assert!(r <= 1e-6);
    }

    // mu = 2/x (Bessel of order 5) is a sum of two Burgers solutions but not
    // one itself.
    let double = DriftSpec::new(
        |_, x| Ok(2.0 / x),
        |_, x| Ok(-2.0 / (x * x)),
        Rect { t_lo: 0.0, t_hi: 1.0, x_lo: 0.4, x_hi: 3.1 },
        "2/x",
    );
    let grid = Rect { t_lo: 0.1, t_hi: 0.9, x_lo: 0.5, x_hi: 3.0 }.grid(20);
    let r = burgers_residual(&double, &grid).unwrap();
    println!("\n2/x alone: residual {r:.3e} (fails, as it should)");
    assert!(r > 0.03);

    println!("\nodd Bessel orders and their class index:");
    for m in [1i64, 3, 5, 7, 9] {
        println!("  order {m} -> {} copies of 1/x", classify_bessel_order(m).unwrap());
    }

    let target = HeatSolution::bessel_bridge_kernel(2.0).unwrap();
    let parts = vec![HeatSolution::linear_x(), HeatSolution::gaussian_kernel(2.0).unwrap()];
    let err = verify_decomposition(&target, &parts, &standard_grid(&target)).unwrap();
    println!("\nBessel-bridge drift = 1/x - x/(s - t): decomposition error {err:.3e}");
    assert!(err <= 1e-10);
}
