//! The bounded case: hitting a level a from below while an absorbing floor
//! at 0 is avoided. For the 3D Bessel process from y the hit is certain, so
//! the density integrates to one even though the comparison Brownian motion
//! reaches a first with probability only y/a.

use burgers_fpt::config::ExperimentConfig;

fn main() {
    let cfg = ExperimentConfig::fixture("example8").unwrap();
    let d = cfg.density().unwrap();
    println!(
        "3D Bessel from {} up to {} (floor at 0), horizon {}:",
        cfg.y, cfg.barrier, cfg.horizon
    );
    for t in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        println!("  p({t:<4}) = {:.8}   F({t:<4}) = {:.8}", d.eval(t), d.cdf(t).unwrap());
    }
    let mass = 1.0 - d.defect();
    println!("  mass over [0, {}] = {:.10}", cfg.horizon, mass);
    assert!(mass > 0.999);
}
