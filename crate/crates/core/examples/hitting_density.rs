//! First-hitting-time densities of transformed diffusions via the change of
//! measure h(u, b(u)) / h(0, y) applied to the Brownian first-passage
//! density: a Brownian bridge against a falling line, and a 3D Bessel
//! bridge reaching a level from above.

use burgers_fpt::config::ExperimentConfig;

fn main() {
    for name in ["example1", "example3"] {
        let cfg = ExperimentConfig::fixture(name).unwrap();
        let d = cfg.density().unwrap();
        println!(
            "{name}: process = {}, start = {}, boundary = {} + {} t, method = {:?}",
            cfg.process, cfg.y, cfg.barrier, cfg.slope, d.meta().method
        );
        for i in 1..=6 {
            let t = d.horizon() * i as f64 / 7.0;
            println!("  p({t:.4}) = {:.8}   F({t:.4}) = {:.8}", d.eval(t), d.cdf(t).unwrap());
        }
        println!("  total mass = {:.10}\n", 1.0 - d.defect());
        assert!(d.defect().abs() < 1e-4);
    }
}
