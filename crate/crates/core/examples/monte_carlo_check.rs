//! Independent validation: simulate the diffusion with Euler-Maruyama plus
//! a Brownian-bridge crossing correction and compare the empirical hitting
//! CDF against the theoretical density with a Kolmogorov-Smirnov distance.

use burgers_fpt::cli::compare_run;
use burgers_fpt::config::ExperimentConfig;

fn main() {
    let mut cfg = ExperimentConfig::fixture("example1").unwrap();
    cfg.paths = 4000;
    cfg.seed = 7;
    let report = compare_run(&cfg).unwrap();
    print!("{}", report.text());
    assert!(report.pass_1pct());
}
