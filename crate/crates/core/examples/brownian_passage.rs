//! Brownian first-passage baselines: the one-sided constant barrier, the
//! affine boundary, and the image-method series for exit from an interval.
//! The printed masses follow the classical identities: P(T_0 < inf) = 1 and
//! P(hit a before 0 from y) = y/a.

use burgers_fpt::brownian_fpt::{
    affine_boundary_density, constant_barrier_density, two_sided_first_exit_density,
    upper_before_lower_density, SeriesParams,
};
use burgers_fpt::quad::integrate_to_infinity;

fn main() {
    let sp = SeriesParams::default();

    println!("one-sided barrier, y = 1:");
    for t in [0.25, 1.0, 4.0] {
        println!("  p(T_0 in dt)|t={t:<4} = {:.10}", constant_barrier_density(1.0, t).unwrap());
    }

    println!("affine boundary 1 + t from 0:");
    for t in [0.5, 1.0, 2.0] {
        println!("  p(t={t:<4}) = {:.10}", affine_boundary_density(0.0, 1.0, 1.0, t).unwrap());
    }

    let (y, a) = (0.4, 1.0);
    let exit_mass =
        integrate_to_infinity(|t| two_sided_first_exit_density(y, a, t, &sp).unwrap(), 1e-12, 1e-10);
    let up_mass =
        integrate_to_infinity(|s| upper_before_lower_density(0.0, y, s, a, &sp).unwrap(), 1e-12, 1e-10);
    println!("interval (0, {a}), start {y}:");
    println!("  total exit mass          = {exit_mass:.10}  (expect 1)");
    println!("  mass of exit through {a}   = {up_mass:.10}  (expect y/a = {})", y / a);
    assert!((exit_mass - 1.0).abs() < 1e-8);
    assert!((up_mass - y / a).abs() < 1e-8);
}
