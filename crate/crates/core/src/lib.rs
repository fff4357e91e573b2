//! First-hitting-time densities for one-dimensional diffusions whose drift
//! is the spatial log-derivative of a positive solution of the backward
//! heat equation. The library covers:
//!
//! - a catalog of closed-form backward-heat solutions and the diffusions
//!   they generate (Brownian motion with drift, Brownian bridge, the 3D
//!   Bessel process and the 3D Bessel bridge) — [`heat_solutions`];
//! - heat polynomials, their associated functions and the derivative /
//!   ratio identities linking them — [`heat_polynomials`];
//! - Brownian first-passage baselines: constant and affine boundaries in
//!   closed form, image-method series for two-sided exit, and a Volterra
//!   integral-equation solver for smooth curved boundaries —
//!   [`brownian_fpt`];
//! - the change of measure that maps those Brownian densities to hitting
//!   densities of the transformed diffusions, in both the unbounded and
//!   the bounded (two-barrier) setting — [`fpt_transform`];
//! - drift classification via the Burgers equation and log-derivative
//!   decompositions — [`burgers_classify`];
//! - an independent Euler–Maruyama Monte Carlo engine with Brownian-bridge
//!   crossing correction and Kolmogorov–Smirnov comparison —
//!   [`montecarlo`].
//!
//! See the `examples/` directory for a runnable tour of each capability.

pub mod brownian_fpt;
pub mod burgers_classify;
pub mod cli;
pub mod config;
pub mod error;
pub mod fpt_transform;
pub mod heat_polynomials;
pub mod heat_solutions;
pub mod montecarlo;
pub mod quad;

pub use brownian_fpt::{
    affine_boundary_density, constant_barrier_density, two_sided_first_exit_density,
    upper_before_lower_density, volterra_fpt_density, MovingBoundary, SeriesParams,
};
pub use burgers_classify::{
    burgers_residual, classify_bessel_order, verify_decomposition, DriftSpec, Rect,
};
pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use fpt_transform::{bounded_fpt_density, unbounded_fpt_density, FptDensity, ProcessSpec};
pub use heat_polynomials::{assoc_w, check_poly_identities, heat_poly_v};
pub use heat_solutions::{Domain, HeatSolution, SolutionKind};
pub use montecarlo::{ks_critical_value, ks_distance, simulate_paths, SimConfig, SimResult};
