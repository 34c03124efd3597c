//! Benchmark fixtures.

use friedel_core::potential::uniform_grid;
use friedel_core::{Method, ProfileParams, QuadratureSpec, RadialProfile};

/// The 1000-point asymptotic profile used by the fit benchmark.
pub fn fit_fixture() -> RadialProfile {
    let grid = uniform_grid(15.0, 40.0, 1000).expect("valid grid");
    friedel_core::potential::profile(
        &grid,
        Method::Asymptotic,
        ProfileParams::new(1.0, 0.05),
        &QuadratureSpec::default(),
    )
    .expect("asymptotic profile")
}
