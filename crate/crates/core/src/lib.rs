//! Screened potential of a point charge in a degenerate (T = 0) collisional
//! electron plasma.
//!
//! The crate is organised bottom-up:
//!
//! - [`params`]: physical inputs and the dimensionless pair `(x_p, y)`.
//! - [`dielectric`]: static longitudinal permittivity, closed form and
//!   real-integral form, with the collisionless Lindhard limit.
//! - [`oscillatory`]: adaptive Gauss–Kronrod panels and the semi-infinite
//!   sine-transform engine.
//! - [`potential`]: numeric Fourier inversion, the asymptotic Friedel law and
//!   the Coulomb / Yukawa references.
//! - [`analysis`]: extrema detection, damped-cosine fitting and profile
//!   comparison.
//!
//! Everything works in the dimensionless units `q = k / k_F`, `R = k_F r` and
//! `U = V / (Q k_F)`.

pub mod analysis;
pub mod dielectric;
pub mod error;
pub mod oscillatory;
pub mod params;
pub mod potential;

pub use analysis::{ComparisonReport, DampedCosineFit, Extremum};
pub use dielectric::{KohnDiagnostic, PermittivityModel, PermittivitySample, Representation};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use oscillatory::{QuadratureResult, QuadratureSpec};
pub use params::{Dimensionless, PlasmaParams};
pub use potential::{AsymptoticParams, Method, ProfileParams, RadialProfile};
