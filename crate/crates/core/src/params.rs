//! Physical plasma parameters and their dimensionless reduction.
//!
//! All numerics downstream run on `(x_p, y)`:
//!
//! ```text
//! x_p = ω_p / (k_F v_F)        y = ν / (k_F v_F) = 1 / (k_F l),  l = v_F / ν
//! ```
//!
//! Unit system is left to the caller; constants such as `e`, `m` and `ħ` are
//! inputs, not hardcoded values.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Physical inputs describing the electron gas and the test charge.
#[derive(Clone, Debug, PartialEq)]
pub struct PlasmaParams {
    /// Test charge `Q`.
    pub charge: f64,
    /// Fermi wavenumber `k_F`.
    pub fermi_wavenumber: f64,
    /// Fermi velocity `v_F`.
    pub fermi_velocity: f64,
    /// Effective collision frequency `ν`; zero means collisionless.
    pub collision_frequency: f64,
    /// Langmuir frequency `ω_p`.
    pub plasma_frequency: f64,
    /// Electron density `n`, needed only for the Thomas–Fermi wavenumber.
    pub electron_density: Option<f64>,
    pub electron_charge: Option<f64>,
    pub electron_mass: Option<f64>,
    pub planck_reduced: Option<f64>,
    /// Explicit Fermi energy; falls back to `m v_F² / 2` when a mass is known.
    pub fermi_energy: Option<f64>,
}

impl PlasmaParams {
    pub fn new(
        charge: f64,
        fermi_wavenumber: f64,
        fermi_velocity: f64,
        collision_frequency: f64,
        plasma_frequency: f64,
    ) -> Self {
        PlasmaParams {
            charge,
            fermi_wavenumber,
            fermi_velocity,
            collision_frequency,
            plasma_frequency,
            electron_density: None,
            electron_charge: None,
            electron_mass: None,
            planck_reduced: None,
            fermi_energy: None,
        }
    }

    pub fn with_density(mut self, density: f64, electron_charge: f64) -> Self {
        self.electron_density = Some(density);
        self.electron_charge = Some(electron_charge);
        self
    }

    pub fn with_fermi_energy(mut self, fermi_energy: f64) -> Self {
        self.fermi_energy = Some(fermi_energy);
        self
    }

    pub fn with_mass(mut self, electron_mass: f64, planck_reduced: f64) -> Self {
        self.electron_mass = Some(electron_mass);
        self.planck_reduced = Some(planck_reduced);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("fermi_wavenumber", self.fermi_wavenumber),
            ("fermi_velocity", self.fermi_velocity),
            ("plasma_frequency", self.plasma_frequency),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::ParameterDomain(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if !(self.collision_frequency.is_finite() && self.collision_frequency >= 0.0) {
            return Err(Error::ParameterDomain(format!(
                "collision_frequency must be non-negative, got {}",
                self.collision_frequency
            )));
        }
        if !self.charge.is_finite() {
            return Err(Error::ParameterDomain(format!(
                "charge must be finite, got {}",
                self.charge
            )));
        }
        Ok(())
    }

    /// Reduces to `(x_p, y)`.
    pub fn dimensionless(&self) -> Result<Dimensionless> {
        self.validate()?;
        let kv = self.fermi_wavenumber * self.fermi_velocity;
        Dimensionless::new(self.plasma_frequency / kv, self.collision_frequency / kv)
    }

    /// `τ = 1/ν`; `None` in the collisionless case.
    pub fn relaxation_time(&self) -> Option<f64> {
        (self.collision_frequency > 0.0).then(|| 1.0 / self.collision_frequency)
    }

    /// Mean free path `l = v_F τ`; `None` when collisionless.
    pub fn mean_free_path(&self) -> Option<f64> {
        self.relaxation_time().map(|tau| self.fermi_velocity * tau)
    }

    pub fn fermi_momentum(&self) -> Option<f64> {
        self.electron_mass.map(|m| m * self.fermi_velocity)
    }

    pub fn resolved_fermi_energy(&self) -> Option<f64> {
        self.fermi_energy.or_else(|| {
            self.electron_mass
                .map(|m| 0.5 * m * self.fermi_velocity * self.fermi_velocity)
        })
    }

    /// `k_TF = (6π n e² / ε_F)^{1/2}`.
    pub fn thomas_fermi_wavenumber(&self) -> Result<f64> {
        let n = self
            .electron_density
            .ok_or_else(|| Error::ParameterDomain("electron density required".into()))?;
        let e = self
            .electron_charge
            .ok_or_else(|| Error::ParameterDomain("electron charge required".into()))?;
        let fermi_energy = self.resolved_fermi_energy().ok_or_else(|| {
            Error::ParameterDomain("Fermi energy (or electron mass) required".into())
        })?;
        if !(n > 0.0 && fermi_energy > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "density and Fermi energy must be positive (n = {n}, eps_F = {fermi_energy})"
            )));
        }
        Ok((6.0 * PI * n * e * e / fermi_energy).sqrt())
    }

    pub fn radius_to_dimensionless(&self, r: f64) -> f64 {
        self.fermi_wavenumber * r
    }

    pub fn radius_from_dimensionless(&self, big_r: f64) -> f64 {
        big_r / self.fermi_wavenumber
    }

    pub fn wavenumber_to_dimensionless(&self, k: f64) -> f64 {
        k / self.fermi_wavenumber
    }

    pub fn wavenumber_from_dimensionless(&self, q: f64) -> f64 {
        q * self.fermi_wavenumber
    }

    /// Physical potential `V = Q k_F U`.
    pub fn potential_from_dimensionless(&self, u: f64) -> f64 {
        self.charge * self.fermi_wavenumber * u
    }
}

/// The pair `(x_p, y)` every numerical routine is written in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dimensionless {
    pub x_p: f64,
    pub y: f64,
}

impl Dimensionless {
    pub fn new(x_p: f64, y: f64) -> Result<Self> {
        if !(x_p.is_finite() && x_p > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "x_p must be positive, got {x_p}"
            )));
        }
        if !(y.is_finite() && y >= 0.0) {
            return Err(Error::ParameterDomain(format!(
                "y must be non-negative, got {y}"
            )));
        }
        Ok(Dimensionless { x_p, y })
    }

    pub fn is_collisionless(&self) -> bool {
        self.y == 0.0
    }

    /// `k_TF / k_F = √3 x_p`.
    pub fn screening_wavenumber(&self) -> f64 {
        3f64.sqrt() * self.x_p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ratio_identities() {
        let p = PlasmaParams::new(1.0, 3.0, 5.0, 0.0, 15.0);
        let d = p.dimensionless().unwrap();
        assert_eq!((d.x_p, d.y), (1.0, 0.0));
        assert!(d.is_collisionless());

        let p = PlasmaParams::new(1.0, 3.0, 5.0, 0.01 * 15.0, 15.0);
        assert!((p.dimensionless().unwrap().y - 0.01).abs() < 1e-15);

        let p = PlasmaParams::new(1.0, 2.0, 3.0, 0.6, 12.0);
        let d = p.dimensionless().unwrap();
        assert!((d.x_p - 2.0).abs() < 1e-15);
        assert!((d.y - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_positive_scales() {
        for p in [
            PlasmaParams::new(1.0, 0.0, 1.0, 0.0, 1.0),
            PlasmaParams::new(1.0, 1.0, -1.0, 0.0, 1.0),
            PlasmaParams::new(1.0, 1.0, 1.0, 0.0, 0.0),
            PlasmaParams::new(1.0, 1.0, 1.0, -0.1, 1.0),
            PlasmaParams::new(f64::NAN, 1.0, 1.0, 0.0, 1.0),
        ] {
            assert!(matches!(p.dimensionless(), Err(Error::ParameterDomain(_))));
        }
    }

    #[test]
    fn collision_length_scales() {
        let p = PlasmaParams::new(1.0, 2.0, 3.0, 0.6, 12.0);
        let tau = p.relaxation_time().unwrap();
        let l = p.mean_free_path().unwrap();
        assert!((tau - 1.0 / 0.6).abs() < 1e-15);
        assert!((l - 5.0).abs() < 1e-14);
        let y = p.dimensionless().unwrap().y;
        assert!((y - 1.0 / (l * p.fermi_wavenumber)).abs() < 1e-15);
        assert!(PlasmaParams::new(1.0, 2.0, 3.0, 0.0, 12.0)
            .mean_free_path()
            .is_none());
    }

    #[test]
    fn thomas_fermi_unit_input() {
        // n e² / ε_F = 1/(6π)
        let p = PlasmaParams::new(1.0, 1.0, 1.0, 0.0, 1.0)
            .with_density(1.0 / (6.0 * PI), 1.0)
            .with_fermi_energy(1.0);
        assert!((p.thomas_fermi_wavenumber().unwrap() - 1.0).abs() < 1e-15);

        let doubled = PlasmaParams {
            electron_density: Some(2.0 / (6.0 * PI)),
            ..p.clone()
        };
        let ratio =
            doubled.thomas_fermi_wavenumber().unwrap() / p.thomas_fermi_wavenumber().unwrap();
        assert!((ratio - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn thomas_fermi_needs_inputs() {
        let bare = PlasmaParams::new(1.0, 1.0, 1.0, 0.0, 1.0);
        assert!(matches!(
            bare.thomas_fermi_wavenumber(),
            Err(Error::ParameterDomain(_))
        ));
        let no_energy = bare.clone().with_density(1.0, 1.0);
        assert!(no_energy.thomas_fermi_wavenumber().is_err());
        // Fermi energy from m v_F² / 2.
        let with_mass = no_energy.with_mass(2.0, 1.0);
        assert_eq!(with_mass.resolved_fermi_energy(), Some(1.0));
        assert!(with_mass.thomas_fermi_wavenumber().is_ok());
    }

    #[test]
    fn fermi_energy_consistent_with_collision_parameter() {
        // y = ν ħ / (2 ε_F) when k_F = m v_F / ħ.
        let (m, hbar, vf, nu) = (1.5, 0.7, 2.0, 0.03);
        let kf = m * vf / hbar;
        let p = PlasmaParams::new(1.0, kf, vf, nu, 1.0).with_mass(m, hbar);
        let y = p.dimensionless().unwrap().y;
        let alt = nu * hbar / (2.0 * p.resolved_fermi_energy().unwrap());
        assert!((y - alt).abs() < 1e-15);
        assert_eq!(p.fermi_momentum(), Some(m * vf));
    }

    #[test]
    fn unit_conversions() {
        let p = PlasmaParams::new(2.5, 1.7, 1.0, 0.0, 1.0);
        assert!((p.radius_to_dimensionless(10.0) - 17.0).abs() < 1e-13);
        assert!((p.wavenumber_to_dimensionless(3.4) - 2.0).abs() < 1e-15);
        assert!((p.potential_from_dimensionless(1.0) - 2.5 * 1.7).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn ratios_are_scale_invariant(
            kf in 0.1f64..10.0, vf in 0.1f64..10.0, wp in 0.1f64..10.0,
            nu in 0.0f64..5.0, lambda in 0.01f64..100.0,
        ) {
            let base = PlasmaParams::new(1.0, kf, vf, nu, wp).dimensionless().unwrap();
            // ω_p and ν scale with λ², k_F and v_F with λ each.
            let scaled = PlasmaParams::new(1.0, kf * lambda, vf * lambda, nu * lambda * lambda, wp * lambda * lambda)
                .dimensionless()
                .unwrap();
            prop_assert!((base.x_p - scaled.x_p).abs() <= 1e-12 * base.x_p);
            prop_assert!((base.y - scaled.y).abs() <= 1e-12 * base.y.max(1e-300));
        }

        #[test]
        fn radius_round_trip(kf in 1e-3f64..1e3, r in 1e-3f64..1e3) {
            let p = PlasmaParams::new(1.0, kf, 1.0, 0.0, 1.0);
            let back = p.radius_from_dimensionless(p.radius_to_dimensionless(r));
            prop_assert!((back - r).abs() <= 4.0 * f64::EPSILON * r);
            let k = p.wavenumber_from_dimensionless(p.wavenumber_to_dimensionless(r));
            prop_assert!((k - r).abs() <= 4.0 * f64::EPSILON * r);
        }
    }
}
