//! Screened potential around a point charge.
//!
//! Output convention: `U(R) = V(r) / (Q k_F)` at `R = k_F r`. The exact
//! potential is the Fourier inversion
//!
//! ```text
//! U(R) = (2 / πR) ∫₀^∞ sin(qR) / (q ε(q)) dq
//! ```
//!
//! and its large-R Friedel tail is
//!
//! ```text
//! U(R) ≈ (A/Q) e^{−yR} cos(2R + y/2) / R³,   A/Q = 12 x_p² / (8 + 3x_p²)²
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dielectric::PermittivityModel;
use crate::error::{Error, Result};
use crate::oscillatory::{try_integrate_sin, QuadratureResult, QuadratureSpec, SinOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Numeric,
    Asymptotic,
    Yukawa,
    Coulomb,
    ThomasFermi,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Numeric => "numeric",
            Method::Asymptotic => "asymptotic",
            Method::Yukawa => "yukawa",
            Method::Coulomb => "coulomb",
            Method::ThomasFermi => "thomas-fermi",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "numeric" => Ok(Method::Numeric),
            "asymptotic" => Ok(Method::Asymptotic),
            "yukawa" => Ok(Method::Yukawa),
            "coulomb" => Ok(Method::Coulomb),
            "thomas-fermi" | "thomas_fermi" => Ok(Method::ThomasFermi),
            other => Err(Error::Domain(format!("unknown method `{other}`"))),
        }
    }
}

/// Method-specific inputs for [`profile`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileParams {
    pub x_p: f64,
    pub y: f64,
    /// Display scale for the asymptotic law (`A k_F³` when reproducing
    /// figures). Defaults to `A/Q`.
    pub scale: Option<f64>,
    /// Dimensionless screening wavenumber for the Yukawa method.
    pub screening: Option<f64>,
}

impl ProfileParams {
    pub fn new(x_p: f64, y: f64) -> Self {
        ProfileParams {
            x_p,
            y,
            scale: None,
            screening: None,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = Some(scale);
        self
    }

    pub fn with_screening(mut self, screening: f64) -> Self {
        self.screening = Some(screening);
        self
    }
}

/// Potential sampled on an ascending radius grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    pub r_values: Vec<f64>,
    pub u_values: Vec<f64>,
    pub method: Method,
    pub params: ProfileParams,
    /// Per-point quadrature summaries, in units of `U`; `None` for closed-form
    /// methods.
    pub diagnostics: Vec<Option<QuadratureResult>>,
}

impl RadialProfile {
    /// Builds a profile from raw columns, checking the grid invariants.
    pub fn from_columns(
        r_values: Vec<f64>,
        u_values: Vec<f64>,
        method: Method,
        params: ProfileParams,
    ) -> Result<Self> {
        validate_grid(&r_values)?;
        if r_values.len() != u_values.len() {
            return Err(Error::Domain(format!(
                "column lengths differ ({} radii, {} values)",
                r_values.len(),
                u_values.len()
            )));
        }
        let diagnostics = vec![None; r_values.len()];
        Ok(RadialProfile {
            r_values,
            u_values,
            method,
            params,
            diagnostics,
        })
    }

    pub fn len(&self) -> usize {
        self.r_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_values.is_empty()
    }

    pub fn window(&self) -> (f64, f64) {
        (self.r_values[0], self.r_values[self.r_values.len() - 1])
    }

    /// `R³ U(R)`, the form in which the Friedel tail is a pure damped cosine.
    pub fn r_cubed_values(&self) -> Vec<f64> {
        self.r_values
            .iter()
            .zip(&self.u_values)
            .map(|(r, u)| r * r * r * u)
            .collect()
    }

    /// Keeps only points with `lo <= R <= hi`.
    pub fn restricted(&self, lo: f64, hi: f64) -> Result<Self> {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| self.r_values[i] >= lo && self.r_values[i] <= hi)
            .collect();
        if keep.is_empty() {
            return Err(Error::Domain(format!(
                "window [{lo}, {hi}] contains no grid points"
            )));
        }
        Ok(RadialProfile {
            r_values: keep.iter().map(|&i| self.r_values[i]).collect(),
            u_values: keep.iter().map(|&i| self.u_values[i]).collect(),
            method: self.method,
            params: self.params,
            diagnostics: keep.iter().map(|&i| self.diagnostics[i]).collect(),
        })
    }

    /// Multiplies every potential value by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.u_values.iter_mut().for_each(|u| *u *= factor);
        out
    }
}

fn validate_grid(r: &[f64]) -> Result<()> {
    if r.is_empty() {
        return Err(Error::Domain("empty radius grid".into()));
    }
    if !r.iter().all(|&x| x.is_finite() && x > 0.0) {
        return Err(Error::Domain("radii must be positive and finite".into()));
    }
    if !r.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain("radii must be strictly increasing".into()));
    }
    Ok(())
}

/// `n` equally spaced radii from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) || n < 2 {
        return Err(Error::Domain(format!(
            "need 0 < lo < hi and at least two points (got [{lo}, {hi}], n = {n})"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
        .collect())
}

/// `A = 12 Q x_p² / (8 + 3x_p²)²`.
pub fn amplitude_a(x_p: f64, charge: f64) -> f64 {
    let d = 8.0 + 3.0 * x_p * x_p;
    12.0 * charge * x_p * x_p / (d * d)
}

/// Parameters of the asymptotic Friedel law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticParams {
    pub amplitude_over_charge: f64,
    pub phase: f64,
    pub decay: f64,
    pub wavenumber: f64,
    pub scale: Option<f64>,
}

impl AsymptoticParams {
    pub fn new(x_p: f64, y: f64) -> Self {
        AsymptoticParams {
            amplitude_over_charge: amplitude_a(x_p, 1.0),
            phase: 0.5 * y,
            decay: y,
            wavenumber: 2.0,
            scale: None,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = Some(scale);
        self
    }

    pub fn evaluate(&self, r: f64) -> Result<f64> {
        potential_asymptotic(
            r,
            self.decay,
            self.scale.unwrap_or(self.amplitude_over_charge),
        )
    }
}

/// `scale · e^{−yR} cos(2R + y/2) / R³`.
pub fn potential_asymptotic(r: f64, y: f64, scale: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("R must be positive, got {r}")));
    }
    if !(y.is_finite() && y >= 0.0) {
        return Err(Error::Domain(format!("y must be non-negative, got {y}")));
    }
    Ok(scale * (-y * r).exp() * (2.0 * r + 0.5 * y).cos() / (r * r * r))
}

/// `e^{−κR} / R`.
pub fn yukawa_reference(r: f64, screening: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("R must be positive, got {r}")));
    }
    if !(screening.is_finite() && screening >= 0.0) {
        return Err(Error::Domain(format!(
            "screening must be non-negative, got {screening}"
        )));
    }
    Ok((-screening * r).exp() / r)
}

/// Numeric inversion `U(R) = (2/πR) ∫₀^∞ sin(qR) / (q ε(q)) dq` for any
/// permittivity model. The returned summary is expressed in units of `U`.
pub fn invert_permittivity(
    model: &PermittivityModel,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("R must be positive, got {r}")));
    }
    let options = SinOptions {
        // f(q) sin(qR) → R at the origin for 1/q, → 0 when screened.
        endpoint_limit: Some(if model.is_screened() { 0.0 } else { r }),
        breakpoints: if spec.kohn_refine {
            model.kohn_breakpoints()
        } else {
            Vec::new()
        },
    };
    let integrand = |q: f64| -> Result<f64> { Ok(1.0 / (q * model.eval(q)?)) };
    let result = try_integrate_sin(integrand, r, spec, &options).map_err(|e| e.at_radius(r))?;
    let factor = 2.0 / (PI * r);
    Ok(QuadratureResult {
        value: factor * result.value,
        error_estimate: factor * result.error_estimate,
        ..result
    })
}

/// Dimensionless potential from the exact inversion with the closed-form
/// permittivity (Lindhard when `y = 0`, bare Coulomb when `x_p = 0`).
pub fn potential_numeric(r: f64, x_p: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    potential_numeric_detailed(r, x_p, y, spec).map(|q| q.value)
}

pub fn potential_numeric_detailed(
    r: f64,
    x_p: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let model = PermittivityModel::from_parameters(x_p, y)?;
    invert_permittivity(&model, r, spec)
}

/// Evaluates `method` on every grid point. Numeric points run in parallel;
/// output order follows the grid.
pub fn profile(
    r_grid: &[f64],
    method: Method,
    params: ProfileParams,
    spec: &QuadratureSpec,
) -> Result<RadialProfile> {
    validate_grid(r_grid)?;
    let points: Vec<(f64, Option<QuadratureResult>)> = match method {
        Method::Numeric => {
            let model = PermittivityModel::from_parameters(params.x_p, params.y)?;
            spec.validate()?;
            r_grid
                .par_iter()
                .map(|&r| invert_permittivity(&model, r, spec).map(|q| (q.value, Some(q))))
                .collect::<Result<_>>()?
        }
        Method::Asymptotic => {
            let scale = params.scale.unwrap_or_else(|| amplitude_a(params.x_p, 1.0));
            r_grid
                .iter()
                .map(|&r| potential_asymptotic(r, params.y, scale).map(|u| (u, None)))
                .collect::<Result<_>>()?
        }
        Method::Yukawa => {
            let screening = params.screening.ok_or_else(|| {
                Error::ParameterDomain("yukawa profile needs an explicit screening".into())
            })?;
            r_grid
                .iter()
                .map(|&r| yukawa_reference(r, screening).map(|u| (u, None)))
                .collect::<Result<_>>()?
        }
        Method::ThomasFermi => {
            let screening = 3f64.sqrt() * params.x_p;
            r_grid
                .iter()
                .map(|&r| yukawa_reference(r, screening).map(|u| (u, None)))
                .collect::<Result<_>>()?
        }
        Method::Coulomb => r_grid.iter().map(|&r| (1.0 / r, None)).collect(),
    };
    let (u_values, diagnostics) = points.into_iter().unzip();
    Ok(RadialProfile {
        r_values: r_grid.to_vec(),
        u_values,
        method,
        params,
        diagnostics,
    })
}
