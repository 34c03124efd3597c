//! Static (ω = 0) longitudinal permittivity of a degenerate collisional
//! electron gas.
//!
//! Two equivalent representations are provided. The closed form
//!
//! ```text
//! ε(q) = 1 + (3x_p² / 2q²) · (1 − g₊(q) + g₋(q)) / (1 − i y g₀(q))
//! ```
//!
//! built from complex logarithms, and a manifestly real form with a single
//! integral over `t ∈ [−1, 1]`:
//!
//! ```text
//! ε(q) = 1 + (3x_p²/4) · ∫ (1−t²)(q⁴/4 + y² − q²t²) / [(q⁴/4 + y² − q²t²)² + 4q²y²t²] dt
//!                        / (1 − (y/q) arctan(q/y))
//! ```
//!
//! All logarithms take the principal branch. For `y > 0` no log argument is a
//! negative real, so `g₋ = −conj(g₊)` holds bit for bit and the bracket
//! `1 − g₊ + g₋ = 1 − 2 Re g₊` is exactly real.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oscillatory::{kronrod21, try_integrate_finite, QuadratureSpec};

/// Relative size of `Im ε` tolerated before the closed form is rejected.
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-10;

/// Half-width of the window around `q = 2` where the Lindhard model returns
/// its continuous limit instead of the `0 · ∞` formula.
pub const LINDHARD_KOHN_EXCLUSION: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    ClosedForm,
    RealIntegral,
    Lindhard,
}

impl Representation {
    pub fn as_str(self) -> &'static str {
        match self {
            Representation::ClosedForm => "closed",
            Representation::RealIntegral => "quadrature",
            Representation::Lindhard => "lindhard",
        }
    }
}

impl std::str::FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" | "closed-form" => Ok(Representation::ClosedForm),
            "quadrature" | "real-integral" => Ok(Representation::RealIntegral),
            "lindhard" => Ok(Representation::Lindhard),
            other => Err(Error::Domain(format!("unknown representation `{other}`"))),
        }
    }
}

/// Permittivity at one wavenumber, with the intermediate `g` functions when
/// the closed form was used.
#[derive(Clone, Debug, PartialEq)]
pub struct PermittivitySample {
    pub q: f64,
    pub eps: Complex64,
    pub g0: Option<Complex64>,
    pub g_plus: Option<Complex64>,
    pub g_minus: Option<Complex64>,
    pub representation: Representation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

fn check_y(y: f64) -> Result<()> {
    if y.is_finite() && y > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "collision parameter must be positive here (y = {y}); use the Lindhard path for y = 0"
        )))
    }
}

fn check_q(q: f64) -> Result<()> {
    if q.is_finite() && q > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "wavenumber must be positive, got q = {q}"
        )))
    }
}

fn check_x_p(x_p: f64) -> Result<()> {
    if x_p.is_finite() && x_p >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "x_p must be non-negative, got {x_p}"
        )))
    }
}

/// `g₀(q) = ln((iy + q)/(iy − q)) / 2q`, evaluated as `−(i/q) arctan(q/y)`.
///
/// The ratio has unit modulus, so the principal log is purely imaginary;
/// the arctan form keeps it so in floating point. At `q = 0` the limit
/// `−i/y` is returned. The function is even in `q`.
pub fn g0(q: f64, y: f64) -> Result<Complex64> {
    check_y(y)?;
    if !q.is_finite() {
        return Err(Error::Domain(format!("non-finite wavenumber {q}")));
    }
    if q == 0.0 {
        return Ok(Complex64::new(0.0, -1.0 / y));
    }
    Ok(Complex64::new(0.0, -(q / y).atan() / q))
}

/// `g₊` (sign = Plus) or `g₋` (sign = Minus):
///
/// ```text
/// g₊ = [(q² + 2iy)² − 4q²] ln((q² + 2q + 2iy)/(q² − 2q + 2iy)) / 8q³
/// g₋ = [(q² − 2iy)² − 4q²] ln((q² − 2q − 2iy)/(q² + 2q − 2iy)) / 8q³
/// ```
///
/// The log of each ratio is taken as a difference of logs. Both arguments
/// share the sign of their imaginary part, so the difference stays within
/// the principal strip. At `y = 0` the result is the `y → 0⁺` limit.
pub fn g_pm(q: f64, y: f64, sign: Sign) -> Result<Complex64> {
    if !(y.is_finite() && y >= 0.0) {
        return Err(Error::Domain(format!(
            "collision parameter must be non-negative, got {y}"
        )));
    }
    if !(q.is_finite() && q != 0.0) {
        return Err(Error::Domain(format!(
            "wavenumber must be non-zero, got q = {q}"
        )));
    }
    if y == 0.0 && q.abs() == 2.0 {
        return Err(Error::Domain(
            "log argument on the branch point (q = 2, y = 0)".into(),
        ));
    }
    let q2 = q * q;
    let iy2 = match sign {
        Sign::Plus => Complex64::new(0.0, 2.0 * y),
        Sign::Minus => Complex64::new(0.0, -2.0 * y),
    };
    let shifted = iy2 + q2;
    let prefactor = shifted * shifted - 4.0 * q2;
    let (num, den) = match sign {
        Sign::Plus => (shifted + 2.0 * q, shifted - 2.0 * q),
        Sign::Minus => (shifted - 2.0 * q, shifted + 2.0 * q),
    };
    let log = num.ln() - den.ln();
    Ok(prefactor * log / (8.0 * q2 * q))
}

pub fn g_plus(q: f64, y: f64) -> Result<Complex64> {
    g_pm(q, y, Sign::Plus)
}

pub fn g_minus(q: f64, y: f64) -> Result<Complex64> {
    g_pm(q, y, Sign::Minus)
}

/// Closed-form permittivity with all intermediate values.
pub fn sample_closed(q: f64, x_p: f64, y: f64) -> Result<PermittivitySample> {
    check_q(q)?;
    check_x_p(x_p)?;
    check_y(y)?;
    let g0v = g0(q, y)?;
    let gp = g_plus(q, y)?;
    let gm = g_minus(q, y)?;
    let bracket = 1.0 - gp + gm;
    // 1 − i y g₀ = 1 − (y/q) arctan(q/y), real and cancellation-prone at small q/y.
    let denominator = one_minus_arctan_ratio(q.abs() / y);
    let eps = 1.0 + 1.5 * x_p * x_p / (q * q) * bracket / denominator;
    Ok(PermittivitySample {
        q,
        eps,
        g0: Some(g0v),
        g_plus: Some(gp),
        g_minus: Some(gm),
        representation: Representation::ClosedForm,
    })
}

/// Below `q = y · SMALL_Q_RATIO` the closed form is evaluated through the
/// equivalent real integral.
pub const SMALL_Q_RATIO: f64 = 0.125;

/// Real part of the closed-form permittivity; errors if the imaginary
/// residue exceeds [`IMAGINARY_RESIDUE_LIMIT`] relative.
///
/// For `q ≪ y` the bracket `1 − g₊ + g₋` is a difference of quantities of
/// size `y/q²` and loses about `2 log₁₀(y/q)` digits. There the real-integral
/// form is used instead: its integrand has poles a distance `≈ y/q` from
/// `[−1, 1]`, so one 21-point Kronrod sum is exact to rounding.
pub fn epsilon_closed(q: f64, x_p: f64, y: f64) -> Result<f64> {
    check_q(q)?;
    check_x_p(x_p)?;
    check_y(y)?;
    if q < SMALL_Q_RATIO * y {
        return Ok(epsilon_small_q(q, x_p, y));
    }
    let sample = sample_closed(q, x_p, y)?;
    let eps = sample.eps;
    if !eps.re.is_finite() || eps.im.abs() > IMAGINARY_RESIDUE_LIMIT * eps.norm() {
        return Err(Error::NumericalConsistency {
            q,
            real: eps.re,
            imag: eps.im,
        });
    }
    Ok(eps.re)
}

fn epsilon_small_q(q: f64, x_p: f64, y: f64) -> f64 {
    let q2 = q * q;
    let shift = 0.25 * q2 * q2 + y * y;
    // Even integrand: twice the integral over [0, 1].
    let n = 2.0
        * kronrod21(
            |t| {
                let s = shift - q2 * t * t;
                (1.0 - t * t) * s / (s * s + 4.0 * q2 * y * y * t * t)
            },
            0.0,
            1.0,
        );
    1.0 + 0.75 * x_p * x_p * n / one_minus_arctan_ratio(q / y)
}

/// `1 − (a⁻¹) arctan a`, accurate for small `a`.
fn one_minus_arctan_ratio(a: f64) -> f64 {
    if a < 1e-2 {
        let a2 = a * a;
        a2 * (1.0 / 3.0 - a2 * (1.0 / 5.0 - a2 * (1.0 / 7.0 - a2 / 9.0)))
    } else {
        1.0 - a.atan() / a
    }
}

/// Default t-quadrature settings for [`epsilon_quadrature`].
pub fn quadrature_defaults() -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-12,
        max_panels: 4_000,
        ..QuadratureSpec::default()
    }
}

/// Real-integral permittivity with default quadrature settings.
pub fn epsilon_quadrature(q: f64, x_p: f64, y: f64) -> Result<f64> {
    epsilon_quadrature_with(q, x_p, y, &quadrature_defaults())
}

/// Real-integral permittivity. The numerator factor is `q⁴/4 + y² − q²t²`,
/// which is what multiplying `1/((iqt + y)² + q⁴/4)` by its conjugate gives.
/// Panels are forced at the near-zero of the denominator,
/// `t₀ = √(q²/4 + y²/q²)`, and a few collision widths either side of it.
pub fn epsilon_quadrature_with(q: f64, x_p: f64, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_q(q)?;
    check_x_p(x_p)?;
    check_y(y)?;
    if x_p == 0.0 {
        return Ok(1.0);
    }
    let q2 = q * q;
    let shift = 0.25 * q2 * q2 + y * y;
    let numerator = |t: f64| -> Result<f64> {
        let s = shift - q2 * t * t;
        Ok((1.0 - t * t) * s / (s * s + 4.0 * q2 * y * y * t * t))
    };

    let t0 = (0.25 * q2 + y * y / q2).sqrt();
    let width = y / q;
    let mut points = Vec::new();
    for c in [t0, -t0] {
        for off in [-8.0, -2.0, -0.5, 0.0, 0.5, 2.0, 8.0] {
            let p = c + off * width;
            if p > -1.0 && p < 1.0 {
                points.push(p);
            }
        }
    }
    let integral =
        try_integrate_finite(numerator, -1.0, 1.0, &points, spec).map_err(|e| match e {
            Error::Convergence {
                panels, residual, ..
            } => Error::Convergence {
                context: format!("real-integral permittivity at q = {q}, y = {y}"),
                panels,
                residual,
            },
            other => other,
        })?;
    let denominator = one_minus_arctan_ratio(q / y);
    Ok(1.0 + 0.75 * x_p * x_p * integral.value / denominator)
}

/// Collisionless (Lindhard) static permittivity
/// `1 + (3x_p²/2q²)(1 + ((4 − q²)/4q) ln|(2 + q)/(2 − q)|)`.
pub fn lindhard_static(q: f64, x_p: f64) -> Result<f64> {
    check_q(q)?;
    check_x_p(x_p)?;
    if q == 2.0 {
        return Err(Error::SingularPoint { q });
    }
    let bracket = 1.0 + (4.0 - q * q) / (4.0 * q) * ((2.0 + q) / (2.0 - q)).abs().ln();
    Ok(1.0 + 1.5 * x_p * x_p / (q * q) * bracket)
}

/// Permittivity models understood by the potential solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PermittivityModel {
    /// `ε ≡ 1`.
    Vacuum,
    /// `ε = 1 + 3x_p²/q²`, the long-wavelength limit.
    ThomasFermi { x_p: f64 },
    /// Collisionless limit; continuous through `q = 2`.
    Lindhard { x_p: f64 },
    /// Closed-form collisional permittivity.
    Collisional { x_p: f64, y: f64 },
}

impl PermittivityModel {
    /// Picks the model matching `(x_p, y)`: vacuum for `x_p = 0`, Lindhard
    /// for `y = 0`, collisional otherwise.
    pub fn from_parameters(x_p: f64, y: f64) -> Result<Self> {
        check_x_p(x_p)?;
        if !(y.is_finite() && y >= 0.0) {
            return Err(Error::Domain(format!("y must be non-negative, got {y}")));
        }
        Ok(if x_p == 0.0 {
            PermittivityModel::Vacuum
        } else if y == 0.0 {
            PermittivityModel::Lindhard { x_p }
        } else {
            PermittivityModel::Collisional { x_p, y }
        })
    }

    pub fn eval(&self, q: f64) -> Result<f64> {
        match *self {
            PermittivityModel::Vacuum => Ok(1.0),
            PermittivityModel::ThomasFermi { x_p } => Ok(1.0 + 3.0 * x_p * x_p / (q * q)),
            PermittivityModel::Lindhard { x_p } => {
                if (q - 2.0).abs() < LINDHARD_KOHN_EXCLUSION {
                    Ok(1.0 + 0.375 * x_p * x_p)
                } else {
                    lindhard_static(q, x_p)
                }
            }
            PermittivityModel::Collisional { x_p, y } => epsilon_closed(q, x_p, y),
        }
    }

    /// `lim_{q→0} 1/(q ε(q))`: infinite for vacuum, zero when screened.
    pub fn is_screened(&self) -> bool {
        match *self {
            PermittivityModel::Vacuum => false,
            PermittivityModel::ThomasFermi { x_p }
            | PermittivityModel::Lindhard { x_p }
            | PermittivityModel::Collisional { x_p, .. } => x_p > 0.0,
        }
    }

    /// Panel boundaries around the Kohn point, when the model has one.
    pub fn kohn_breakpoints(&self) -> Vec<f64> {
        match *self {
            PermittivityModel::Lindhard { .. } => vec![2.0],
            PermittivityModel::Collisional { y, .. } => {
                let w = 5.0 * y;
                [2.0 - w, 2.0, 2.0 + w]
                    .into_iter()
                    .filter(|&p| p > 0.0)
                    .collect()
            }
            _ => Vec::new(),
        }
    }
}

/// Finite-difference picture of `ε″(q)` near the Kohn point.
#[derive(Clone, Debug, PartialEq)]
pub struct KohnDiagnostic {
    pub q_grid: Vec<f64>,
    pub second_derivative: Vec<f64>,
    pub peak_location: f64,
    /// Full width at half maximum of the `|ε″|` lobe containing the peak.
    pub peak_width: f64,
    pub peak_magnitude: f64,
}

/// Scans `ε″` by central differences of [`epsilon_closed`] on `window` with
/// spacing `step`.
pub fn kohn_diagnostic(x_p: f64, y: f64, window: (f64, f64), step: f64) -> Result<KohnDiagnostic> {
    check_y(y)?;
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < 2.0 && hi > 2.0 && hi.is_finite()) {
        return Err(Error::Domain(format!(
            "window [{lo}, {hi}] must contain q = 2 and stay positive"
        )));
    }
    if !(step > 0.0 && step < y / 5.0) {
        return Err(Error::Resolution { step, y });
    }
    let n = ((hi - lo) / step).floor() as usize;
    if n < 4 {
        return Err(Error::Resolution { step, y });
    }
    let grid: Vec<f64> = (0..=n).map(|i| lo + i as f64 * step).collect();
    let eps = grid
        .iter()
        .map(|&q| epsilon_closed(q, x_p, y))
        .collect::<Result<Vec<_>>>()?;
    let h2 = step * step;
    let second: Vec<f64> = eps
        .windows(3)
        .map(|w| (w[0] - 2.0 * w[1] + w[2]) / h2)
        .collect();
    let q_grid = grid[1..n].to_vec();

    let mag: Vec<f64> = second.iter().map(|v| v.abs()).collect();
    let imax = mag
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty grid");

    let mut peak_location = q_grid[imax];
    let mut peak_magnitude = mag[imax];
    if imax > 0 && imax + 1 < mag.len() {
        let (a, b, c) = (mag[imax - 1], mag[imax], mag[imax + 1]);
        let denom = a - 2.0 * b + c;
        if denom < 0.0 {
            let offset = 0.5 * (a - c) / denom;
            peak_location += offset * step;
            peak_magnitude = b - 0.25 * (a - c) * offset;
        }
    }

    let half = 0.5 * mag[imax];
    let crossing = |inside: usize, outside: usize| -> f64 {
        let (a, b) = (mag[inside], mag[outside]);
        let t = (a - half) / (a - b);
        q_grid[inside] + t * (q_grid[outside] - q_grid[inside])
    };
    let mut left = imax;
    while left > 0 && mag[left - 1] >= half {
        left -= 1;
    }
    let left_q = if left > 0 {
        crossing(left, left - 1)
    } else {
        q_grid[0]
    };
    let mut right = imax;
    while right + 1 < mag.len() && mag[right + 1] >= half {
        right += 1;
    }
    let right_q = if right + 1 < mag.len() {
        crossing(right, right + 1)
    } else {
        q_grid[q_grid.len() - 1]
    };

    Ok(KohnDiagnostic {
        q_grid,
        second_derivative: second,
        peak_location,
        peak_width: right_q - left_q,
        peak_magnitude,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `g₀(q) = −(i/q) arctan(q/y)`, an algebraic rewrite of the log form.
    fn g0_arctan(q: f64, y: f64) -> f64 {
        -(q / y).atan() / q
    }

    fn lindhard_reference(q: f64, x_p: f64) -> f64 {
        1.0 + 1.5 * x_p * x_p / (q * q)
            * (1.0 + (4.0 - q * q) / (4.0 * q) * ((2.0 + q) / (2.0 - q)).abs().ln())
    }

    #[test]
    fn g0_small_q_limit() {
        let v = g0(0.0, 0.1).unwrap();
        assert_eq!(v, Complex64::new(0.0, -10.0));
        let near = g0(1e-7, 0.1).unwrap();
        assert!((near.im + 10.0).abs() < 1e-9);
    }

    #[test]
    fn g0_matches_arctan_form() {
        let v = g0(1.0, 0.01).unwrap();
        assert!(v.re.abs() < 1e-15);
        assert!((v.im - g0_arctan(1.0, 0.01)).abs() < 1e-14);
        assert!((v.im + 1.560797).abs() < 1e-6);
        for &(q, y) in &[(0.05, 0.3), (2.0, 0.001), (7.5, 0.2)] {
            let v = g0(q, y).unwrap();
            assert!(v.im < 0.0);
            assert!((v.im - g0_arctan(q, y)).abs() < 1e-13 * v.im.abs());
        }
    }

    #[test]
    fn g0_even_and_needs_collisions() {
        let a = g0(0.7, 0.2).unwrap();
        let b = g0(-0.7, 0.2).unwrap();
        assert!((a - b).norm() < 1e-15);
        assert!(matches!(g0(1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn g_plus_collisionless_limit() {
        let gp = g_plus(1.0, 1e-12).unwrap();
        assert!((gp.re + 0.375 * 3f64.ln()).abs() < 1e-10);
        assert!((gp.re + 0.411980).abs() < 1e-6);
        let gm = g_minus(1.0, 1e-12).unwrap();
        let bracket = 1.0 - gp + gm;
        assert!(bracket.im.abs() < 1e-15);
        // Lindhard bracket at q = 1: 1 + (3/4) ln 3.
        assert!((bracket.re - (1.0 + 0.75 * 3f64.ln())).abs() < 1e-10);
        // y = 0 exactly is the y → 0⁺ limit.
        let exact0 = g_plus(1.0, 0.0).unwrap();
        assert!((exact0 - gp).norm() < 1e-10);
    }

    #[test]
    fn g_minus_is_negated_conjugate() {
        let gp = g_plus(1.3, 0.07).unwrap();
        let gm = g_minus(1.3, 0.07).unwrap();
        assert_eq!(gm, -gp.conj());
    }

    #[test]
    fn g_pm_branch_point() {
        assert!(matches!(g_plus(2.0, 0.0), Err(Error::Domain(_))));
        let at_kohn = g_plus(2.0, 0.05).unwrap();
        assert!(at_kohn.re.is_finite() && at_kohn.im.is_finite());
        let closed = epsilon_closed(2.0, 1.0, 0.05).unwrap();
        let real = epsilon_quadrature(2.0, 1.0, 0.05).unwrap();
        assert!((closed - real).abs() < 1e-10 * real);
    }

    #[test]
    fn closed_form_examples() {
        assert!((epsilon_closed(100.0, 1.0, 0.01).unwrap() - 1.0).abs() < 1e-3);
        let e1 = epsilon_closed(1.0, 1.0, 1e-8).unwrap();
        assert!((e1 - 3.7359388).abs() < 1e-6, "{e1}");
        let e2 = epsilon_closed(2.0, 1.0, 1e-8).unwrap();
        assert!((e2 - 1.375).abs() < 1e-6);
        assert!((16.0 * e2 * e2 - 30.25).abs() < 1e-4);
    }

    #[test]
    fn closed_form_rejects_bad_input() {
        assert!(epsilon_closed(0.0, 1.0, 0.1).is_err());
        assert!(epsilon_closed(1.0, -1.0, 0.1).is_err());
        assert!(epsilon_closed(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn representations_agree() {
        let a = epsilon_closed(1.0, 1.0, 0.1).unwrap();
        let b = epsilon_quadrature(1.0, 1.0, 0.1).unwrap();
        assert!((a - b).abs() < 1e-8 * a);
    }

    #[test]
    fn printed_third_factor_disagrees() {
        // Same integral with q⁴/3 in the numerator: wrong at O(1).
        let (q, x_p, y) = (1.0f64, 1.0f64, 0.01f64);
        let q2 = q * q;
        let spec = quadrature_defaults();
        let n = try_integrate_finite(
            |t| {
                let s = q2 * q2 / 4.0 + y * y - q2 * t * t;
                let s3 = q2 * q2 / 3.0 + y * y - q2 * t * t;
                Ok((1.0 - t * t) * s3 / (s * s + 4.0 * q2 * y * y * t * t))
            },
            -1.0,
            1.0,
            &[(0.25f64 + 1e-4).sqrt() * q],
            &spec,
        )
        .unwrap();
        let eps3 = 1.0 + 0.75 * x_p * x_p * n.value / (1.0 - (y / q) * (q / y).atan());
        let eps = epsilon_closed(q, x_p, y).unwrap();
        assert!((eps3 - eps).abs() > 0.5);
    }

    #[test]
    fn small_q_branch_is_continuous() {
        for y in [0.01, 0.05, 0.1] {
            let edge = SMALL_Q_RATIO * y;
            let below = epsilon_closed(edge * (1.0 - 1e-12), 1.0, y).unwrap();
            let above = sample_closed(edge, 1.0, y).unwrap().eps.re;
            assert!((below / above - 1.0).abs() < 1e-9, "{below} vs {above}");
            for q in [1e-5, 1e-4, 0.3 * edge] {
                let fast = epsilon_closed(q, 1.0, y).unwrap();
                let slow = epsilon_quadrature(q, 1.0, y).unwrap();
                assert!((fast / slow - 1.0).abs() < 1e-12, "{q}: {fast} vs {slow}");
            }
        }
    }

    #[test]
    fn screening_sum_small_q() {
        for y in [0.001, 0.01, 0.05, 0.1] {
            for x_p in [0.5, 1.0, 2.0] {
                let q = 1e-3;
                let target = 3.0 * x_p * x_p;
                let closed = q * q * (epsilon_closed(q, x_p, y).unwrap() - 1.0);
                let real = q * q * (epsilon_quadrature(q, x_p, y).unwrap() - 1.0);
                assert!(
                    (closed - target).abs() < 0.01 * target,
                    "{closed} vs {target}"
                );
                assert!((real - target).abs() < 0.01 * target, "{real} vs {target}");
            }
        }
    }

    #[test]
    fn vacuum_when_unscreened() {
        for q in [0.1, 1.0, 2.0, 5.0] {
            assert_eq!(epsilon_quadrature(q, 0.0, 0.1).unwrap(), 1.0);
            assert_eq!(epsilon_closed(q, 0.0, 0.1).unwrap(), 1.0);
        }
    }

    #[test]
    fn lindhard_values() {
        let v = lindhard_static(1.0, 1.0).unwrap();
        assert!((v - (1.0 + 1.5 * (1.0 + 0.75 * 3f64.ln()))).abs() < 1e-14);
        assert!((v - 3.7359388).abs() < 1e-6);
        assert_eq!(
            lindhard_static(2.0, 1.0),
            Err(Error::SingularPoint { q: 2.0 })
        );
        let q = 1e-4;
        assert!((q * q * (lindhard_static(q, 1.3).unwrap() - 1.0) - 3.0 * 1.69).abs() < 1e-6);
    }

    #[test]
    fn lindhard_derivative_diverges_logarithmically() {
        // ε is finite at q = 2 but its slope grows like (3/16) ln|2 − q|.
        let slope = |d: f64| {
            let h = d / 10.0;
            (lindhard_static(2.0 - d + h, 1.0).unwrap()
                - lindhard_static(2.0 - d - h, 1.0).unwrap())
                / (2.0 * h)
        };
        let (s1, s2) = (slope(1e-4), slope(1e-6));
        let expected = 3.0 / 16.0 * 1e-2f64.ln();
        assert!(
            (s2 - s1 - expected).abs() < 1e-3,
            "{} vs {expected}",
            s2 - s1
        );
        let near = lindhard_static(2.0 + 1e-6, 1.0).unwrap();
        assert!((near - 1.375).abs() < 1e-4);
    }

    #[test]
    fn kohn_peak_location_and_width() {
        let d = kohn_diagnostic(1.0, 0.01, (1.8, 2.2), 1e-3).unwrap();
        assert!((d.peak_location - 2.0).abs() <= 0.02, "{}", d.peak_location);
        let refined = kohn_diagnostic(1.0, 0.01, (1.8, 2.2), 5e-4).unwrap();
        assert!((refined.peak_location - d.peak_location).abs() < 2e-3);

        let d2 = kohn_diagnostic(1.0, 0.02, (1.8, 2.2), 1e-3).unwrap();
        let ratio = d2.peak_width / d.peak_width;
        assert!((1.5..=2.5).contains(&ratio), "{ratio}");

        let wide = kohn_diagnostic(1.0, 0.1, (1.8, 2.2), 1e-3).unwrap();
        assert!(wide.peak_magnitude < d.peak_magnitude);
        for (diag, y) in [(&d, 0.01), (&d2, 0.02), (&wide, 0.1)] {
            assert!((diag.peak_location - 2.0).abs() <= 5.0 * y);
        }
    }

    #[test]
    fn kohn_resolution_guard() {
        assert_eq!(
            kohn_diagnostic(1.0, 0.01, (1.8, 2.2), 0.005),
            Err(Error::Resolution {
                step: 0.005,
                y: 0.01
            })
        );
        assert!(kohn_diagnostic(1.0, 0.01, (2.1, 2.2), 1e-3).is_err());
    }

    #[test]
    fn large_q_decay() {
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let q = 4.0 + 0.5 * i as f64;
            let e = epsilon_closed(q, 1.0, 0.05).unwrap();
            assert!(e > 1.0 && e < prev);
            assert!(q * q * (e - 1.0) < 3.0);
            prev = e;
        }
    }

    #[test]
    fn model_dispatch() {
        assert_eq!(
            PermittivityModel::from_parameters(0.0, 0.1).unwrap(),
            PermittivityModel::Vacuum
        );
        assert_eq!(
            PermittivityModel::from_parameters(1.0, 0.0).unwrap(),
            PermittivityModel::Lindhard { x_p: 1.0 }
        );
        let lind = PermittivityModel::Lindhard { x_p: 1.0 };
        assert_eq!(lind.eval(2.0).unwrap(), 1.375);
        assert!(!PermittivityModel::Vacuum.is_screened());
        assert_eq!(
            PermittivityModel::Collisional { x_p: 1.0, y: 0.01 }.kohn_breakpoints(),
            vec![1.95, 2.0, 2.05]
        );
    }

    proptest! {
        #[test]
        fn closed_form_is_real(
            lq in (0.05f64).ln()..(10.0f64).ln(),
            ly in (1e-3f64).ln()..(0.5f64).ln(),
            x_p in 0.3f64..3.0,
        ) {
            let s = sample_closed(lq.exp(), x_p, ly.exp()).unwrap();
            prop_assert!(s.eps.im.abs() < 1e-10 * s.eps.norm());
        }

        #[test]
        fn conjugate_symmetry_exact(q in 0.01f64..20.0, y in 1e-6f64..2.0) {
            let gp = g_plus(q, y).unwrap();
            let gm = g_minus(q, y).unwrap();
            prop_assert_eq!(gm, -gp.conj());
        }

        #[test]
        fn collisionless_limit(q in 0.05f64..8.0, x_p in 0.3f64..3.0) {
            prop_assume!((q - 2.0).abs() > 1e-2);
            let a = epsilon_closed(q, x_p, 1e-8).unwrap();
            let b = lindhard_reference(q, x_p);
            prop_assert!((a - b).abs() < 1e-6 * b);
        }
    }
}
