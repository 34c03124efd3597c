//! Extraction of Friedel-oscillation parameters from radial profiles.
//!
//! Fits act on `S(R) = R³ U(R)` with the model `B e^{−λR} cos(wR + φ)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::potential::RadialProfile;

pub const MIN_EXTREMA: usize = 4;
const MAX_ITERATIONS: usize = 200;
const STEP_TOLERANCE: f64 = 1e-10;

/// A local extremum of a sampled signal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremum {
    pub r: f64,
    pub value: f64,
}

/// Local extrema of `signal(r)` from sign changes of the discrete slope,
/// each refined by the parabola through the three surrounding samples.
pub fn find_extrema_in(r: &[f64], signal: &[f64]) -> Result<Vec<Extremum>> {
    if r.len() != signal.len() {
        return Err(Error::Domain("radius and signal lengths differ".into()));
    }
    let mut out = Vec::new();
    let mut last_slope = 0.0f64;
    let mut last_index = 0usize;
    for i in 0..r.len().saturating_sub(1) {
        let d = signal[i + 1] - signal[i];
        if d == 0.0 {
            continue;
        }
        if last_slope != 0.0 && d.signum() != last_slope.signum() {
            // The turning sample is the one where the slope flipped; on a
            // plateau this picks the plateau's left end.
            let j = if last_index + 1 == i {
                i
            } else {
                last_index + 1
            };
            out.push(refine(r, signal, j));
        }
        last_slope = d;
        last_index = i;
    }
    if out.len() < MIN_EXTREMA {
        return Err(Error::InsufficientData {
            found: out.len(),
            needed: MIN_EXTREMA,
        });
    }
    Ok(out)
}

fn refine(r: &[f64], s: &[f64], j: usize) -> Extremum {
    if j == 0 || j + 1 >= r.len() {
        return Extremum {
            r: r[j],
            value: s[j],
        };
    }
    let (x0, x1, x2) = (r[j - 1], r[j], r[j + 1]);
    let (y0, y1, y2) = (s[j - 1], s[j], s[j + 1]);
    // Newton divided differences of the interpolating parabola.
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if curvature == 0.0 {
        return Extremum { r: x1, value: y1 };
    }
    let vertex = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
    let vertex = vertex.clamp(x0, x2);
    let value = y0 + d01 * (vertex - x0) + curvature * (vertex - x0) * (vertex - x1);
    Extremum { r: vertex, value }
}

/// Extrema of `R³ U(R)` for a profile.
pub fn find_extrema(profile: &RadialProfile) -> Result<Vec<Extremum>> {
    find_extrema_in(&profile.r_values, &profile.r_cubed_values())
}

/// Least-squares line `y = a + b x`; returns `(a, b, r²)`.
fn linear_regression(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        0.0
    };
    (intercept, slope, r2)
}

/// Envelope regression `ln|extremum| = ln B − λR`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeFit {
    pub amplitude: f64,
    pub decay: f64,
    pub r_squared: f64,
}

pub fn envelope_fit(extrema: &[Extremum]) -> EnvelopeFit {
    let x: Vec<f64> = extrema.iter().map(|e| e.r).collect();
    let y: Vec<f64> = extrema.iter().map(|e| e.value.abs().ln()).collect();
    let (intercept, slope, r_squared) = linear_regression(&x, &y);
    EnvelopeFit {
        amplitude: intercept.exp(),
        decay: -slope,
        r_squared,
    }
}

/// Exponent `p` in `|extremum| ≈ C R^p e^{−λR}`, from a three-term
/// regression on `[1, R, ln R]`. Zero when the `1/R³` law has been fully
/// removed by the `R³` scaling.
pub fn envelope_power_exponent(profile: &RadialProfile) -> Result<f64> {
    let ext = find_extrema(profile)?;
    let n = ext.len();
    let design = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => 1.0,
        1 => ext[i].r,
        _ => ext[i].r.ln(),
    });
    let rhs = DVector::from_iterator(n, ext.iter().map(|e| e.value.abs().ln()));
    let coeffs = design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::Domain(format!("envelope regression failed: {e}")))?;
    Ok(coeffs[2])
}

/// Result of fitting `B e^{−λR} cos(wR + φ)` to `R³ U`.
#[derive(Clone, Debug, PartialEq)]
pub struct DampedCosineFit {
    pub amplitude: f64,
    pub decay: f64,
    pub wavenumber: f64,
    /// Phase in `(−π, π]`; positive means `cos(wR + φ)`.
    pub phase: f64,
    /// RMS residual relative to the RMS of the data.
    pub rms_residual: f64,
    pub n_extrema_used: usize,
    pub window: (f64, f64),
    /// Coefficient of determination of the initial envelope regression.
    pub envelope_r_squared: f64,
    /// One-sigma parameter uncertainties `(B, λ, w, φ)` from the residual
    /// variance and the Gauss–Newton normal matrix.
    pub uncertainties: [f64; 4],
    pub iterations: usize,
    /// Starting point handed to Gauss–Newton.
    pub initial: [f64; 4],
}

impl DampedCosineFit {
    /// The decay rate is only meaningful when the envelope is clearly
    /// exponential.
    pub fn decay_is_reliable(&self) -> bool {
        self.envelope_r_squared > 0.9
    }

    pub fn model(&self, r: f64) -> f64 {
        self.amplitude * (-self.decay * r).exp() * (self.wavenumber * r + self.phase).cos()
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn normalize_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// Fits the damped cosine on the whole profile.
pub fn fit_damped_cosine(profile: &RadialProfile) -> Result<DampedCosineFit> {
    fit_damped_cosine_in(&profile.r_values, &profile.r_cubed_values())
}

/// Fits on the part of the profile inside `[lo, hi]`.
pub fn fit_damped_cosine_window(
    profile: &RadialProfile,
    lo: f64,
    hi: f64,
) -> Result<DampedCosineFit> {
    fit_damped_cosine(&profile.restricted(lo, hi)?)
}

/// Fits `B e^{−λR} cos(wR + φ)` to samples `(r, signal)`.
///
/// Starting values come from the extrema: `λ` from the log-envelope slope,
/// `w` from the mean spacing, `φ` from the first extremum. Damped
/// Gauss–Newton then refines all four parameters, working internally about
/// the window centre to decouple `w` from `φ`.
pub fn fit_damped_cosine_in(r: &[f64], signal: &[f64]) -> Result<DampedCosineFit> {
    let extrema = find_extrema_in(r, signal)?;
    let env = envelope_fit(&extrema);
    let first = extrema[0];
    let last = extrema[extrema.len() - 1];
    let wavenumber = PI * (extrema.len() - 1) as f64 / (last.r - first.r);
    let decay = env.decay;
    // Extremum of e^{−λR} cos(θ) sits at θ = mπ − arctan(λ/w).
    let base = if first.value >= 0.0 { 0.0 } else { PI };
    let phase = normalize_phase(base - (decay / wavenumber).atan() - wavenumber * first.r);
    let initial = [env.amplitude, decay, wavenumber, phase];

    let centre = 0.5 * (r[0] + r[r.len() - 1]);
    let x: Vec<f64> = r.iter().map(|v| v - centre).collect();
    let to_internal = |p: [f64; 4]| -> Vector4<f64> {
        Vector4::new(
            p[0] * (-p[1] * centre).exp(),
            p[1],
            p[2],
            p[3] + p[2] * centre,
        )
    };
    let sse = |p: &Vector4<f64>| -> f64 {
        x.iter()
            .zip(signal)
            .map(|(&xi, &si)| {
                let m = p[0] * (-p[1] * xi).exp() * (p[2] * xi + p[3]).cos();
                (si - m) * (si - m)
            })
            .sum()
    };

    let mut p = to_internal(initial);
    let mut current = sse(&p);
    let mut alpha = 1.0f64;
    let mut converged = false;
    let mut iterations = 0;
    let mut normal = Matrix4::<f64>::zeros();
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        normal = Matrix4::zeros();
        let mut gradient = Vector4::zeros();
        for (&xi, &si) in x.iter().zip(signal) {
            let env = (-p[1] * xi).exp();
            let theta = p[2] * xi + p[3];
            let (s, c) = theta.sin_cos();
            let m = p[0] * env * c;
            let j = Vector4::new(env * c, -xi * m, -p[0] * env * s * xi, -p[0] * env * s);
            normal += j * j.transpose();
            gradient += j * (si - m);
        }
        let step = match normal.cholesky() {
            Some(ch) => ch.solve(&gradient),
            None => {
                let damped = normal
                    + Matrix4::from_diagonal(&normal.diagonal().map(|d| 1e-12 * d.max(1e-300)));
                match damped.cholesky() {
                    Some(ch) => ch.solve(&gradient),
                    None => break,
                }
            }
        };

        alpha = (2.0 * alpha).min(1.0);
        let mut accepted = None;
        for _ in 0..60 {
            let trial = p + step * alpha;
            let value = sse(&trial);
            if value.is_finite() && value <= current {
                accepted = Some((trial, value));
                break;
            }
            alpha *= 0.5;
        }
        let scales = [
            p[0].abs(),
            p[1].abs() + 1.0 / (r[r.len() - 1] - r[0]),
            p[2].abs(),
            p[3].abs() + 1.0,
        ];
        let relative_step = (0..4)
            .map(|i| (alpha * step[i]).abs() / scales[i])
            .fold(0.0, f64::max);
        match accepted {
            Some((trial, value)) => {
                p = trial;
                current = value;
                if relative_step < STEP_TOLERANCE {
                    converged = true;
                    break;
                }
            }
            None => {
                // No descent left along the Gauss–Newton direction.
                converged = (0..4).all(|i| step[i].abs() / scales[i] < 1e-6);
                break;
            }
        }
    }
    if !converged {
        return Err(Error::FitFailure {
            b: initial[0],
            lambda: initial[1],
            w: initial[2],
            phi: initial[3],
        });
    }

    let n = signal.len();
    let dof = n.saturating_sub(4).max(1) as f64;
    let sigma2 = current / dof;
    let internal_cov = normal.try_inverse().map(|inv| inv * sigma2);
    let amplitude_raw = p[0] * (p[1] * centre).exp();
    let uncertainties = match internal_cov {
        Some(cov) => {
            // d(B, λ, w, φ) / d(B_c, λ, w, ψ)
            let e = (p[1] * centre).exp();
            let t = Matrix4::new(
                e,
                p[0] * centre * e,
                0.0,
                0.0,
                0.0,
                1.0,
                0.0,
                0.0,
                0.0,
                0.0,
                1.0,
                0.0,
                0.0,
                0.0,
                -centre,
                1.0,
            );
            let out = t * cov * t.transpose();
            [
                out[(0, 0)].sqrt(),
                out[(1, 1)].sqrt(),
                out[(2, 2)].sqrt(),
                out[(3, 3)].sqrt(),
            ]
        }
        None => [f64::INFINITY; 4],
    };

    let (amplitude, phase_shift) = if amplitude_raw < 0.0 {
        (-amplitude_raw, PI)
    } else {
        (amplitude_raw, 0.0)
    };
    let phase = normalize_phase(p[3] - p[2] * centre + phase_shift);
    let data_power: f64 = signal.iter().map(|s| s * s).sum();
    Ok(DampedCosineFit {
        amplitude,
        decay: p[1],
        wavenumber: p[2],
        phase,
        rms_residual: (current / data_power).sqrt(),
        n_extrema_used: extrema.len(),
        window: (r[0], r[r.len() - 1]),
        envelope_r_squared: env.r_squared,
        uncertainties,
        iterations,
        initial,
    })
}

/// Differences between two profiles over their common window.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    /// `rms(S_a − S_b) / rms(S_b)` with `S = R³U`, `b` interpolated onto `a`.
    pub rms_relative: f64,
    /// `max|S_a − S_b| / max|S_b|`.
    pub max_relative: f64,
    /// Slope of `ln(envelope_b / envelope_a)` against `R`; `None` when either
    /// profile has too few extrema.
    pub envelope_log_slope: Option<f64>,
    pub window: (f64, f64),
    pub n_points: usize,
}

fn interpolate(r: &[f64], v: &[f64], at: f64) -> f64 {
    let i = r.partition_point(|&x| x < at);
    if i < r.len() && r[i] == at {
        return v[i];
    }
    if i == 0 {
        return v[0];
    }
    if i == r.len() {
        return v[r.len() - 1];
    }
    let t = (at - r[i - 1]) / (r[i] - r[i - 1]);
    v[i - 1] + t * (v[i] - v[i - 1])
}

/// Compares `a` against `b` on the overlap of their windows.
pub fn compare_profiles(a: &RadialProfile, b: &RadialProfile) -> Result<ComparisonReport> {
    let (a_lo, a_hi) = a.window();
    let (b_lo, b_hi) = b.window();
    let lo = a_lo.max(b_lo);
    let hi = a_hi.min(b_hi);
    if lo >= hi {
        return Err(Error::Domain(format!(
            "profiles do not overlap ([{a_lo}, {a_hi}] vs [{b_lo}, {b_hi}])"
        )));
    }
    let a_in = a.restricted(lo, hi)?;
    let b_in = b.restricted(lo, hi)?;
    let sa = a_in.r_cubed_values();
    let sb_full = b.r_cubed_values();
    let sb: Vec<f64> = a_in
        .r_values
        .iter()
        .map(|&r| interpolate(&b.r_values, &sb_full, r))
        .collect();

    let n = sa.len() as f64;
    let diff2: f64 = sa.iter().zip(&sb).map(|(x, y)| (x - y) * (x - y)).sum();
    let ref2: f64 = sb.iter().map(|y| y * y).sum();
    let max_diff = sa
        .iter()
        .zip(&sb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let max_ref = sb.iter().map(|y| y.abs()).fold(0.0, f64::max);
    let ratio = |num: f64, den: f64| if num == 0.0 { 0.0 } else { num / den };

    let envelope_log_slope = match (find_extrema(&a_in), find_extrema(&b_in)) {
        (Ok(ea), Ok(eb)) => Some(envelope_fit(&ea).decay - envelope_fit(&eb).decay),
        _ => None,
    };

    Ok(ComparisonReport {
        rms_relative: ratio((diff2 / n).sqrt(), (ref2 / n).sqrt()),
        max_relative: ratio(max_diff, max_ref),
        envelope_log_slope,
        window: (lo, hi),
        n_points: sa.len(),
    })
}
