//! Adaptive Gauss–Kronrod integration and a semi-infinite sine-transform
//! engine.
//!
//! [`integrate_sin`] evaluates `∫₀^∞ f(k) sin(kR) dk` by cutting the half line
//! at the zeros `k_n = nπ/R` of the sine. Consecutive panel contributions then
//! alternate in sign, and the sequence of partial sums is extrapolated by
//! repeated pairwise averaging (an Euler-type transform of the tail).

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Tolerances and panel configuration for the quadrature routines.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Cap on sine panels for [`integrate_sin`] and on subintervals for
    /// [`integrate_finite`].
    pub max_panels: usize,
    /// Number of averaging levels applied to the partial sums.
    pub accel_order: usize,
    /// Kronrod points per panel: 15 or 21.
    pub panel_rule_order: usize,
    /// Let callers insert panel boundaries around the Kohn point `q = 2`.
    pub kohn_refine: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_panels: 10_000,
            accel_order: 12,
            panel_rule_order: 15,
            kohn_refine: true,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "tolerances must be positive (rel {}, abs {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.accel_order < 2 || self.max_panels < self.accel_order {
            return Err(Error::ParameterDomain(format!(
                "need max_panels >= accel_order >= 2 (got {} and {})",
                self.max_panels, self.accel_order
            )));
        }
        KronrodRule::for_order(self.panel_rule_order).map(|_| ())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels_used: usize,
    pub accelerated: bool,
}

struct KronrodRule {
    xgk: &'static [f64],
    wgk: &'static [f64],
    wg: &'static [f64],
}

#[allow(clippy::excessive_precision)]
const XGK15: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK15: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// 7-point Gauss; the last weight belongs to the centre node.
#[allow(clippy::excessive_precision)]
const WG7: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[allow(clippy::excessive_precision)]
const XGK21: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK21: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208292238810,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
// 10-point Gauss; the centre is a Kronrod-only node.
#[allow(clippy::excessive_precision)]
const WG10: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

impl KronrodRule {
    fn for_order(order: usize) -> Result<Self> {
        match order {
            15 => Ok(KronrodRule {
                xgk: &XGK15,
                wgk: &WGK15,
                wg: &WG7,
            }),
            21 => Ok(KronrodRule {
                xgk: &XGK21,
                wgk: &WGK21,
                wg: &WG10,
            }),
            other => Err(Error::ParameterDomain(format!(
                "panel_rule_order must be 15 or 21, got {other}"
            ))),
        }
    }

    fn center_is_gauss(&self) -> bool {
        self.wg.len() * 2 == self.xgk.len()
    }

    /// One Gauss–Kronrod application on `[a, b]`, QUADPACK error heuristics.
    fn apply<F>(&self, f: &F, a: f64, b: f64) -> Result<Segment>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let n = self.xgk.len();
        let eval = |x: f64| -> Result<f64> {
            let v = f(x)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::IntegrandEvaluation { k: x })
            }
        };

        let fc = eval(center)?;
        let mut kronrod = fc * self.wgk[n - 1];
        let mut gauss = if self.center_is_gauss() {
            fc * self.wg[self.wg.len() - 1]
        } else {
            0.0
        };
        let mut res_abs = kronrod.abs();
        let mut values = [(0.0, 0.0); 10];
        for (j, slot) in values.iter_mut().enumerate().take(n - 1) {
            let dx = half * self.xgk[j];
            let f1 = eval(center - dx)?;
            let f2 = eval(center + dx)?;
            *slot = (f1, f2);
            kronrod += self.wgk[j] * (f1 + f2);
            res_abs += self.wgk[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                gauss += self.wg[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * kronrod;
        let mut res_asc = self.wgk[n - 1] * (fc - mean).abs();
        for (j, &(f1, f2)) in values.iter().enumerate().take(n - 1) {
            res_asc += self.wgk[j] * ((f1 - mean).abs() + (f2 - mean).abs());
        }

        let value = kronrod * half;
        res_abs *= half.abs();
        res_asc *= half.abs();
        let mut err = ((kronrod - gauss) * half).abs();
        if res_asc != 0.0 && err != 0.0 {
            err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
        }
        if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * res_abs);
        }
        Ok(Segment {
            a,
            b,
            value,
            error: err,
            abs_value: res_abs,
        })
    }
}

/// Single 21-point Kronrod sum on `[a, b]`, for integrands known to be
/// analytic well beyond the interval.
pub(crate) fn kronrod21<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let n = XGK21.len();
    let mut sum = WGK21[n - 1] * f(center);
    for j in 0..n - 1 {
        let dx = half * XGK21[j];
        sum += WGK21[j] * (f(center - dx) + f(center + dx));
    }
    sum * half
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

/// Neumaier-compensated running sum; the order of additions is fixed by the
/// caller so results are reproducible.
#[derive(Clone, Copy, Debug, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Adaptive integration of a fallible integrand over `[a, b]` with optional
/// interior breakpoints. Intervals with the largest error estimate are bisected
/// until the global estimate meets the tolerance.
pub fn try_integrate_finite<F>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Domain(format!(
            "integration bounds must satisfy a < b, got [{a}, {b}]"
        )));
    }
    let rule = KronrodRule::for_order(spec.panel_rule_order)?;
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > a && p < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut segments = Vec::with_capacity(cuts.len() + 1 + 64);
    let mut lo = a;
    for &hi in cuts.iter().chain(std::iter::once(&b)) {
        segments.push(rule.apply(&f, lo, hi)?);
        lo = hi;
    }

    loop {
        let (value, error) = totals(&segments);
        if error <= spec.tolerance(value) {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                panels_used: segments.len(),
                accelerated: false,
            });
        }
        // Only the rounding floor is left: further bisection cannot help.
        let floor: f64 = segments
            .iter()
            .map(|s| 50.0 * f64::EPSILON * s.abs_value)
            .sum();
        if error <= 2.0 * floor {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                panels_used: segments.len(),
                accelerated: false,
            });
        }
        if segments.len() >= spec.max_panels {
            return Err(Error::Convergence {
                context: format!("finite integral on [{a}, {b}]"),
                panels: segments.len(),
                residual: error,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| s.b - s.a > 8.0 * f64::EPSILON * s.a.abs().max(s.b.abs()))
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Err(Error::Convergence {
                context: format!("finite integral on [{a}, {b}] (intervals exhausted)"),
                panels: segments.len(),
                residual: error,
            });
        };
        let s = segments.swap_remove(i);
        let mid = 0.5 * (s.a + s.b);
        segments.push(rule.apply(&f, s.a, mid)?);
        segments.push(rule.apply(&f, mid, s.b)?);
        // Keep summation order independent of the refinement history.
        segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    }
}

fn totals(segments: &[Segment]) -> (f64, f64) {
    let mut value = CompensatedSum::default();
    let mut error = 0.0;
    for s in segments {
        value.add(s.value);
        error += s.error;
    }
    (value.value(), error)
}

/// Adaptive integration of `f` over `[a, b]`.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_finite(|x| Ok(f(x)), a, b, &[], spec)
}

/// Extra information for [`try_integrate_sin`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SinOptions {
    /// Value of `f(k) sin(kR)` at `k = 0`, used if a node ever lands exactly
    /// on the origin. Defaults to zero.
    pub endpoint_limit: Option<f64>,
    /// Interior points where `f` has sharp structure; panels straddling them
    /// are split there and extrapolation only starts beyond the last one.
    pub breakpoints: Vec<f64>,
}

/// `∫₀^∞ f(k) sin(kR) dk` for an infallible integrand.
pub fn integrate_sin<F>(f: F, r: f64, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    try_integrate_sin(|k| Ok(f(k)), r, spec, &SinOptions::default())
}

/// `∫₀^∞ f(k) sin(kR) dk` with panels `[nπ/R, (n+1)π/R]`.
///
/// The panel series is summed directly up to a start index, after which the
/// last `accel_order + 1` partial sums are averaged `accel_order` times. Panels
/// are added until two successive extrapolations agree to tolerance.
pub fn try_integrate_sin<F>(
    f: F,
    r: f64,
    spec: &QuadratureSpec,
    options: &SinOptions,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("R must be positive, got {r}")));
    }
    let endpoint = options.endpoint_limit.unwrap_or(0.0);
    let integrand = |k: f64| -> Result<f64> {
        if k == 0.0 {
            return Ok(endpoint);
        }
        let v = f(k)?;
        if !v.is_finite() {
            return Err(Error::IntegrandEvaluation { k });
        }
        Ok(v * (k * r).sin())
    };

    let boundary = |n: usize| n as f64 * PI / r;
    let order = spec.accel_order;
    let mut breaks: Vec<f64> = options
        .breakpoints
        .iter()
        .copied()
        .filter(|p| p.is_finite() && *p > 0.0)
        .collect();
    breaks.sort_by(f64::total_cmp);
    let last_break = breaks.last().copied().unwrap_or(0.0);
    let past_features = (last_break * r / PI).ceil() as usize + 2 * order;
    let start = (3 * order).max(30).max(past_features);
    if start + order >= spec.max_panels {
        return Err(Error::Convergence {
            context: format!("sine transform at R = {r}"),
            panels: spec.max_panels,
            residual: f64::INFINITY,
        });
    }

    // The transform is usually orders of magnitude smaller than the
    // individual panels, so panels are resolved well below the target.
    let panel_spec = QuadratureSpec {
        rel_tol: spec.rel_tol * 1e-4,
        abs_tol: spec.abs_tol * 1e-2,
        max_panels: 2_000,
        ..spec.clone()
    };

    let mut running = CompensatedSum::default();
    let mut partial = Vec::with_capacity(start + 4 * order);
    let mut panel_error = 0.0;
    let mut previous: Option<f64> = None;
    let mut residual = f64::INFINITY;
    // Panels resolved to rounding cannot do better; as in the finite
    // integrator, that floor is accepted in place of the target.
    let mut rounding_floor = 0.0;
    let mut n = 0;
    while n < spec.max_panels {
        let (lo, hi) = (boundary(n), boundary(n + 1));
        let inner: Vec<f64> = breaks
            .iter()
            .copied()
            .filter(|&p| p > lo && p < hi)
            .collect();
        let panel = try_integrate_finite(integrand, lo, hi, &inner, &panel_spec)?;
        running.add(panel.value);
        panel_error += panel.error_estimate;
        rounding_floor += 100.0 * f64::EPSILON * panel.value.abs();
        partial.push(running.value());
        n += 1;

        if n < start {
            continue;
        }
        let estimate = iterated_average(&partial[partial.len() - order - 1..]);
        if let Some(prev) = previous {
            let increment = (estimate - prev).abs();
            residual = increment + panel_error;
            let target = spec.tolerance(estimate);
            let settled = increment <= target || increment == 0.0;
            if settled && panel_error <= target.max(rounding_floor) {
                return Ok(QuadratureResult {
                    value: estimate,
                    error_estimate: increment + panel_error,
                    panels_used: n,
                    accelerated: true,
                });
            }
        }
        previous = Some(estimate);
    }
    Err(Error::Convergence {
        context: format!("sine transform at R = {r}"),
        panels: n,
        residual,
    })
}

/// Repeated pairwise averaging of consecutive partial sums down to one value.
fn iterated_average(sums: &[f64]) -> f64 {
    let mut level = sums.to_vec();
    while level.len() > 1 {
        for i in 0..level.len() - 1 {
            level[i] = 0.5 * (level[i] + level[i + 1]);
        }
        level.pop();
    }
    level[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_finite(|t| 1.0 - t * t, -1.0, 1.0, &spec()).unwrap();
        assert!((r.value - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.panels_used, 1);
    }

    #[test]
    fn lorentzian_matches_arctan() {
        let y = 0.1f64;
        let r = integrate_finite(|t| 1.0 / (t * t + y * y), -1.0, 1.0, &spec()).unwrap();
        let exact = 2.0 / y * (1.0 / y).atan();
        assert!((r.value - exact).abs() < 1e-9 * exact);
        assert!((exact - 29.42255).abs() < 1e-5);
    }

    #[test]
    fn interior_spike_refines() {
        let w = 1e-4;
        let f = |t: f64| w / ((t - 0.3).powi(2) + w * w);
        let exact = (0.7f64 / w).atan() + (1.3f64 / w).atan();
        let coarse = integrate_finite(f, -1.0, 1.0, &spec()).unwrap();
        let fine = integrate_finite(f, -1.0, 1.0, &spec().with_tolerances(5e-10, 1e-15)).unwrap();
        assert!(coarse.panels_used > 10);
        assert!((coarse.value - exact).abs() < 1e-8 * exact);
        assert!((fine.value - coarse.value).abs() <= coarse.error_estimate);
    }

    #[test]
    fn dirichlet_integral() {
        let r = integrate_sin(|k| 1.0 / k, 10.0, &spec()).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-9, "{r:?}");
        assert!(r.accelerated);
    }

    #[test]
    fn lorentzian_sine_transform() {
        let a = 3f64.sqrt();
        let r = integrate_sin(|k| k / (k * k + a * a), 2.0, &spec()).unwrap();
        let exact = PI / 2.0 * (-2.0 * a).exp();
        assert!((r.value - exact).abs() < 1e-9 * exact.max(1.0), "{r:?}");
        assert!((exact - 0.04917).abs() < 1e-5);
    }

    #[test]
    fn zero_integrand() {
        let r = integrate_sin(|_| 0.0, 3.0, &spec()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn nan_is_reported_with_location() {
        let err =
            integrate_sin(|k| if k > 1.0 { f64::NAN } else { 1.0 }, 1.0, &spec()).unwrap_err();
        match err {
            Error::IntegrandEvaluation { k } => assert!(k > 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        // Panel contributions grow by e^π each step; averaging cannot tame that.
        let tight = QuadratureSpec {
            max_panels: 100,
            ..spec()
        };
        let err = integrate_sin(|k| k.exp(), 1.0, &tight).unwrap_err();
        assert!(matches!(err, Error::Convergence { .. }), "{err:?}");
    }

    #[test]
    fn rejects_bad_spec() {
        let bad = QuadratureSpec {
            accel_order: 1,
            ..spec()
        };
        assert!(integrate_sin(|k| 1.0 / k, 1.0, &bad).is_err());
        let bad = QuadratureSpec {
            panel_rule_order: 9,
            ..spec()
        };
        assert!(integrate_finite(|t| t, 0.0, 1.0, &bad).is_err());
        assert!(integrate_finite(|t| t, 1.0, 0.0, &spec()).is_err());
        assert!(integrate_sin(|k| 1.0 / k, -1.0, &spec()).is_err());
    }

    #[test]
    fn gk21_agrees_with_gk15() {
        let s21 = QuadratureSpec {
            panel_rule_order: 21,
            ..spec()
        };
        let a = integrate_sin(|k| 1.0 / k, 5.0, &s21).unwrap();
        assert!((a.value - PI / 2.0).abs() < 1e-9);
        let b = integrate_finite(|t| t.exp(), 0.0, 1.0, &s21).unwrap();
        assert!((b.value - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn panel_boundaries_hit_sine_zeros() {
        for r in [0.5, 1.0, 7.3, 40.0] {
            for n in 0..200usize {
                let k = n as f64 * PI / r;
                assert!((k * r).sin().abs() <= 1e-12 * (n as f64 + 1.0));
            }
        }
    }

    #[test]
    fn averaging_accelerates_alternating_sums() {
        // Partial sums of ∫ sin(k)/k over [0, nπ] oscillate around π/2.
        let r = 1.0;
        let spec = spec();
        let mut sums = Vec::new();
        let mut acc = 0.0;
        for n in 0..60usize {
            let p = integrate_finite(
                |k| if k == 0.0 { 1.0 } else { (k * r).sin() / k },
                n as f64 * PI,
                (n + 1) as f64 * PI,
                &spec,
            )
            .unwrap();
            acc += p.value;
            sums.push(acc);
        }
        let target = PI / 2.0;
        let raw: Vec<f64> = sums.iter().map(|s| s - target).collect();
        assert!(raw.windows(2).all(|w| w[0].signum() != w[1].signum()));
        let errors: Vec<f64> = (30..48)
            .map(|n| (iterated_average(&sums[n - 12..=n]) - target).abs())
            .collect();
        assert!(errors[errors.len() - 1] < 1e-12);
        assert!(errors[0] < raw[30].abs() * 1e-6);
    }
}
