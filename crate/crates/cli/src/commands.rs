//! Subcommand implementations. Each returns the one-line summary printed
//! on success.

use std::path::{Path, PathBuf};

use friedel_core::analysis::{compare_profiles, fit_damped_cosine};
use friedel_core::dielectric::{
    epsilon_closed, epsilon_quadrature, g0, lindhard_static, PermittivitySample,
};
use friedel_core::potential::{amplitude_a, profile, uniform_grid};
use friedel_core::{
    ComparisonReport, Complex64, DampedCosineFit, Method, ProfileParams, QuadratureSpec,
    RadialProfile, Representation,
};
use serde::Serialize;

use crate::args::{
    Cli, Command, CompareArgs, EpsArgs, FigureArgs, FitArgs, PotentialArgs, QuadratureArgs,
};
use crate::config::ConfigFile;
use crate::figures::FigureSpec;
use crate::svg::{emit_svg, Curve, SvgStyle};
use crate::table;
use crate::CliError;

pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match &cli.command {
        Command::Eps(a) => eps(a, &config),
        Command::Potential(a) => potential(a, &config),
        Command::Fit(a) => fit(a, &config),
        Command::Compare(a) => compare(a, &config),
        Command::Figures(a) => figures(a, &config),
    }
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn output_path(flag: Option<&PathBuf>, config: &ConfigFile) -> Result<PathBuf, CliError> {
    required(config.pick(flag.cloned(), "output")?, "output")
}

fn quadrature_spec(args: &QuadratureArgs, config: &ConfigFile) -> Result<QuadratureSpec, CliError> {
    let mut spec = QuadratureSpec::default();
    if let Some(rel) = config.pick(args.rel_tol, "rel_tol")? {
        spec.rel_tol = rel;
    }
    if let Some(panels) = config.pick(args.max_panels, "max_panels")? {
        spec.max_panels = panels;
    }
    spec.validate()?;
    Ok(spec)
}

const EPS_KEYS: &[&str] = &["xp", "y", "qmin", "qmax", "points", "rep", "output"];

fn eps(args: &EpsArgs, config: &ConfigFile) -> Result<String, CliError> {
    config.check_keys(EPS_KEYS)?;
    let rep: Representation = config
        .pick(args.rep.clone(), "rep")?
        .unwrap_or_else(|| "closed".into())
        .parse()?;
    let x_p: f64 = required(config.pick(args.xp, "xp")?, "xp")?;
    let y: Option<f64> = config.pick(args.y, "y")?;
    let q_min: f64 = required(config.pick(args.qmin, "qmin")?, "qmin")?;
    let q_max: f64 = required(config.pick(args.qmax, "qmax")?, "qmax")?;
    let points: usize = config.pick(args.points, "points")?.unwrap_or(200);
    let out = output_path(args.output.as_ref(), config)?;
    let grid = uniform_grid(q_min, q_max, points)?;

    let samples = grid
        .iter()
        .map(|&q| -> Result<PermittivitySample, CliError> {
            let (eps, g0v) = match rep {
                Representation::Lindhard => (lindhard_static(q, x_p)?, None),
                Representation::ClosedForm => {
                    let y = required(y, "y")?;
                    (epsilon_closed(q, x_p, y)?, Some(g0(q, y)?))
                }
                Representation::RealIntegral => {
                    let y = required(y, "y")?;
                    (epsilon_quadrature(q, x_p, y)?, Some(g0(q, y)?))
                }
            };
            Ok(PermittivitySample {
                q,
                eps: Complex64::new(eps, 0.0),
                g0: g0v,
                g_plus: None,
                g_minus: None,
                representation: rep,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    table::write(&out, &table::eps_csv(&samples))?;
    Ok(format!(
        "eps: {} rows ({}) -> {}",
        samples.len(),
        rep.as_str(),
        out.display()
    ))
}

const POTENTIAL_KEYS: &[&str] = &[
    "xp",
    "y",
    "rmin",
    "rmax",
    "points",
    "method",
    "scale",
    "screening",
    "output",
    "rel_tol",
    "max_panels",
];

pub fn build_profile(
    method: Method,
    x_p: Option<f64>,
    y: Option<f64>,
    scale: Option<f64>,
    screening: Option<f64>,
    grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<RadialProfile, CliError> {
    let (x_p, y) = match method {
        Method::Numeric => (required(x_p, "xp")?, required(y, "y")?),
        Method::Asymptotic => {
            let y = required(y, "y")?;
            if scale.is_none() {
                (required(x_p, "xp")?, y)
            } else {
                (x_p.unwrap_or(f64::NAN), y)
            }
        }
        Method::ThomasFermi => (required(x_p, "xp")?, y.unwrap_or(0.0)),
        Method::Yukawa => {
            required(screening, "screening")?;
            (x_p.unwrap_or(f64::NAN), y.unwrap_or(0.0))
        }
        Method::Coulomb => (x_p.unwrap_or(0.0), y.unwrap_or(0.0)),
    };
    let mut params = ProfileParams::new(x_p, y);
    if let Some(s) = scale {
        params = params.with_scale(s);
    }
    if let Some(k) = screening {
        params = params.with_screening(k);
    }
    Ok(profile(grid, method, params, spec)?)
}

fn potential(args: &PotentialArgs, config: &ConfigFile) -> Result<String, CliError> {
    config.check_keys(POTENTIAL_KEYS)?;
    let method: Method = config
        .pick(args.method.clone(), "method")?
        .unwrap_or_else(|| "numeric".into())
        .parse()?;
    let r_min: f64 = required(config.pick(args.rmin, "rmin")?, "rmin")?;
    let r_max: f64 = required(config.pick(args.rmax, "rmax")?, "rmax")?;
    let points: usize = config.pick(args.points, "points")?.unwrap_or(1000);
    let out = output_path(args.output.as_ref(), config)?;
    let spec = quadrature_spec(&args.quadrature, config)?;
    let grid = uniform_grid(r_min, r_max, points)?;
    let p = build_profile(
        method,
        config.pick(args.xp, "xp")?,
        config.pick(args.y, "y")?,
        config.pick(args.scale, "scale")?,
        config.pick(args.screening, "screening")?,
        &grid,
        &spec,
    )?;
    table::write(&out, &table::profile_csv(&p))?;
    Ok(format!(
        "potential: {} points ({method}) -> {}",
        p.len(),
        out.display()
    ))
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct FitJson {
    #[serde(rename = "B")]
    pub b: f64,
    pub lambda: f64,
    pub w: f64,
    pub phi: f64,
    pub rms_residual: f64,
    pub window_lo: f64,
    pub window_hi: f64,
    pub n_extrema: usize,
}

impl From<&DampedCosineFit> for FitJson {
    fn from(f: &DampedCosineFit) -> Self {
        FitJson {
            b: f.amplitude,
            lambda: f.decay,
            w: f.wavenumber,
            phi: f.phase,
            rms_residual: f.rms_residual,
            window_lo: f.window.0,
            window_hi: f.window.1,
            n_extrema: f.n_extrema_used,
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct CompareJson {
    pub rms_relative: f64,
    pub max_relative: f64,
    pub envelope_log_slope: Option<f64>,
    pub window_lo: f64,
    pub window_hi: f64,
    pub n_points: usize,
}

impl From<&ComparisonReport> for CompareJson {
    fn from(r: &ComparisonReport) -> Self {
        CompareJson {
            rms_relative: r.rms_relative,
            max_relative: r.max_relative,
            envelope_log_slope: r.envelope_log_slope,
            window_lo: r.window.0,
            window_hi: r.window.1,
            n_points: r.n_points,
        }
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>, what: &str) -> Result<String, CliError> {
    let json = serde_json::to_string(value).map_err(|e| CliError::Io(e.to_string()))?;
    match out {
        Some(path) => {
            table::write(path, &format!("{json}\n"))?;
            Ok(format!("{what} -> {}", path.display()))
        }
        None => Ok(json),
    }
}

fn fit(args: &FitArgs, config: &ConfigFile) -> Result<String, CliError> {
    config.check_keys(&["rmin", "rmax", "output"])?;
    let mut p = table::read_profile(&args.input)?;
    let (lo, hi) = p.window();
    let lo = config.pick(args.rmin, "rmin")?.unwrap_or(lo);
    let hi = config.pick(args.rmax, "rmax")?.unwrap_or(hi);
    if (lo, hi) != p.window() {
        p = p.restricted(lo, hi)?;
    }
    let result = fit_damped_cosine(&p)?;
    let out = config.pick(args.output.clone(), "output")?;
    emit_json(&FitJson::from(&result), out.as_deref(), "fit")
}

fn compare(args: &CompareArgs, config: &ConfigFile) -> Result<String, CliError> {
    config.check_keys(&["output"])?;
    let a = table::read_profile(&args.first)?;
    let b = table::read_profile(&args.second)?;
    let report = compare_profiles(&a, &b)?;
    let out = config.pick(args.output.clone(), "output")?;
    emit_json(&CompareJson::from(&report), out.as_deref(), "compare")
}

const FIGURE_KEYS: &[&str] = &[
    "id",
    "format",
    "method",
    "xp",
    "points",
    "scale",
    "y",
    "rmin",
    "rmax",
    "output",
    "rel_tol",
    "max_panels",
];

/// The figure with any explicit overrides applied.
pub fn resolve_figure(args: &FigureArgs, config: &ConfigFile) -> Result<FigureSpec, CliError> {
    let id: u8 = required(config.pick(args.id, "id")?, "id")?;
    let mut spec = FigureSpec::reference(id)?;
    if let Some(scale) = config.pick(args.scale, "scale")? {
        spec.scale = scale;
    }
    if let Some(list) = config.pick(args.y.clone(), "y")? {
        spec.y_values = list
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("--y: {e}")))?;
    }
    if let Some(lo) = config.pick(args.rmin, "rmin")? {
        spec.r_min = lo;
    }
    if let Some(hi) = config.pick(args.rmax, "rmax")? {
        spec.r_max = hi;
    }
    Ok(spec)
}

/// `path` with `_suffix` inserted before the extension.
pub fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

fn figures(args: &FigureArgs, config: &ConfigFile) -> Result<String, CliError> {
    config.check_keys(FIGURE_KEYS)?;
    let fig = resolve_figure(args, config)?;
    let out = output_path(args.output.as_ref(), config)?;
    let format = match config.pick(args.format.clone(), "format")? {
        Some(f) => f,
        None if out.extension().is_some_and(|e| e == "svg") => "svg".into(),
        None => "csv".into(),
    };
    if format != "csv" && format != "svg" {
        return Err(CliError::Usage(format!(
            "figures support csv or svg, got `{format}`"
        )));
    }
    let overlay = match config.pick(args.method.clone(), "method")?.as_deref() {
        None | Some("asymptotic") => false,
        Some("numeric") => true,
        Some(other) => {
            return Err(CliError::Usage(format!(
                "figures method must be asymptotic or numeric, got `{other}`"
            )))
        }
    };
    let x_p: f64 = config.pick(args.xp, "xp")?.unwrap_or(1.0);
    let points: usize = config.pick(args.points, "points")?.unwrap_or(1000);
    let spec = quadrature_spec(&args.quadrature, config)?;
    let grid = uniform_grid(fig.r_min, fig.r_max, points)?;

    let mut curves: Vec<(String, RadialProfile, bool)> = Vec::new();
    for (label, &y) in fig.curve_labels().into_iter().zip(&fig.y_values) {
        let asym = build_profile(
            Method::Asymptotic,
            None,
            Some(y),
            Some(fig.scale),
            None,
            &grid,
            &spec,
        )?;
        curves.push((label.clone(), asym, false));
        if overlay {
            // Rescaled so its asymptotic amplitude equals the figure scale.
            let numeric = build_profile(
                Method::Numeric,
                Some(x_p),
                Some(y),
                None,
                None,
                &grid,
                &spec,
            )?
            .scaled(fig.scale / amplitude_a(x_p, 1.0));
            curves.push((format!("{label} (numeric)"), numeric, true));
        }
    }

    if format == "svg" {
        let plotted: Vec<Curve> = curves
            .iter()
            .map(|(label, p, numeric)| Curve {
                label: label.clone(),
                x: p.r_values.clone(),
                y: p.u_values.clone(),
                dashed: *numeric,
            })
            .collect();
        let style = SvgStyle {
            note: Some(format!("A·k_F³ = {}", table::number(fig.scale))),
            ..SvgStyle::default()
        };
        table::write(&out, &emit_svg(&plotted, &style)?)?;
        return Ok(format!(
            "figure {}: {} curves -> {}",
            fig.id,
            curves.len(),
            out.display()
        ));
    }

    let multi = fig.y_values.len() > 1;
    let mut written = Vec::new();
    for (i, (_, p, numeric)) in curves.iter().enumerate() {
        let index = if overlay { i / 2 + 1 } else { i + 1 };
        let path = match (multi, numeric) {
            (false, false) => out.clone(),
            (false, true) => suffixed(&out, "numeric"),
            (true, false) => suffixed(&out, &index.to_string()),
            (true, true) => suffixed(&out, &format!("{index}_numeric")),
        };
        table::write(&path, &table::profile_csv(p))?;
        written.push(path.display().to_string());
    }
    Ok(format!(
        "figure {}: {} curves -> {}",
        fig.id,
        curves.len(),
        written.join(", ")
    ))
}
