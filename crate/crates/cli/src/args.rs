use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "friedel",
    version,
    about = "Screened potential and Friedel oscillations in a degenerate collisional plasma"
)]
pub struct Cli {
    /// Flat key=value file; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Static permittivity on a uniform wavenumber grid (CSV).
    Eps(EpsArgs),
    /// Radial potential profile (CSV).
    Potential(PotentialArgs),
    /// Damped-cosine fit of R³U from a profile CSV (JSON).
    Fit(FitArgs),
    /// Compare two profile CSVs (JSON).
    Compare(CompareArgs),
    /// Regenerate the reference Friedel-oscillation figures.
    Figures(FigureArgs),
}

#[derive(Args, Debug, Default)]
pub struct QuadratureArgs {
    /// Relative tolerance of the sine-transform quadrature.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Panel budget of the sine-transform quadrature.
    #[arg(long)]
    pub max_panels: Option<usize>,
}

#[derive(Args, Debug)]
pub struct EpsArgs {
    /// Dimensionless plasma frequency x_p.
    #[arg(long)]
    pub xp: Option<f64>,
    /// Dimensionless collision frequency y (ignored for lindhard).
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub qmin: Option<f64>,
    #[arg(long)]
    pub qmax: Option<f64>,
    /// Number of grid points [default: 200].
    #[arg(long)]
    pub points: Option<usize>,
    /// closed | quadrature | lindhard [default: closed].
    #[arg(long)]
    pub rep: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PotentialArgs {
    #[arg(long)]
    pub xp: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub rmin: Option<f64>,
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Number of grid points [default: 1000].
    #[arg(long)]
    pub points: Option<usize>,
    /// numeric | asymptotic | yukawa | coulomb | thomas-fermi [default: numeric].
    #[arg(long)]
    pub method: Option<String>,
    /// Amplitude of the asymptotic law [default: A/Q for the given x_p].
    #[arg(long)]
    pub scale: Option<f64>,
    /// Screening wavenumber of the yukawa method.
    #[arg(long)]
    pub screening: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Profile CSV with header `R,U,method,err_est`.
    pub input: PathBuf,
    /// Lower end of the fit window.
    #[arg(long)]
    pub rmin: Option<f64>,
    /// Upper end of the fit window.
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Write the JSON here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    pub first: PathBuf,
    /// Reference profile, interpolated onto the first one's grid.
    pub second: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    /// Figure number: 1, 2 or 3.
    #[arg(long)]
    pub id: Option<u8>,
    /// csv | svg [default: from the output extension, else csv].
    #[arg(long)]
    pub format: Option<String>,
    /// asymptotic, or numeric to overlay the exact inversion.
    #[arg(long)]
    pub method: Option<String>,
    /// x_p of the numeric overlay [default: 1].
    #[arg(long)]
    pub xp: Option<f64>,
    /// Number of grid points per curve [default: 1000].
    #[arg(long)]
    pub points: Option<usize>,
    /// Override the figure's amplitude A·k_F³.
    #[arg(long)]
    pub scale: Option<f64>,
    /// Override the figure's y values (comma-separated).
    #[arg(long)]
    pub y: Option<String>,
    /// Override the figure's lower radius.
    #[arg(long)]
    pub rmin: Option<f64>,
    /// Override the figure's upper radius.
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}
