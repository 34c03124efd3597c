use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("logarithmic Kohn singularity at q = {q}")]
    SingularPoint { q: f64 },

    #[error("permittivity at q = {q} has imaginary residue {imag:e} (real part {real:e})")]
    NumericalConsistency { q: f64, real: f64, imag: f64 },

    #[error("{context}: no convergence after {panels} panels (residual estimate {residual:e})")]
    Convergence {
        context: String,
        panels: usize,
        residual: f64,
    },

    #[error("integrand returned a non-finite value at k = {k}")]
    IntegrandEvaluation { k: f64 },

    #[error("finite-difference step {step:e} too coarse for collision parameter y = {y:e} (need step < y/5)")]
    Resolution { step: f64, y: f64 },

    #[error("found {found} extrema, need at least {needed}")]
    InsufficientData { found: usize, needed: usize },

    #[error("damped-cosine fit did not converge (initial B = {b}, lambda = {lambda}, w = {w}, phi = {phi})")]
    FitFailure {
        b: f64,
        lambda: f64,
        w: f64,
        phi: f64,
    },

    #[error("potential at R = {r}: {source}")]
    AtRadius {
        r: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_radius(self, r: f64) -> Self {
        Error::AtRadius {
            r,
            source: Box::new(self),
        }
    }

    /// Strips radius context and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtRadius { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
