use std::fmt;

use thiserror::Error;

/// A single violated configuration invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub value: f64,
    pub reason: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}: {}", self.field, self.value, self.reason)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {}", join(.0))]
    InvalidConfig(Vec<Violation>),

    #[error("line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },

    #[error("invalid argument `{name}` = {value}: {reason}")]
    InvalidArgument {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("coupling list is not symmetric under R -> -R (offending R = ({rx}, {ry}))")]
    AsymmetricCoupling { rx: f64, ry: f64 },

    #[error("no light-cone crossing in (0, pi/a]: {0}")]
    NoCrossing(String),

    #[error("root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("polarization sum undefined for q = 0")]
    ZeroWavevector,

    #[error("quadrature did not converge: relative change {change:e} on refinement at eta = {eta} eV")]
    QuadratureNotConverged { eta: f64, change: f64 },

    #[error("eta extrapolation unreliable: error estimate {estimate:e} eV exceeds {tolerance:e} eV")]
    Extrapolation { estimate: f64, tolerance: f64 },

    #[error("photon energy {e_0} eV lies in the singular band around E_ex = {e_ex} eV")]
    SingularBand { e_0: f64, e_ex: f64 },

    #[error("rate diverges at the light-cone crossing (E_0 = {e_0} eV)")]
    Divergent { e_0: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
