use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("degree error: {0}")]
    Degree(String),

    #[error("series division by a series with zero constant term")]
    SingularDivision,

    #[error("scaled integration of a series with nonzero constant term {0:e}")]
    NonRemovableSingularity(f64),

    #[error("constant term {value:e} of a corner numerator is not analytically zero")]
    ConstantTerm { value: f64 },

    #[error("denominator of {integrand} vanishes near z = {z}")]
    DenominatorVanishing { integrand: String, z: f64 },

    #[error("no sign change on [{lo}, {hi}] (f = {flo:e}, {fhi:e})")]
    Bracket { lo: f64, hi: f64, flo: f64, fhi: f64 },

    #[error("{what} did not converge near {location}")]
    NonConvergence { what: String, location: f64 },

    #[error("hypothesis H1 violated: {inequality} fails near z = {z}")]
    H1 { inequality: String, z: f64 },

    #[error("hypothesis H2 violated: {0}")]
    H2(String),

    #[error("d3 needs lambda1 < 1, lambda2 > 1, lambda3 > 1 (got {0}, {1}, {2}); permute the saddles to reach that branch")]
    Branch(f64, f64, f64),

    #[error("Mellin transform pole: alpha = {alpha} is within {tol:e} of the integer {integer}")]
    MellinPole { alpha: f64, integer: i64, tol: f64 },

    #[error("Taylor data of order {available} is too short, order {needed} required")]
    TaylorOrder { needed: usize, available: usize },

    #[error("integration step budget of {0} steps exhausted")]
    StepBudget(usize),

    #[error("orbit left the chart domain at ({0}, {1})")]
    LeftDomain(f64, f64),

    #[error("inadmissible {family} parameters: {reason}")]
    Inadmissible { family: String, reason: String },

    #[error("ill-conditioned least squares: {0}")]
    IllConditioned(String),

    #[error("{0}")]
    NotFound(String),

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub fn is_hypothesis(&self) -> bool {
        matches!(self, Error::H1 { .. } | Error::H2(_) | Error::Inadmissible { .. })
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, Error::MellinPole { .. })
    }
}
