use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A multistep update was asked to run before its history was seeded.
    #[error("startup history required: {0}")]
    StartupRequired(&'static str),

    #[error("singular pressure system: {0}")]
    SolverSingular(String),

    #[error("pressure solve failed: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    SolverFailure { residual: f64, tolerance: f64 },

    #[error("added mass is undefined for the kx = 0 mode")]
    DivergentMode,

    #[error("outside the closed-form bound hypotheses: {0}")]
    OutsideHypotheses(String),

    #[error("shell resonance G = 0 at omega = {0}")]
    ShellResonance(Complex64),

    #[error("dispersion root not found after {iterations} iterations (last iterates: {trace:?})")]
    RootFailure {
        iterations: usize,
        trace: Vec<Complex64>,
    },

    #[error("degenerate dispersion root: {0}")]
    DegenerateRoot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
