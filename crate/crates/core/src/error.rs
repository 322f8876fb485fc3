use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    GammaPole(f64),

    #[error("gamma ratio undefined: both arguments are poles (p = {p}, q = {q})")]
    RatioPoles { p: f64, q: f64 },

    #[error("energy equation has no sign change for g = {g}, branch {branch} on [{lo}, {hi}]")]
    Bracket { g: f64, branch: usize, lo: f64, hi: f64 },

    #[error("branch {branch} requested for attractive coupling g = {g}; only branch 0 exists below E = 1/2")]
    AttractiveBranch { g: f64, branch: usize },

    #[error("quadrature on [{lo}, {hi}] did not converge (error estimate {error:e})")]
    Quadrature { lo: f64, hi: f64, error: f64 },

    #[error("time {t} outside [0, {t_f}]")]
    TimeOutOfRange { t: f64, t_f: f64 },

    #[error("degenerate ansatz: initial and final interaction are both {0}")]
    DegenerateAnsatz(f64),

    #[error("singular STA denominator at eta = {eta}: d|phi(0)|^2/d eta = {derivative:e}")]
    SingularDenominator { eta: f64, derivative: f64 },

    #[error("norm drift {drift:e} exceeds budget {budget:e} at t = {t}")]
    NormBudget { drift: f64, budget: f64, t: f64 },

    #[error("propagation failed: {0}")]
    Propagation(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("point {x} outside sampled range [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },

    #[error("decay fit needs at least {needed} usable points inside the window, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("{failed} sweep rows failed; first: {first}")]
    SweepFailures { failed: usize, first: String, code: i32 },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Json(_)
            | Error::InvalidArgument(_)
            | Error::TimeOutOfRange { .. }
            | Error::InsufficientPoints { .. } => 2,
            Error::GammaPole(_)
            | Error::RatioPoles { .. }
            | Error::Bracket { .. }
            | Error::AttractiveBranch { .. }
            | Error::Quadrature { .. } => 3,
            Error::SingularDenominator { .. } | Error::DegenerateAnsatz(_) => 4,
            Error::NormBudget { .. }
            | Error::Propagation(_)
            | Error::GridMismatch(_)
            | Error::OutOfRange { .. } => 5,
            Error::SweepFailures { code, .. } => *code,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}
