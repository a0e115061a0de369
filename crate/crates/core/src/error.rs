use std::path::PathBuf;

/// Errors raised by the solver, the oracle, and the command-line layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("complex effective index: (kappa -/+ 1/2)^2 + b(b -/+ 2q) = {radicand} < 0")]
    ComplexIndex { radicand: f64 },

    #[error("energy equation has no real solution (discriminant {discriminant})")]
    NoRealSolution { discriminant: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no admissible Nikiforov-Uvarov branch: {0}")]
    Branch(String),

    #[error("{count} Nikiforov-Uvarov branches survive the selection rule")]
    AmbiguousBranch { count: usize },

    #[error("coupling denominator vanishes at r = {radius}")]
    SingularDenominator { radius: f64 },

    #[error("U(r) changes sign inside the integration window at r = {radius}")]
    SingularPotential { radius: f64 },

    #[error("integration lost finiteness at r = {radius}")]
    Stiffness { radius: f64 },

    #[error("bracket [{lo}, {hi}] holds no eigenvalue with {nodes} nodes")]
    Bracket { lo: f64, hi: f64, nodes: usize },

    #[error("bracket [{lo}, {hi}] holds {count} eigenvalues with {nodes} nodes")]
    AmbiguousBracket {
        lo: f64,
        hi: f64,
        nodes: usize,
        count: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short machine-readable tag used in tabular output.
    pub fn reason_code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::ComplexIndex { .. } => "complex_index",
            Error::NoRealSolution { .. } => "no_real_solution",
            Error::Precondition(_) => "precondition",
            Error::Branch(_) => "branch",
            Error::AmbiguousBranch { .. } => "ambiguous_branch",
            Error::SingularDenominator { .. } => "singular_denominator",
            Error::SingularPotential { .. } => "singular_potential",
            Error::Stiffness { .. } => "stiffness",
            Error::Bracket { .. } => "bracket",
            Error::AmbiguousBracket { .. } => "ambiguous_bracket",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
