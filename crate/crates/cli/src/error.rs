use std::fmt;

use dirac_fem::DiracError;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Dirac(DiracError),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Output(_) => 2,
            Self::Dirac(e) if e.is_physics_invariant() => 3,
            Self::Dirac(e) if e.is_solver_failure() => 4,
            Self::Dirac(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(msg) => write!(f, "config error: {msg}"),
            Self::Dirac(e) if e.is_physics_invariant() => write!(f, "physics error: {e}"),
            Self::Dirac(e) if e.is_solver_failure() => write!(f, "solver error: {e}"),
            Self::Dirac(e) => write!(f, "config error: {e}"),
            Self::Output(msg) => write!(f, "output error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<DiracError> for CliError {
    fn from(e: DiracError) -> Self {
        Self::Dirac(e)
    }
}
