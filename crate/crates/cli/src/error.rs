use thiserror::Error;

/// Exit code for bad options, unreadable inputs and invalid configurations.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for numerical failures during a computation.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Numerical,
}

#[derive(Debug, Error)]
#[error("{stage}: {message}")]
pub struct CliError {
    pub stage: &'static str,
    pub class: ErrorClass,
    pub message: String,
}

impl CliError {
    pub fn config(stage: &'static str, message: impl Into<String>) -> Self {
        Self {
            stage,
            class: ErrorClass::Config,
            message: message.into(),
        }
    }

    /// Classifies a library error: input problems are configuration errors,
    /// everything raised by the arithmetic is numerical.
    pub fn lib(stage: &'static str, e: graphkrylov::Error) -> Self {
        use graphkrylov::Error as E;
        let class = match e {
            E::InvalidInput(_)
            | E::Parse { .. }
            | E::IndexOutOfRange { .. }
            | E::DuplicateNode(_)
            | E::SizeExceeded { .. }
            | E::DimensionMismatch { .. } => ErrorClass::Config,
            E::NotSymmetric { .. }
            | E::Singular { .. }
            | E::NonInvertibleCollocation { .. }
            | E::DomainError { .. }
            | E::NegativePhiAtNode { .. }
            | E::NoConvergence => ErrorClass::Numerical,
        };
        Self {
            stage,
            class,
            message: e.to_string(),
        }
    }

    pub fn io(stage: &'static str, e: impl std::fmt::Display) -> Self {
        Self::config(stage, e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Config => EXIT_CONFIG,
            ErrorClass::Numerical => EXIT_NUMERICAL,
        }
    }
}
