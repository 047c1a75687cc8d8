//! CLI-level errors and their mapping onto process exit codes.

use thiserror::Error;

/// Anything that can abort a command.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or contradictory configuration (file, `--set`, or `--seed`).
    #[error("config error: {0}")]
    Config(String),

    /// The model layer rejected the inputs or a solve failed.
    #[error(transparent)]
    Core(#[from] freefall_core::Error),

    /// Filesystem trouble writing a report or reading a config.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 2 for config problems, 3 for domain errors,
    /// 4 for solver failures (including an out-of-reach onset), 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(freefall_core::Error::Domain(_)) => 3,
            CliError::Core(freefall_core::Error::Solver(_)) => 4,
            CliError::Core(freefall_core::Error::NoDecoherenceWithinHorizon { .. }) => 4,
            CliError::Io(_) => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_distinguish_failure_classes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(
            CliError::from(freefall_core::Error::domain("r")).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(freefall_core::Error::Solver("no sign change".into())).exit_code(),
            4
        );
        assert_eq!(
            CliError::from(freefall_core::Error::NoDecoherenceWithinHorizon { horizon_s: 1e12 })
                .exit_code(),
            4
        );
        let io = std::io::Error::new(std::io::ErrorKind::NotFound, "gone");
        assert_eq!(CliError::from(io).exit_code(), 1);
    }

    #[test]
    fn messages_carry_the_cause() {
        let err = CliError::Config("trap.nbar (line 3): must be non-negative".into());
        assert!(err.to_string().contains("line 3"));
        let err = CliError::from(freefall_core::Error::domain("radius must be positive"));
        assert!(err.to_string().contains("radius"));
    }
}
