use std::process::ExitCode;

use nogo_core::Error;

/// Failure classes with stable exit statuses.
#[derive(Debug)]
pub enum CliError {
    /// Rejected configuration or input file contents.
    Config(String),
    /// Numerical or I/O failure while running.
    Runtime(String),
    /// The chosen phases keep the outputs dependent, so the demo is impossible.
    Dependent(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Self::Config(_) => 2,
            Self::Runtime(_) => 3,
            Self::Dependent(_) => 4,
        })
    }

    pub fn message(&self) -> String {
        let (kind, msg) = match self {
            Self::Config(m) => ("config error", m),
            Self::Runtime(m) => ("error", m),
            Self::Dependent(m) => ("refused", m),
        };
        // Diagnostics stay on one line.
        format!("nogo: {kind}: {}", msg.replace('\n', " "))
    }

    /// Core errors raised while validating the configuration.
    pub fn config(e: Error) -> Self {
        Self::Config(e.to_string())
    }

    /// Core errors raised while running a validated configuration.
    pub fn runtime(e: Error) -> Self {
        match e {
            Error::DependentOutputs => Self::Dependent(e.to_string()),
            other => Self::Runtime(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
