use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The config file is not valid JSON for the schema.
    #[error("{0}")]
    ConfigParse(String),
    /// The config parsed but names something unknown or inconsistent.
    #[error("{0}")]
    ConfigInvalid(String),
    #[error("unknown suite `{name}`; available: {available}")]
    UnknownSuite { name: String, available: String },
    #[error("{op}: {source}")]
    Runtime {
        op: String,
        #[source]
        source: folner_core::Error,
    },
    #[error("{0}")]
    Io(String),
    #[error("suite `{0}` failed")]
    SuiteFailed(String),
}

impl CliError {
    pub fn class(&self) -> &'static str {
        match self {
            CliError::ConfigParse(_) => "config-parse",
            CliError::ConfigInvalid(_) => "config-invalid",
            CliError::UnknownSuite { .. } => "unknown-suite",
            CliError::Runtime { source, .. } => runtime_class(source),
            CliError::Io(_) => "io",
            CliError::SuiteFailed(_) => "verify-failed",
        }
    }

    /// 2 for configuration and usage problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigParse(_) | CliError::ConfigInvalid(_) | CliError::UnknownSuite { .. } => 2,
            _ => 1,
        }
    }

    /// `error[class]: message` on one line.
    pub fn line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error[{}]: {msg}", self.class())
    }

    pub fn runtime(op: &str, source: folner_core::Error) -> Self {
        CliError::Runtime {
            op: op.to_string(),
            source,
        }
    }
}

fn runtime_class(e: &folner_core::Error) -> &'static str {
    use folner_core::Error as E;
    match e {
        E::UnequalAtomCounts { .. } => "unsupported-case",
        E::BudgetExceeded { .. } => "budget-exceeded",
        E::SolverInconsistency { .. } => "solver-inconsistency",
        E::Overflow(_) => "overflow",
        _ => "runtime",
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
