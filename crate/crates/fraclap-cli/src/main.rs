mod config;
mod run;

use std::process::ExitCode;

/// Failures split by exit status: 2 for anything rejected before numerics
/// (flags, config files, parameter gates, admissibility conditions), 3 for
/// computations or report writes that fail after validation passed.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Run(String),
    Io(String),
}

impl CliError {
    pub fn validation(e: impl std::fmt::Display) -> Self {
        CliError::Validation(e.to_string())
    }

    /// Gate-style library errors are input problems; the rest are numerical.
    pub fn from_core(e: fraclap_core::Error) -> Self {
        use fraclap_core::Error as E;
        match e {
            E::Domain(_) | E::Condition(_) | E::NonIntegrable(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Run(e.to_string()),
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Run(_) | CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Run(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

fn main() -> ExitCode {
    match run::main_impl() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
