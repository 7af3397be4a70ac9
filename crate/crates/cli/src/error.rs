use sczech_core::dynamics::DynError;
use sczech_core::hurwitz_cf::CfError;
use sczech_core::quad_ring::ParseError;
use sczech_core::sczech::SczechError;
use sczech_core::stats::StatsError;
use sczech_core::RingError;

/// Exit codes: 2 configuration, 3 contract violation, 4 non-convergence.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Contract(String),
    NonConvergence(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Contract(_) => 3,
            CliError::NonConvergence(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Contract(_) => "contract_violation",
            CliError::NonConvergence(_) => "non_convergence",
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) | CliError::Contract(m) | CliError::NonConvergence(m) => f.write_str(m),
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<CfError> for CliError {
    fn from(e: CfError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SczechError> for CliError {
    fn from(e: SczechError) -> Self {
        match e {
            SczechError::VanishingTail(_) => CliError::Contract(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<DynError> for CliError {
    fn from(e: DynError) -> Self {
        match e {
            DynError::NonConvergence { .. } | DynError::NoBracket { .. } | DynError::Quadrature { .. } => {
                CliError::NonConvergence(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(format!("csv: {e}"))
    }
}
