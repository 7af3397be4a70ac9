mod args;
mod error;
mod run;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use args::Cli;
use error::CliError;

#[derive(Serialize)]
pub struct Meta {
    pub command: Value,
    pub seed: Option<u64>,
    pub git_revision: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return report(CliError::Config(e.to_string().trim().to_string()));
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return report(CliError::Config(format!("thread pool: {e}")));
        }
    }
    let start = Instant::now();
    let command = serde_json::to_value(&cli.command).expect("arguments serialize");
    let meta = |seed: Option<u64>| Meta {
        command: command.clone(),
        seed,
        git_revision: env!("SCZECH_GIT_REV"),
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s: (!cli.reproducible).then(|| start.elapsed().as_secs_f64()),
    };
    match run::run(&cli.command, &meta) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    let body = json!({ "error": e.kind(), "message": e.to_string(), "exit_code": e.code() });
    eprintln!("{body}");
    ExitCode::from(e.code())
}
