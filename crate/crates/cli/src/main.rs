use std::process::ExitCode;

use belief_analysis::AnalysisError;
use belief_core::BeliefError;
use belief_study::StudyError;
use clap::Parser;
use serde_json::json;

mod args;
mod commands;
mod output;

fn error_kind(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<BeliefError>() {
            return match e {
                BeliefError::InvalidInput(_) => "invalid_input",
                BeliefError::FitFailure { .. } => "fit_failure",
                BeliefError::RootFinding(_) => "root_finding",
                BeliefError::NonFinite(_) => "non_finite",
            };
        }
        if let Some(e) = cause.downcast_ref::<AnalysisError>() {
            return match e {
                AnalysisError::InvalidInput(_) => "invalid_input",
                AnalysisError::NotConverged { .. } => "not_converged",
                AnalysisError::TooFewPriors { .. } => "too_few_priors",
                AnalysisError::Belief(_) => "invalid_input",
            };
        }
        if let Some(e) = cause.downcast_ref::<StudyError>() {
            return e.kind();
        }
        if cause.downcast_ref::<csv::Error>().is_some() {
            return "csv";
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return "io";
        }
    }
    "error"
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let message = format!("{err:#}");
            eprintln!("{}", json!({ "error": error_kind(&err), "message": message }));
            ExitCode::FAILURE
        }
    }
}
