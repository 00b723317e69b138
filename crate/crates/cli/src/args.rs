use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "belief", version, about = "Elicit, update and score Beta beliefs about a proportion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Io {
    /// Input file (stdin when omitted).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit Betas to elicited intervals.
    ///
    /// Input is either a trial-record export (first line `#schema=1`), in
    /// which case every prior and posterior is refit and records are written
    /// back, or a CSV with columns id,point_estimate,lower,upper, which
    /// yields one Beta per row.
    Fit {
        #[command(flatten)]
        io: Io,
        /// Mass of the HDI reported next to each fit.
        #[arg(long, default_value_t = 0.95)]
        mass: f64,
    },
    /// Normative posteriors by conjugate updating.
    ///
    /// Input is a trial-record export or a CSV with columns
    /// id,prior_alpha,prior_beta,successes,sample_size.
    Update {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 0.95)]
        mass: f64,
        /// Prior for records without an elicited one, as `alpha,beta`.
        #[arg(long, value_parser = parse_beta)]
        common_prior: Option<(f64, f64)>,
    },
    /// Analogy and posterior-visualisation payloads as JSON.
    Assist {
        /// Prior as `alpha,beta`.
        #[arg(long, value_parser = parse_beta, conflicts_with = "prior_interval", required_unless_present = "prior_interval")]
        prior: Option<(f64, f64)>,
        /// Prior as an elicited `point,lower,upper`, fitted first.
        #[arg(long, value_parser = parse_interval)]
        prior_interval: Option<(f64, f64, f64)>,
        #[arg(long, requires = "sample_size", conflicts_with = "dataset")]
        successes: Option<u64>,
        #[arg(long, requires = "successes")]
        sample_size: Option<u64>,
        /// Built-in stimulus instead of --successes/--sample-size.
        #[arg(long, required_unless_present = "successes")]
        dataset: Option<String>,
        #[arg(long, value_enum, default_value_t = AssistKind::Both)]
        kind: AssistKind,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Score elicited posteriors against normative ones.
    Evaluate {
        #[command(flatten)]
        io: Io,
        /// Normative posteriors from `update`, replacing the in-line update.
        #[arg(long)]
        normative: Option<PathBuf>,
        /// Prior for records without an elicited one, as `alpha,beta`.
        #[arg(long, value_parser = parse_beta)]
        common_prior: Option<(f64, f64)>,
        #[arg(long)]
        include_excluded: bool,
        /// Where to write the JSON summary.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Lognormal bias/dispersion regression of scores on condition.
    Regress {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        seed: u64,
        /// JSON convergence diagnostics and effect sizes.
        #[arg(long)]
        diagnostics: Option<PathBuf>,
        /// All kept draws as CSV.
        #[arg(long)]
        draws: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        chains: usize,
        #[arg(long, default_value_t = 2000)]
        warmup: usize,
        #[arg(long, default_value_t = 2500)]
        samples: usize,
    },
    /// Elicited versus non-elicited log KLD with bootstrap intervals.
    Aggregate {
        #[command(flatten)]
        io: Io,
        /// Stimulus to analyse; records for other datasets are ignored.
        #[arg(long)]
        dataset: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        resamples: usize,
    },
    /// Synthetic participants following a named update rule.
    ///
    /// Rules: bayesian, ignore_prior, ignore_data, overshoot:GAMMA (mean
    /// moves GAMMA times the prior-to-data distance past the data, default
    /// 0.5) and variance_inflate:RHO (normative mean, variance times RHO,
    /// default 2).
    Simulate {
        #[arg(long)]
        rule: String,
        #[arg(long, short)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Fix the stimulus; by default datasets rotate.
        #[arg(long)]
        dataset: Option<String>,
        /// `elicitation`, `all`, or a comma-separated list of conditions.
        #[arg(long, default_value = "elicitation")]
        conditions: String,
        #[arg(long, value_enum, default_value_t = ReportingArg::Exact)]
        reporting: ReportingArg,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the study service.
    Serve {
        #[arg(long, env = "BELIEF_BIND", default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        #[arg(long, env = "BELIEF_SEED")]
        seed: u64,
        /// Event-log directory; in-memory when omitted.
        #[arg(long, env = "BELIEF_DATA_DIR")]
        data_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AssistKind {
    Analogy,
    PosteriorVis,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportingArg {
    Exact,
    Slider,
}

fn numbers(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if parts.len() != n {
        return Err(format!("expected {n} comma-separated numbers"));
    }
    Ok(parts)
}

fn parse_beta(s: &str) -> Result<(f64, f64), String> {
    let v = numbers(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_interval(s: &str) -> Result<(f64, f64, f64), String> {
    let v = numbers(s, 3)?;
    Ok((v[0], v[1], v[2]))
}
