use std::fs;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use belief_analysis::effect::effect_size;
use belief_analysis::lognormal::{fit_lognormal_model, ConditionCode, COEFFICIENTS};
use belief_analysis::simulate::{simulate_population, Reporting, SimulationConfig, UpdateRule};
use belief_analysis::{aggregate_elicitation_analysis, SamplerConfig};
use belief_core::evaluation::batch::{evaluate_records, read_scores, write_scores, EvaluationOptions};
use belief_core::record::{read_records, write_records, SCHEMA_LINE};
use belief_core::{
    fit_beta, hdi, make_analogy, make_posterior_vis, posterior_update, BetaBelief, Condition, Dataset,
    ElicitedBelief, ElicitedInterval, ObservedData, TrialRecord,
};
use belief_study::{StudyConfig, StudyService};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{AssistKind, Command, Io, ReportingArg};
use crate::output::Outputs;

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn is_record_export(text: &str) -> bool {
    text.lines().next().map(str::trim_end) == Some(SCHEMA_LINE)
}

fn records_csv(records: &[TrialRecord]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_records(&mut buf, records)?;
    Ok(buf)
}

fn rows_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner()?)
}

fn read_rows<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .enumerate()
        .map(|(i, r)| r.with_context(|| format!("row {}", i + 1)))
        .collect()
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn dataset(name: &str) -> Result<Dataset> {
    Ok(name.parse::<Dataset>()?)
}

fn beta((a, b): (f64, f64)) -> Result<BetaBelief> {
    Ok(BetaBelief::new(a, b)?)
}

pub fn run(command: Command) -> Result<()> {
    let mut out = Outputs::default();
    match command {
        Command::Fit { io, mass } => fit(&io, mass, &mut out)?,
        Command::Update { io, mass, common_prior } => update(&io, mass, common_prior.map(beta).transpose()?, &mut out)?,
        Command::Assist { prior, prior_interval, successes, sample_size, dataset: ds, kind, output } => {
            let prior = match (prior, prior_interval) {
                (Some(p), _) => beta(p)?,
                (None, Some((p, l, u))) => fit_beta(&ElicitedInterval::new(p, l, u)?)?,
                (None, None) => bail!("either --prior or --prior-interval is required"),
            };
            let data = match (successes, sample_size, ds) {
                (Some(s), Some(n), _) => ObservedData::new(s, n)?,
                (_, _, Some(name)) => dataset(&name)?.observed(),
                _ => bail!("either --successes/--sample-size or --dataset is required"),
            };
            let mut payload = json!({ "prior": prior, "data": data });
            if kind != AssistKind::PosteriorVis {
                payload["analogy"] = serde_json::to_value(make_analogy(&prior, &data)?)?;
            }
            if kind != AssistKind::Analogy {
                payload["posterior_vis"] = serde_json::to_value(make_posterior_vis(&prior, &data)?)?;
            }
            out.stage(output.as_deref(), &json_bytes(&payload)?)?;
        }
        Command::Evaluate { io, normative, common_prior, include_excluded, summary } => {
            let records = read_records(read_input(io.input.as_deref())?.as_bytes())?;
            let mut options = EvaluationOptions {
                common_prior: common_prior.map(beta).transpose()?,
                include_excluded,
                ..Default::default()
            };
            if let Some(path) = normative {
                let rows: Vec<NormativeRow> = read_rows(&read_input(Some(&path))?)?;
                for row in rows {
                    options.normative.insert(row.id, BetaBelief::new(row.alpha, row.beta)?);
                }
            }
            let eval = evaluate_records(&records, &options)?;
            let mut scores = Vec::new();
            write_scores(&mut scores, &eval.rows)?;
            out.stage(io.output.as_deref(), &scores)?;
            if let Some(path) = summary {
                out.stage(Some(&path), &json_bytes(&eval.summary)?)?;
            }
        }
        Command::Regress { io, seed, diagnostics, draws, chains, warmup, samples } => {
            let rows = read_scores(read_input(io.input.as_deref())?.as_bytes())?;
            let data: Vec<(f64, ConditionCode)> = rows
                .iter()
                .filter_map(|r| ConditionCode::from_condition(r.condition).map(|c| (r.kld, c)))
                .collect();
            let config = SamplerConfig { chains, warmup, draws: samples, ..SamplerConfig::new(seed) };
            let fit = fit_lognormal_model(&data, &config)?;
            out.stage(io.output.as_deref(), &rows_csv(&fit.summaries)?)?;
            if let Some(path) = diagnostics {
                let effects: Vec<_> = if fit.converged {
                    ConditionCode::ALL[1..]
                        .iter()
                        .filter(|c| fit.group_sizes[c.group()] > 0)
                        .map(|&c| effect_size(&fit, c))
                        .collect::<Result<_, _>>()?
                } else {
                    Vec::new()
                };
                let blob = json!({
                    "converged": fit.converged,
                    "max_r_hat": fit.max_r_hat,
                    "records": fit.records,
                    "group_sizes": fit.group_sizes,
                    "sampler": fit.config,
                    "chains": fit.chain_diagnostics,
                    "effect_sizes": effects,
                });
                out.stage(Some(&path), &json_bytes(&blob)?)?;
            }
            if let Some(path) = draws {
                let mut w = csv::Writer::from_writer(Vec::new());
                let mut header = vec!["chain".to_string(), "draw".to_string()];
                header.extend(COEFFICIENTS.iter().map(|s| s.to_string()));
                w.write_record(&header)?;
                for (i, d) in fit.draws.iter().enumerate() {
                    let mut row = vec![(i / samples).to_string(), (i % samples).to_string()];
                    row.extend(d.iter().map(|v| v.to_string()));
                    w.write_record(&row)?;
                }
                out.stage(Some(&path), &w.into_inner()?)?;
            }
            if !fit.converged {
                eprintln!("warning: fit did not converge (largest split R-hat {:.3})", fit.max_r_hat);
            }
        }
        Command::Aggregate { io, dataset: name, seed, resamples } => {
            let ds = dataset(&name)?;
            let records: Vec<TrialRecord> = read_records(read_input(io.input.as_deref())?.as_bytes())?
                .into_iter()
                .filter(|r| r.dataset == ds && !r.excluded())
                .collect();
            let (elicited, non_elicited): (Vec<_>, Vec<_>) = records.into_iter().partition(|r| r.prior.is_some());
            let report = aggregate_elicitation_analysis(&elicited, &non_elicited, &ds.observed(), resamples, seed)?;
            out.stage(io.output.as_deref(), &json_bytes(&report)?)?;
        }
        Command::Simulate { rule, n, seed, dataset: ds, conditions, reporting, output } => {
            let mut config = SimulationConfig::new(rule.parse::<UpdateRule>()?, n, seed);
            config.dataset = ds.as_deref().map(dataset).transpose()?;
            config.conditions = parse_conditions(&conditions)?;
            config.reporting = match reporting {
                ReportingArg::Exact => Reporting::Exact,
                ReportingArg::Slider => Reporting::Slider,
            };
            out.stage(output.as_deref(), &records_csv(&simulate_population(&config)?)?)?;
        }
        Command::Serve { bind, seed, data_dir } => {
            let service = Arc::new(StudyService::open(&StudyConfig { seed, data_dir })?);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(belief_study::http::serve(bind, service))?;
        }
    }
    out.commit()
}

fn parse_conditions(spec: &str) -> Result<Vec<Condition>> {
    Ok(match spec {
        "elicitation" => Condition::ELICITATION.to_vec(),
        "all" => Condition::ALL.to_vec(),
        list => list.split(',').map(|c| c.trim().parse::<Condition>()).collect::<Result<_, _>>()?,
    })
}

#[derive(Debug, Deserialize)]
struct IntervalRow {
    id: String,
    point_estimate: f64,
    lower: f64,
    upper: f64,
}

#[derive(Debug, Serialize)]
struct FitRow {
    id: String,
    point_estimate: f64,
    lower: f64,
    upper: f64,
    alpha: f64,
    beta: f64,
    kappa: f64,
    hdi_lower: f64,
    hdi_upper: f64,
}

fn refit(belief: &ElicitedBelief) -> Result<ElicitedBelief> {
    Ok(ElicitedBelief { interval: belief.interval, fitted: fit_beta(&belief.interval)? })
}

fn fit(io: &Io, mass: f64, out: &mut Outputs) -> Result<()> {
    let text = read_input(io.input.as_deref())?;
    if is_record_export(&text) {
        let records = read_records(text.as_bytes())?
            .into_iter()
            .map(|mut r| {
                r.prior = r.prior.as_ref().map(refit).transpose()?;
                r.posterior = refit(&r.posterior)?;
                Ok(r)
            })
            .collect::<Result<Vec<_>>>()?;
        return out.stage(io.output.as_deref(), &records_csv(&records)?);
    }
    let rows: Vec<IntervalRow> = read_rows(&text)?;
    let fitted = rows
        .into_iter()
        .map(|r| {
            let b = ElicitedInterval::new(r.point_estimate, r.lower, r.upper)
                .and_then(|e| fit_beta(&e))
                .with_context(|| format!("row {}", r.id))?;
            let h = hdi(&b, mass)?;
            Ok(FitRow {
                id: r.id,
                point_estimate: r.point_estimate,
                lower: r.lower,
                upper: r.upper,
                alpha: b.alpha(),
                beta: b.beta(),
                kappa: b.concentration(),
                hdi_lower: h.lower,
                hdi_upper: h.upper,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.stage(io.output.as_deref(), &rows_csv(&fitted)?)
}

#[derive(Debug, Deserialize)]
struct UpdateInput {
    id: String,
    prior_alpha: f64,
    prior_beta: f64,
    successes: u64,
    sample_size: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct NormativeRow {
    pub id: String,
    pub prior_alpha: f64,
    pub prior_beta: f64,
    pub successes: u64,
    pub sample_size: u64,
    pub alpha: f64,
    pub beta: f64,
    pub mean: f64,
    pub hdi_lower: f64,
    pub hdi_upper: f64,
}

fn normative_row(id: String, prior: BetaBelief, data: &ObservedData, mass: f64) -> Result<NormativeRow> {
    let post = posterior_update(&prior, data);
    let h = hdi(&post, mass)?;
    Ok(NormativeRow {
        id,
        prior_alpha: prior.alpha(),
        prior_beta: prior.beta(),
        successes: data.successes(),
        sample_size: data.sample_size(),
        alpha: post.alpha(),
        beta: post.beta(),
        mean: post.mean(),
        hdi_lower: h.lower,
        hdi_upper: h.upper,
    })
}

fn update(io: &Io, mass: f64, common_prior: Option<BetaBelief>, out: &mut Outputs) -> Result<()> {
    let text = read_input(io.input.as_deref())?;
    let rows = if is_record_export(&text) {
        read_records(text.as_bytes())?
            .into_iter()
            .filter_map(|r| {
                let prior = r.prior.map(|p| p.fitted).or(common_prior)?;
                Some(normative_row(r.participant_id.clone(), prior, &r.observed(), mass))
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        read_rows::<UpdateInput>(&text)?
            .into_iter()
            .map(|r| {
                let prior = BetaBelief::new(r.prior_alpha, r.prior_beta)?;
                normative_row(r.id, prior, &ObservedData::new(r.successes, r.sample_size)?, mass)
            })
            .collect::<Result<Vec<_>>>()?
    };
    out.stage(io.output.as_deref(), &rows_csv(&rows)?)
}
