//! Battery execution: seeded repeats per template (optionally in parallel),
//! per-run trace files, aggregated summaries, and parameter sweeps.
//!
//! Every output byte except measured wall times is a pure function of the
//! spec; runs are scheduled with rayon but collected in job order, so the
//! worker count never changes the results.

use std::fmt::Write as _;
use std::fs;

use anyhow::Context;
use rayon::prelude::*;
use serde::Serialize;

use demeda_core::algorithms::TracePoint;
use demeda_core::problems::format_f64;
use demeda_core::{run, Algorithm, ProblemId};

use crate::config::{ConfigError, ExperimentSpec, RunTemplate};

/// Aggregated statistics of one template's battery.
#[derive(Clone, Debug)]
pub struct SummaryRow {
    pub template: String,
    pub problem: ProblemId,
    pub algorithm: Algorithm,
    /// Successful repeats covered by the statistics.
    pub repeats: usize,
    pub generations: usize,
    pub mean_igd: f64,
    pub std_igd: f64,
    pub mean_wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct FailureRecord {
    pub run_id: String,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug)]
pub struct ExperimentOutput {
    pub rows: Vec<SummaryRow>,
    pub failures: Vec<FailureRecord>,
}

struct RunRecord {
    template_idx: usize,
    run_id: String,
    seed: u64,
    outcome: Result<CompactResult, String>,
}

struct CompactResult {
    trace: Vec<TracePoint>,
    final_igd: f64,
    wall_ms: f64,
}

fn execute_battery(spec: &ExperimentSpec, workers: Option<usize>) -> anyhow::Result<Vec<RunRecord>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(count) = workers {
        builder = builder.num_threads(count);
    }
    let pool = builder.build().context("building worker pool")?;

    let jobs: Vec<(usize, usize)> = (0..spec.templates.len())
        .flat_map(|t| (0..spec.repeats).map(move |r| (t, r)))
        .collect();
    let records: Vec<RunRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(template_idx, repeat)| {
                let template = &spec.templates[template_idx];
                let seed = spec.seed_for(repeat);
                let mut config = template.config.clone();
                config.seed = seed;
                let run_id = format!("{}-r{repeat}", template.name);
                let outcome = match run(&config) {
                    Ok(result) => Ok(CompactResult {
                        final_igd: result.final_igd(),
                        trace: result.igd_trace,
                        wall_ms: if spec.measure_time {
                            result.wall_time.as_secs_f64() * 1e3
                        } else {
                            0.0
                        },
                    }),
                    Err(e) => Err(e.to_string()),
                };
                RunRecord { template_idx, run_id, seed, outcome }
            })
            .collect()
    });
    Ok(records)
}

fn summarize(spec: &ExperimentSpec, records: &[RunRecord]) -> ExperimentOutput {
    let mut rows = Vec::with_capacity(spec.templates.len());
    let mut failures = Vec::new();
    for (template_idx, template) in spec.templates.iter().enumerate() {
        let mut finals = Vec::new();
        let mut walls = Vec::new();
        for record in records.iter().filter(|r| r.template_idx == template_idx) {
            match &record.outcome {
                Ok(result) => {
                    finals.push(result.final_igd);
                    walls.push(result.wall_ms);
                }
                Err(message) => failures.push(FailureRecord {
                    run_id: record.run_id.clone(),
                    seed: record.seed,
                    message: message.clone(),
                }),
            }
        }
        rows.push(SummaryRow {
            template: template.name.clone(),
            problem: template.config.problem,
            algorithm: template.config.algorithm,
            repeats: finals.len(),
            generations: template.config.generations,
            mean_igd: mean(&finals),
            std_igd: sample_std(&finals),
            mean_wall_ms: mean(&walls),
        });
    }
    ExperimentOutput { rows, failures }
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Standard deviation with divisor `len - 1`; zero by convention for a
/// single observation.
fn sample_std(values: &[f64]) -> f64 {
    match values.len() {
        0 => f64::NAN,
        1 => 0.0,
        len => {
            let m = mean(values);
            (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (len - 1) as f64).sqrt()
        }
    }
}

fn trace_csv(template: &RunTemplate, run_id: &str, seed: u64, trace: &[TracePoint]) -> String {
    let mut out = String::from("run_id,seed,problem,algorithm,generation,igd,evaluations\n");
    for point in trace {
        let _ = writeln!(
            out,
            "{run_id},{seed},{},{},{},{},{}",
            template.config.problem,
            template.config.algorithm,
            point.generation,
            format_f64(point.igd),
            point.evaluations
        );
    }
    out
}

fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("problem,algorithm,repeats,generations,mean_igd,std_igd,mean_wall_ms\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.problem,
            row.algorithm,
            row.repeats,
            row.generations,
            format_f64(row.mean_igd),
            format_f64(row.std_igd),
            format_f64(row.mean_wall_ms)
        );
    }
    out
}

#[derive(Serialize)]
struct TemplateManifest {
    name: String,
    problem: String,
    algorithm: String,
    dimension: usize,
    population: usize,
    generations: usize,
    clusters: usize,
    alpha: f64,
    beta: f64,
    de_f: f64,
    de_cr: f64,
    mutation_rate: f64,
    eta: f64,
}

#[derive(Serialize)]
struct Manifest {
    command: String,
    base_seed: u64,
    seed_derivation: &'static str,
    repeats: usize,
    trace_stride: usize,
    timing_recorded: bool,
    notes: Vec<String>,
    templates: Vec<TemplateManifest>,
}

fn manifest(spec: &ExperimentSpec, command: &str, notes: Vec<String>) -> Manifest {
    Manifest {
        command: command.to_string(),
        base_seed: spec.base_seed,
        seed_derivation: "seed = base_seed + repeat_index",
        repeats: spec.repeats,
        trace_stride: spec.trace_stride,
        timing_recorded: spec.measure_time,
        notes,
        templates: spec
            .templates
            .iter()
            .map(|t| TemplateManifest {
                name: t.name.clone(),
                problem: t.config.problem.to_string(),
                algorithm: t.config.algorithm.to_string(),
                dimension: t.config.dim(),
                population: t.config.population,
                generations: t.config.generations,
                clusters: t.config.clusters,
                alpha: t.config.mix.alpha,
                beta: t.config.mix.beta,
                de_f: t.config.de.scale,
                de_cr: t.config.de.crossover,
                mutation_rate: t.config.de.mutation_rate,
                eta: t.config.de.eta,
            })
            .collect(),
    }
}

/// Executes the battery and writes `trace_<run_id>.csv` per successful run,
/// `summary.csv`, `manifest.json`, and `failures.txt` when anything failed.
pub fn run_experiment(spec: &ExperimentSpec, workers: Option<usize>) -> anyhow::Result<ExperimentOutput> {
    fs::create_dir_all(&spec.output_dir)
        .with_context(|| format!("creating {}", spec.output_dir.display()))?;
    let records = execute_battery(spec, workers)?;

    for record in &records {
        if let Ok(result) = &record.outcome {
            let template = &spec.templates[record.template_idx];
            let path = spec.output_dir.join(format!("trace_{}.csv", record.run_id));
            fs::write(&path, trace_csv(template, &record.run_id, record.seed, &result.trace))
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }

    let output = summarize(spec, &records);
    let mut notes = Vec::new();
    if spec.repeats == 1 {
        notes.push("repeats = 1: std_igd reported as 0 by convention".to_string());
        eprintln!("warning: repeats = 1, std_igd is 0 by convention");
    }
    if !output.failures.is_empty() {
        notes.push(format!("{} run(s) failed; see failures.txt", output.failures.len()));
        let mut text = String::new();
        for f in &output.failures {
            let _ = writeln!(text, "{} (seed {}): {}", f.run_id, f.seed, f.message);
        }
        fs::write(spec.output_dir.join("failures.txt"), text)?;
    }

    fs::write(spec.output_dir.join("summary.csv"), summary_csv(&output.rows))?;
    let manifest = manifest(spec, "run", notes);
    fs::write(
        spec.output_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(output)
}

/// Swept parameter of the `sweep` subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Clusters,
    AlphaBeta,
    Dimension,
}

impl SweepParam {
    pub fn tag(self) -> &'static str {
        match self {
            SweepParam::Clusters => "K",
            SweepParam::AlphaBeta => "alpha_beta",
            SweepParam::Dimension => "dim",
        }
    }
}

/// One parsed sweep value together with its display form.
#[derive(Clone, Debug)]
enum SweepValue {
    Clusters(usize),
    AlphaBeta(f64, f64),
    Dimension(usize),
}

impl SweepValue {
    fn label(&self) -> String {
        match self {
            SweepValue::Clusters(k) => k.to_string(),
            SweepValue::AlphaBeta(a, b) => format!("{a}-{b}"),
            SweepValue::Dimension(d) => d.to_string(),
        }
    }
}

fn parse_values(param: SweepParam, raw: &str) -> Result<Vec<SweepValue>, ConfigError> {
    let items: Vec<&str> = raw.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(ConfigError("no sweep values given".into()));
    }
    items
        .into_iter()
        .map(|item| match param {
            SweepParam::Clusters => item
                .parse::<usize>()
                .map(SweepValue::Clusters)
                .map_err(|e| ConfigError(format!("K value '{item}': {e}"))),
            SweepParam::Dimension => item
                .parse::<usize>()
                .map(SweepValue::Dimension)
                .map_err(|e| ConfigError(format!("dimension value '{item}': {e}"))),
            SweepParam::AlphaBeta => {
                let (a, b) = item
                    .split_once('-')
                    .ok_or_else(|| ConfigError(format!("alpha_beta value '{item}': expected 'alpha-beta'")))?;
                let alpha: f64 = a
                    .trim()
                    .parse()
                    .map_err(|e| ConfigError(format!("alpha '{a}': {e}")))?;
                let beta: f64 = b
                    .trim()
                    .parse()
                    .map_err(|e| ConfigError(format!("beta '{b}': {e}")))?;
                if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) || alpha + beta > 1.0
                {
                    return Err(ConfigError(format!(
                        "alpha_beta value '{item}': needs alpha, beta in [0, 1] with alpha + beta <= 1"
                    )));
                }
                Ok(SweepValue::AlphaBeta(alpha, beta))
            }
        })
        .collect()
}

fn apply_value(template: &RunTemplate, value: &SweepValue) -> Result<RunTemplate, ConfigError> {
    let mut config = template.config.clone();
    match value {
        SweepValue::Clusters(k) => {
            if config.algorithm == Algorithm::Nsga2De {
                return Err(ConfigError(format!(
                    "template '{}': cluster-count sweep does not apply to {}",
                    template.name, config.algorithm
                )));
            }
            if *k == 0 || *k > config.population {
                return Err(ConfigError(format!("K = {k} must lie in 1..=population")));
            }
            config.clusters = *k;
        }
        SweepValue::AlphaBeta(alpha, beta) => {
            if config.algorithm != Algorithm::DeRmMeda {
                return Err(ConfigError(format!(
                    "template '{}': alpha/beta sweep only applies to de-rm-meda",
                    template.name
                )));
            }
            config.mix = demeda_core::allocator::MixParams::new(*alpha, *beta);
        }
        SweepValue::Dimension(dim) => {
            if !config.problem.dimension_sweepable() {
                return Err(ConfigError(format!(
                    "template '{}': {} has a fixed decision dimension of {}",
                    template.name,
                    config.problem,
                    config.problem.default_dim()
                )));
            }
            if *dim < config.problem.min_dim() {
                return Err(ConfigError(format!(
                    "dimension {dim} below the minimum {} for {}",
                    config.problem.min_dim(),
                    config.problem
                )));
            }
            config.dimension = Some(*dim);
            config.de = demeda_core::de::DeParams::new(
                config.de.scale,
                config.de.crossover,
                1.0 / *dim as f64,
                config.de.eta,
            );
        }
    }
    Ok(RunTemplate { name: template.name.clone(), config })
}

/// Sweep batteries validated against the base templates: one derived battery
/// per value. Fails fast if the parameter does not apply to every template.
pub fn prepare_sweep(
    spec: &ExperimentSpec,
    param: SweepParam,
    values_raw: &str,
) -> Result<Vec<(String, ExperimentSpec)>, ConfigError> {
    let values = parse_values(param, values_raw)?;
    let mut batteries = Vec::with_capacity(values.len());
    for value in &values {
        let templates = spec
            .templates
            .iter()
            .map(|t| apply_value(t, value))
            .collect::<Result<Vec<_>, _>>()?;
        let derived = ExperimentSpec { templates, ..spec.clone() };
        batteries.push((value.label(), derived));
    }
    Ok(batteries)
}

/// Runs every derived battery and writes `sweep_<param>.csv` plus a manifest.
pub fn run_sweep(
    spec: &ExperimentSpec,
    param: SweepParam,
    batteries: &[(String, ExperimentSpec)],
    workers: Option<usize>,
) -> anyhow::Result<ExperimentOutput> {
    fs::create_dir_all(&spec.output_dir)
        .with_context(|| format!("creating {}", spec.output_dir.display()))?;

    let mut csv = String::from(
        "param,value,problem,algorithm,repeats,generations,evaluations,mean_igd,std_igd\n",
    );
    let mut all_rows = Vec::new();
    let mut all_failures = Vec::new();
    for (label, battery) in batteries {
        let records = execute_battery(battery, workers)?;
        let output = summarize(battery, &records);
        for (row, template) in output.rows.iter().zip(&battery.templates) {
            let evaluations =
                template.config.population as u64 * (template.config.generations as u64 + 1);
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{}",
                param.tag(),
                label,
                row.problem,
                row.algorithm,
                row.repeats,
                row.generations,
                evaluations,
                format_f64(row.mean_igd),
                format_f64(row.std_igd)
            );
        }
        all_rows.extend(output.rows);
        all_failures.extend(output.failures);
    }

    fs::write(spec.output_dir.join(format!("sweep_{}.csv", param.tag())), csv)?;
    let mut notes = vec![format!("sweep over {}", param.tag())];
    if !all_failures.is_empty() {
        notes.push(format!("{} run(s) failed", all_failures.len()));
    }
    fs::write(
        spec.output_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest(spec, "sweep", notes))?,
    )?;
    Ok(ExperimentOutput { rows: all_rows, failures: all_failures })
}
