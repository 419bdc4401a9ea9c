//! `demeda` — experiment runner for the multi-objective optimizers: seeded
//! run batteries, parameter sweeps, standalone IGD evaluation, and reference
//! front export.
//!
//! Exit codes: 0 full success, 1 any failed run or I/O problem, 2 config or
//! usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use demeda_core::problems::{format_f64, read_pf_file, sample_true_pf, write_pf_file};
use demeda_core::{metrics, ObjectiveVector, ProblemId};

use demeda_cli::config::{self, ExperimentSpec};
use demeda_cli::experiment::{self, SweepParam};

const OUT_DIR_ENV: &str = "DEMEDA_OUT_DIR";

#[derive(Parser)]
#[command(name = "demeda", version, about = "Multi-objective optimizer experiment harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BatteryArgs {
    /// Experiment config file (key = value lines with [section] headers).
    #[arg(long)]
    config: PathBuf,
    /// Worker thread count (default: one per CPU).
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory (overrides the config and DEMEDA_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report wall times as zero so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every template in the config for the configured repeats.
    Run(BatteryArgs),
    /// Re-run the battery over a sweep of one parameter.
    Sweep {
        #[command(flatten)]
        battery: BatteryArgs,
        /// Swept parameter.
        #[arg(long, value_enum)]
        param: ParamArg,
        /// Comma-separated values: integers for K/dim, alpha-beta pairs
        /// like 0.3-0.6 for alpha_beta.
        #[arg(long)]
        values: String,
    },
    /// Compute IGD of an approximation set against a reference front.
    Igd {
        /// Objective vectors, one point per line (CSV or whitespace).
        #[arg(long)]
        approx: PathBuf,
        /// Reference front file (whitespace-separated objectives).
        #[arg(long)]
        reference: PathBuf,
    },
    /// Export an analytic reference front in the text format.
    ExportPf {
        #[arg(long)]
        problem: ProblemId,
        /// Number of points (default: 500, or 1000 for three objectives).
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ParamArg {
    /// Cluster count of the model-based algorithms.
    K,
    /// Mixing coefficients of the hybrid generator.
    AlphaBeta,
    /// Decision-space dimension.
    Dim,
}

impl From<ParamArg> for SweepParam {
    fn from(arg: ParamArg) -> Self {
        match arg {
            ParamArg::K => SweepParam::Clusters,
            ParamArg::AlphaBeta => SweepParam::AlphaBeta,
            ParamArg::Dim => SweepParam::Dimension,
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(args) => battery_command(args, None),
        Command::Sweep { battery, param, values } => {
            battery_command(battery, Some((param.into(), values)))
        }
        Command::Igd { approx, reference } => igd_command(&approx, &reference),
        Command::ExportPf { problem, count, out } => export_pf_command(problem, count, &out),
    }
}

fn load_spec(args: &BatteryArgs) -> Result<ExperimentSpec, String> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| format!("{}: {e}", args.config.display()))?;
    let mut spec = config::parse_experiment(&text).map_err(|e| e.to_string())?;
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        spec.output_dir = PathBuf::from(dir);
    }
    if let Some(dir) = &args.out {
        spec.output_dir = dir.clone();
    }
    spec.measure_time = !args.no_timing;
    Ok(spec)
}

fn battery_command(args: BatteryArgs, sweep: Option<(SweepParam, String)>) -> ExitCode {
    let spec = match load_spec(&args) {
        Ok(spec) => spec,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };

    let outcome = match &sweep {
        None => experiment::run_experiment(&spec, args.workers),
        Some((param, values)) => {
            let batteries = match experiment::prepare_sweep(&spec, *param, values) {
                Ok(batteries) => batteries,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            experiment::run_sweep(&spec, *param, &batteries, args.workers)
        }
    };

    match outcome {
        Ok(output) => {
            for row in &output.rows {
                println!(
                    "{:<24} {:<10} mean_igd {:.6}  std {:.6}  ({} repeats)",
                    row.template, row.problem.to_string(), row.mean_igd, row.std_igd, row.repeats
                );
            }
            println!("outputs in {}", spec.output_dir.display());
            if output.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: {} run(s) failed", output.failures.len());
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn igd_command(approx: &std::path::Path, reference: &std::path::Path) -> ExitCode {
    let reference = match read_pf_file(reference) {
        Ok(r) => r,
        Err(message) => {
            eprintln!("error: reference: {message}");
            return ExitCode::from(2);
        }
    };
    let approx_points = match load_objective_rows(approx, reference.objectives()) {
        Ok(p) => p,
        Err(message) => {
            eprintln!("error: approx: {message}");
            return ExitCode::from(2);
        }
    };
    println!("{}", format_f64(metrics::igd(&approx_points, &reference)));
    ExitCode::SUCCESS
}

/// Objective rows from a CSV or whitespace-separated file; a single leading
/// non-numeric line is treated as a header and skipped.
fn load_objective_rows(
    path: &std::path::Path,
    expected_dim: usize,
) -> Result<Vec<ObjectiveVector>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let values: Result<Vec<f64>, _> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(str::parse::<f64>)
            .collect();
        match values {
            Ok(values) if values.len() == expected_dim => {
                rows.push(ObjectiveVector::new(values))
            }
            Ok(values) => {
                return Err(format!(
                    "line {}: {} objectives, reference has {expected_dim}",
                    idx + 1,
                    values.len()
                ));
            }
            Err(e) if rows.is_empty() && idx == 0 => {
                // Header line.
                let _ = e;
            }
            Err(e) => return Err(format!("line {}: {e}", idx + 1)),
        }
    }
    if rows.is_empty() {
        return Err("no objective rows found".to_string());
    }
    Ok(rows)
}

fn export_pf_command(problem: ProblemId, count: Option<usize>, out: &std::path::Path) -> ExitCode {
    let count = count.unwrap_or_else(|| problem.default_pf_size());
    if count < 2 {
        eprintln!("error: count must be at least 2");
        return ExitCode::from(2);
    }
    let reference = sample_true_pf(problem, count);
    match write_pf_file(out, &reference) {
        Ok(()) => {
            println!("wrote {count} points to {}", out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", out.display());
            ExitCode::from(1)
        }
    }
}
