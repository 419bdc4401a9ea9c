//! Experiment configuration: flat `key = value` text with `[section]`
//! headers. Keys before the first section set battery-level values and
//! per-run defaults; each section defines one run template.
//!
//! Recognized keys: `problem`, `algorithm`, `population`, `generations`,
//! `clusters`, `alpha`, `beta`, `de_f`, `de_cr`, `eta` (template level,
//! also usable globally as defaults) and `repeats`, `base_seed`,
//! `trace_stride`, `output_dir` (battery level, global only).

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use demeda_core::de::DeParams;
use demeda_core::allocator::MixParams;
use demeda_core::{AlgoConfig, Algorithm, ProblemId};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(message.into()))
}

const TEMPLATE_KEYS: [&str; 10] = [
    "problem",
    "algorithm",
    "population",
    "generations",
    "clusters",
    "alpha",
    "beta",
    "de_f",
    "de_cr",
    "eta",
];
const BATTERY_KEYS: [&str; 4] = ["repeats", "base_seed", "trace_stride", "output_dir"];

/// One named run template; the per-repeat seed is filled in by the harness.
#[derive(Clone, Debug)]
pub struct RunTemplate {
    pub name: String,
    pub config: AlgoConfig,
}

/// A full experiment battery.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub templates: Vec<RunTemplate>,
    pub repeats: usize,
    pub base_seed: u64,
    pub trace_stride: usize,
    pub output_dir: PathBuf,
    /// When false, wall times are reported as zero so that every output byte
    /// is a pure function of the battery description.
    pub measure_time: bool,
}

impl ExperimentSpec {
    /// Seed of repeat `index` under the documented derivation
    /// `seed = base_seed + repeat_index`.
    pub fn seed_for(&self, repeat: usize) -> u64 {
        self.base_seed.wrapping_add(repeat as u64)
    }
}

#[derive(Default)]
struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<String, (String, usize)>,
}

fn split_sections(text: &str) -> Result<(Section, Vec<Section>), ConfigError> {
    let mut globals = Section::default();
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return err(format!("line {lineno}: unterminated section header"));
            };
            let name = name.trim();
            if name.is_empty() {
                return err(format!("line {lineno}: empty section name"));
            }
            if sections.iter().any(|s| s.name == name) || globals.name == name {
                return err(format!("line {lineno}: duplicate section '{name}'"));
            }
            sections.push(Section {
                name: name.to_string(),
                line: lineno,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return err(format!("line {lineno}: expected 'key = value', got '{line}'"));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let target = sections.last_mut().unwrap_or(&mut globals);
        if target.entries.insert(key.clone(), (value, lineno)).is_some() {
            return err(format!("line {lineno}: duplicate key '{key}'"));
        }
    }
    Ok((globals, sections))
}

fn parse_value<T: std::str::FromStr>(
    key: &str,
    value: &str,
    lineno: usize,
) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| ConfigError(format!("line {lineno}: {key} = '{value}': {e}")))
}

/// Parses a config file into an experiment battery.
pub fn parse_experiment(text: &str) -> Result<ExperimentSpec, ConfigError> {
    let (globals, sections) = split_sections(text)?;
    for (key, (_, lineno)) in &globals.entries {
        if !TEMPLATE_KEYS.contains(&key.as_str()) && !BATTERY_KEYS.contains(&key.as_str()) {
            return err(format!("line {lineno}: unknown key '{key}'"));
        }
    }

    let mut repeats = 20usize;
    let mut base_seed = 0u64;
    let mut trace_stride = 1usize;
    let mut output_dir = PathBuf::from("out");
    if let Some((v, l)) = globals.entries.get("repeats") {
        repeats = parse_value("repeats", v, *l)?;
        if repeats == 0 {
            return err(format!("line {l}: repeats must be at least 1"));
        }
    }
    if let Some((v, l)) = globals.entries.get("base_seed") {
        base_seed = parse_value("base_seed", v, *l)?;
    }
    if let Some((v, l)) = globals.entries.get("trace_stride") {
        trace_stride = parse_value("trace_stride", v, *l)?;
        if trace_stride == 0 {
            return err(format!("line {l}: trace_stride must be at least 1"));
        }
    }
    if let Some((v, _)) = globals.entries.get("output_dir") {
        output_dir = PathBuf::from(v);
    }

    if sections.is_empty() {
        return err("no run sections defined".to_string());
    }

    let mut templates = Vec::with_capacity(sections.len());
    for section in &sections {
        templates.push(build_template(section, &globals, trace_stride)?);
    }
    Ok(ExperimentSpec { templates, repeats, base_seed, trace_stride, output_dir, measure_time: true })
}

fn build_template(
    section: &Section,
    globals: &Section,
    trace_stride: usize,
) -> Result<RunTemplate, ConfigError> {
    for (key, (_, lineno)) in &section.entries {
        if BATTERY_KEYS.contains(&key.as_str()) {
            return err(format!("line {lineno}: '{key}' is battery-level; move it above the sections"));
        }
        if !TEMPLATE_KEYS.contains(&key.as_str()) {
            return err(format!("line {lineno}: unknown key '{key}'"));
        }
    }
    let lookup = |key: &str| -> Option<&(String, usize)> {
        section.entries.get(key).or_else(|| globals.entries.get(key))
    };

    let Some((problem_raw, problem_line)) = lookup("problem") else {
        return err(format!("section '{}' (line {}): missing 'problem'", section.name, section.line));
    };
    let problem: ProblemId = parse_value("problem", problem_raw, *problem_line)?;
    let Some((algo_raw, algo_line)) = lookup("algorithm") else {
        return err(format!("section '{}' (line {}): missing 'algorithm'", section.name, section.line));
    };
    let algorithm: Algorithm = parse_value("algorithm", algo_raw, *algo_line)?;

    // Seed 0 placeholder; the harness derives per-repeat seeds.
    let mut config = AlgoConfig::new(problem, algorithm, 0);
    config.trace_stride = trace_stride;

    if let Some((v, l)) = lookup("population") {
        config.population = parse_value("population", v, *l)?;
        if config.population == 0 {
            return err(format!("line {l}: population must be at least 1"));
        }
    }
    if let Some((v, l)) = lookup("generations") {
        config.generations = parse_value("generations", v, *l)?;
    }
    if let Some((v, l)) = lookup("clusters") {
        config.clusters = parse_value("clusters", v, *l)?;
        if config.clusters == 0 || config.clusters > config.population {
            return err(format!("line {l}: clusters must lie in 1..=population"));
        }
    }

    let mut alpha = config.mix.alpha;
    let mut beta = config.mix.beta;
    if let Some((v, l)) = lookup("alpha") {
        alpha = parse_value("alpha", v, *l)?;
    }
    if let Some((v, l)) = lookup("beta") {
        beta = parse_value("beta", v, *l)?;
    }
    if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) || alpha + beta > 1.0 {
        return err(format!(
            "section '{}': alpha = {alpha}, beta = {beta} must be in [0, 1] with alpha + beta <= 1",
            section.name
        ));
    }
    config.mix = MixParams::new(alpha, beta);

    let mut de_f = config.de.scale;
    let mut de_cr = config.de.crossover;
    let mut eta = config.de.eta;
    if let Some((v, l)) = lookup("de_f") {
        de_f = parse_value("de_f", v, *l)?;
    }
    if let Some((v, l)) = lookup("de_cr") {
        de_cr = parse_value("de_cr", v, *l)?;
        if !(0.0..=1.0).contains(&de_cr) {
            return err(format!("line {l}: de_cr must lie in [0, 1]"));
        }
    }
    if let Some((v, l)) = lookup("eta") {
        eta = parse_value("eta", v, *l)?;
        if eta <= 0.0 {
            return err(format!("line {l}: eta must be positive"));
        }
    }
    config.de = DeParams::new(de_f, de_cr, 1.0 / config.dim() as f64, eta);

    Ok(RunTemplate { name: section.name.clone(), config })
}
