//! The three optimizers as seeded, deterministic generation loops:
//!
//! * the hybrid generator (clustered probability model + DE, mixed per
//!   cluster by the eigenvalue convergence ratio),
//! * the pure model-based baseline (all offspring from the cluster models),
//! * the DE baseline under NSGA-II selection (no clustering, no model).
//!
//! All three share Latin hypercube initialization and elite retention, and
//! record an IGD trace against the analytic reference front.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::allocator::{allocate, convergence_ratio, MixParams};
use crate::de::{complete_de_parents, de_trial, pick_de_parents, polynomial_mutation, DeParams};
use crate::local_pca::partition;
use crate::metrics::igd;
use crate::model::{build_model, model_volume, sample_model, ManifoldModel};
use crate::mop::{DecisionVector, EvalError, Evaluator, Individual, MopProblem, ObjectiveVector, Population};
use crate::problems::{
    latin_hypercube_init, make_problem_with_dim, sample_true_pf, LzProblem, PfReference, ProblemId,
};
use crate::rng::RngStreams;
use crate::selection::{
    crowding_distance, elite_select, fast_nondominated_sort, nondominated_indices,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    DeRmMeda,
    RmMeda,
    Nsga2De,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::DeRmMeda, Algorithm::RmMeda, Algorithm::Nsga2De];
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Algorithm::DeRmMeda => "de-rm-meda",
            Algorithm::RmMeda => "rm-meda",
            Algorithm::Nsga2De => "nsga2-de",
        };
        f.write_str(tag)
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "de-rm-meda" | "dermmeda" => Ok(Algorithm::DeRmMeda),
            "rm-meda" | "rmmeda" => Ok(Algorithm::RmMeda),
            "nsga2-de" | "nsga-ii-de" | "nsga2de" => Ok(Algorithm::Nsga2De),
            other => Err(format!(
                "unknown algorithm '{other}' (expected de-rm-meda, rm-meda or nsga2-de)"
            )),
        }
    }
}

/// Complete description of one seeded run.
#[derive(Clone, Debug)]
pub struct AlgoConfig {
    pub problem: ProblemId,
    /// Decision-dimension override for dimension studies; `None` means the
    /// problem's standard dimension. Callers overriding this should derive
    /// `de` from the actual dimension (see [`AlgoConfig::with_dim`]).
    pub dimension: Option<usize>,
    pub algorithm: Algorithm,
    pub population: usize,
    pub generations: usize,
    pub clusters: usize,
    pub de: DeParams,
    pub mix: MixParams,
    pub seed: u64,
    /// Record IGD every this many generations (generation 0 always traced).
    pub trace_stride: usize,
    /// Size of the reference front used for the IGD trace.
    pub pf_size: usize,
    /// Iteration cap of the Local PCA clustering.
    pub max_pca_iters: usize,
}

impl AlgoConfig {
    /// Conventional settings for `problem`: population 300 (600 for the
    /// three-objective instance), 500 generations, 5 clusters, standard DE
    /// and mixing parameters.
    pub fn new(problem: ProblemId, algorithm: Algorithm, seed: u64) -> Self {
        Self {
            problem,
            dimension: None,
            algorithm,
            population: problem.default_population(),
            generations: 500,
            clusters: 5,
            de: DeParams::defaults(problem.default_dim()),
            mix: MixParams::defaults(),
            seed,
            trace_stride: 1,
            pf_size: problem.default_pf_size(),
            max_pca_iters: 50,
        }
    }

    /// Like [`new`](Self::new) with a custom decision dimension; the
    /// mutation rate follows the actual dimension.
    pub fn with_dim(problem: ProblemId, n: usize, algorithm: Algorithm, seed: u64) -> Self {
        let mut config = Self::new(problem, algorithm, seed);
        config.dimension = Some(n);
        config.de = DeParams::defaults(n);
        config
    }

    pub fn dim(&self) -> usize {
        self.dimension.unwrap_or_else(|| self.problem.default_dim())
    }

    pub fn build_problem(&self) -> LzProblem {
        make_problem_with_dim(self.problem, self.dim())
    }

    fn validate(&self) {
        assert!(self.clusters >= 1, "need at least one cluster");
        assert!(self.population >= self.clusters, "population must cover the cluster count");
        assert!(self.trace_stride >= 1, "trace stride must be positive");
        assert!(self.pf_size >= 2, "reference front needs at least 2 points");
        assert!(self.max_pca_iters >= 1);
    }
}

/// One IGD measurement along a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub generation: usize,
    pub igd: f64,
    /// Objective evaluations performed up to and including this generation.
    pub evaluations: u64,
}

/// Outcome of one run. Everything except `wall_time` is a pure function of
/// the configuration.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub final_population: Population,
    /// IGD at generation 0 and every stride-th generation after.
    pub igd_trace: Vec<TracePoint>,
    pub evaluations: u64,
    pub wall_time: Duration,
}

impl RunResult {
    /// IGD of the final population.
    pub fn final_igd(&self) -> f64 {
        self.igd_trace.last().expect("trace always holds generation 0").igd
    }

    /// IGD recorded at `generation`, if the stride hit it.
    pub fn igd_at(&self, generation: usize) -> Option<f64> {
        self.igd_trace.iter().find(|p| p.generation == generation).map(|p| p.igd)
    }
}

/// An objective evaluation failed mid-run.
#[derive(Debug, Error)]
#[error("generation {generation}: {source}")]
pub struct RunError {
    pub generation: usize,
    #[source]
    pub source: EvalError,
}

/// Dispatches on `config.algorithm`.
pub fn run(config: &AlgoConfig) -> Result<RunResult, RunError> {
    match config.algorithm {
        Algorithm::DeRmMeda => run_de_rm_meda(config),
        Algorithm::RmMeda => run_rm_meda(config),
        Algorithm::Nsga2De => run_nsga2_de(config),
    }
}

/// The hybrid generator: per cluster, offspring split between model sampling
/// and DE variation by volume share and convergence ratio.
pub fn run_de_rm_meda(config: &AlgoConfig) -> Result<RunResult, RunError> {
    assert_eq!(config.algorithm, Algorithm::DeRmMeda);
    hybrid_loop(config, config.mix)
}

/// The pure model-based baseline: identical loop with every offspring drawn
/// from the cluster models, cluster counts proportional to volume.
pub fn run_rm_meda(config: &AlgoConfig) -> Result<RunResult, RunError> {
    assert_eq!(config.algorithm, Algorithm::RmMeda);
    hybrid_loop(config, MixParams::model_only())
}

fn hybrid_loop(config: &AlgoConfig, mix: MixParams) -> Result<RunResult, RunError> {
    config.validate();
    let start = Instant::now();
    let problem = config.build_problem();
    let reference = sample_true_pf(config.problem, config.pf_size);
    let m = problem.objectives();
    let mut streams = RngStreams::new(config.seed);
    let mut evaluator = Evaluator::new(&problem);

    let mut population = init_population(config, &problem, &mut evaluator, &mut streams)?;
    let mut trace = Vec::new();
    record_trace(&mut trace, 0, config, &population, &reference, evaluator.count());

    for generation in 1..=config.generations {
        let points: Vec<DecisionVector> =
            population.members().iter().map(|ind| ind.x().clone()).collect();
        let clustering =
            partition(&points, config.clusters, m, &mut streams.partition, config.max_pca_iters);

        // Fit one sampling model per non-empty cluster.
        let mut clusters: Vec<&[usize]> = Vec::new();
        let mut models: Vec<ManifoldModel> = Vec::new();
        let mut volumes = Vec::new();
        let mut ratios = Vec::new();
        for (cluster, subspace) in clustering.clusters().iter().zip(clustering.subspaces()) {
            if cluster.is_empty() {
                continue;
            }
            let members: Vec<DecisionVector> =
                cluster.iter().map(|&i| points[i].clone()).collect();
            let model = build_model(&members, subspace);
            volumes.push(model_volume(&model));
            ratios.push(convergence_ratio(subspace.eigenvalues(), m));
            clusters.push(cluster);
            models.push(model);
        }
        let quotas = allocate(config.population, &volumes, &ratios, &mix);
        let nondominated = nondominated_indices(population.members());

        let mut offspring: Vec<Individual> = Vec::with_capacity(config.population);
        for ((quota, cluster), model) in quotas.iter().zip(&clusters).zip(&models) {
            for x in sample_model(model, quota.model, problem.bounds(), &mut streams.model) {
                offspring.push(spawn(&mut evaluator, x, generation)?);
            }
            let mut rerouted = 0;
            for produced in 0..quota.de {
                let parents = match pick_de_parents(
                    cluster,
                    population.members(),
                    &nondominated,
                    &mut streams.de,
                ) {
                    Ok(p) => p,
                    Err(_) => {
                        // Too few distinct solutions for DE; the rest of this
                        // cluster's quota goes back to the model arm.
                        rerouted = quota.de - produced;
                        break;
                    }
                };
                let members = population.members();
                let trial = de_trial(
                    members[parents.r1].x(),
                    members[parents.r2].x(),
                    members[parents.r3].x(),
                    members[parents.best].x(),
                    &config.de,
                    &mut streams.de,
                );
                let child =
                    polynomial_mutation(&trial, &config.de, problem.bounds(), &mut streams.mutation);
                offspring.push(spawn(&mut evaluator, child, generation)?);
            }
            if rerouted > 0 {
                for x in sample_model(model, rerouted, problem.bounds(), &mut streams.model) {
                    offspring.push(spawn(&mut evaluator, x, generation)?);
                }
            }
        }
        debug_assert_eq!(offspring.len(), config.population);

        let mut combined = population.into_members();
        combined.extend(offspring);
        population = elite_select(combined, config.population);
        record_trace(&mut trace, generation, config, &population, &reference, evaluator.count());
    }

    Ok(RunResult {
        evaluations: evaluator.count(),
        final_population: population,
        igd_trace: trace,
        wall_time: start.elapsed(),
    })
}

/// The DE baseline: population-wide binary-tournament parents, DE trial plus
/// polynomial mutation, elite retention. No clustering, no model.
pub fn run_nsga2_de(config: &AlgoConfig) -> Result<RunResult, RunError> {
    assert_eq!(config.algorithm, Algorithm::Nsga2De);
    config.validate();
    let start = Instant::now();
    let problem = config.build_problem();
    let reference = sample_true_pf(config.problem, config.pf_size);
    let mut streams = RngStreams::new(config.seed);
    let mut evaluator = Evaluator::new(&problem);

    let mut population = init_population(config, &problem, &mut evaluator, &mut streams)?;
    let mut trace = Vec::new();
    record_trace(&mut trace, 0, config, &population, &reference, evaluator.count());

    for generation in 1..=config.generations {
        let objectives = population.objectives();
        let ranking = fast_nondominated_sort(&objectives);
        let mut crowding = vec![0.0; population.len()];
        for front in ranking.fronts() {
            let front_objectives: Vec<ObjectiveVector> =
                front.iter().map(|&i| objectives[i].clone()).collect();
            for (&i, d) in front.iter().zip(crowding_distance(&front_objectives)) {
                crowding[i] = d;
            }
        }
        let nondominated = &ranking.fronts()[0];

        let mut offspring: Vec<Individual> = Vec::with_capacity(config.population);
        for _ in 0..config.population {
            let pick = rand::seq::index::sample(&mut streams.de, population.len(), 2);
            let (a, b) = (pick.index(0), pick.index(1));
            let r1 = tournament_winner(a, b, ranking.rank(), &crowding);
            let child = match complete_de_parents(
                r1,
                population.members(),
                nondominated,
                &mut streams.de,
            ) {
                Ok(parents) => {
                    let members = population.members();
                    let trial = de_trial(
                        members[parents.r1].x(),
                        members[parents.r2].x(),
                        members[parents.r3].x(),
                        members[parents.best].x(),
                        &config.de,
                        &mut streams.de,
                    );
                    polynomial_mutation(&trial, &config.de, problem.bounds(), &mut streams.mutation)
                }
                // Degenerate population: mutate the tournament winner alone.
                Err(_) => polynomial_mutation(
                    population.members()[r1].x(),
                    &config.de,
                    problem.bounds(),
                    &mut streams.mutation,
                ),
            };
            offspring.push(spawn(&mut evaluator, child, generation)?);
        }

        let mut combined = population.into_members();
        combined.extend(offspring);
        population = elite_select(combined, config.population);
        record_trace(&mut trace, generation, config, &population, &reference, evaluator.count());
    }

    Ok(RunResult {
        evaluations: evaluator.count(),
        final_population: population,
        igd_trace: trace,
        wall_time: start.elapsed(),
    })
}

fn tournament_winner(a: usize, b: usize, rank: &[usize], crowding: &[f64]) -> usize {
    if rank[a] < rank[b] {
        a
    } else if rank[b] < rank[a] {
        b
    } else if crowding[a] >= crowding[b] {
        a
    } else {
        b
    }
}

fn init_population(
    config: &AlgoConfig,
    problem: &LzProblem,
    evaluator: &mut Evaluator,
    streams: &mut RngStreams,
) -> Result<Population, RunError> {
    let samples = latin_hypercube_init(problem.bounds(), config.population, &mut streams.init);
    let members: Vec<Individual> = samples
        .into_iter()
        .map(|x| evaluator.individual(x))
        .collect::<Result<_, _>>()
        .map_err(|source| RunError { generation: 0, source })?;
    Ok(Population::new(members, config.population))
}

fn spawn(
    evaluator: &mut Evaluator,
    x: DecisionVector,
    generation: usize,
) -> Result<Individual, RunError> {
    evaluator.individual(x).map_err(|source| RunError { generation, source })
}

fn record_trace(
    trace: &mut Vec<TracePoint>,
    generation: usize,
    config: &AlgoConfig,
    population: &Population,
    reference: &PfReference,
    evaluations: u64,
) {
    if generation.is_multiple_of(config.trace_stride) {
        trace.push(TracePoint {
            generation,
            igd: igd(&population.objectives(), reference),
            evaluations,
        });
    }
}
