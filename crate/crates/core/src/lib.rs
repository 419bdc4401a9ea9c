//! Multi-objective evolutionary optimization built around the regularity of
//! Pareto sets: under mild conditions the Pareto set of a continuous
//! m-objective problem is a piecewise continuous (m-1)-dimensional manifold,
//! so a population near it can be modeled by clustered affine subspaces and
//! sampled like a distribution.
//!
//! The crate provides:
//!
//! * [`algorithms`] — the hybrid DE + probability-model generator with its
//!   eigenvalue-ratio adaptive mix, plus the pure model-based and the
//!   NSGA-II/DE baselines;
//! * [`problems`] — the F1-F9 benchmark suite with analytic reference
//!   fronts and Latin hypercube initialization;
//! * [`local_pca`], [`model`], [`de`], [`allocator`], [`selection`] — the
//!   reproduction and selection machinery;
//! * [`metrics`] — inverted generational distance.
//!
//! Runs are deterministic per seed: every random decision draws from a named
//! substream derived from the run's master seed.

pub mod algorithms;
pub mod allocator;
pub mod de;
pub mod local_pca;
pub mod metrics;
pub mod model;
pub mod mop;
pub mod problems;
pub mod rng;
pub mod selection;

pub use algorithms::{run, AlgoConfig, Algorithm, RunError, RunResult, TracePoint};
pub use mop::{
    dominates, repair, BoxBounds, DecisionVector, EvalError, Evaluator, Individual, MopProblem,
    ObjectiveVector, Population,
};
pub use problems::{make_problem, make_problem_with_dim, sample_true_pf, PfReference, ProblemId};
