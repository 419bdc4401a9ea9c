//! Foundational types for box-bounded multi-objective minimization:
//! decision/objective vectors, Pareto dominance, counted evaluation and
//! bound repair.

use thiserror::Error;

/// Axis-aligned box `Π [lower_i, upper_i]` describing the decision space.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxBounds {
    /// Panics unless `lower.len() == upper.len() >= 1` and `lower[i] < upper[i]`.
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "bound vectors must have equal length");
        assert!(!lower.is_empty(), "bounds must have at least one dimension");
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            assert!(lo < hi, "lower[{i}]={lo} must be strictly below upper[{i}]={hi}");
        }
        Self { lower, upper }
    }

    /// Same interval `[lo, hi]` in every one of `n` dimensions.
    pub fn uniform(n: usize, lo: f64, hi: f64) -> Self {
        Self::new(vec![lo; n], vec![hi; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &DecisionVector) -> bool {
        x.coords()
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }
}

/// A point in decision space.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionVector {
    coords: Vec<f64>,
}

impl DecisionVector {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

impl From<Vec<f64>> for DecisionVector {
    fn from(coords: Vec<f64>) -> Self {
        Self::new(coords)
    }
}

impl std::ops::Index<usize> for DecisionVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

/// An image `F(x)` in objective space. All components are finite.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveVector {
    values: Vec<f64>,
}

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(values: Vec<f64>) -> Self {
        Self::new(values)
    }
}

impl std::ops::Index<usize> for ObjectiveVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// A decision vector paired with its cached objective value.
///
/// Construction goes through [`Evaluator::individual`], so `f` always equals
/// the problem's image of `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    x: DecisionVector,
    f: ObjectiveVector,
}

impl Individual {
    pub(crate) fn from_parts(x: DecisionVector, f: ObjectiveVector) -> Self {
        Self { x, f }
    }

    pub fn x(&self) -> &DecisionVector {
        &self.x
    }

    pub fn f(&self) -> &ObjectiveVector {
        &self.f
    }
}

/// The evolving solution set, ordered and sized to capacity `N` after
/// environmental selection.
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    members: Vec<Individual>,
    capacity: usize,
}

impl Population {
    pub fn new(members: Vec<Individual>, capacity: usize) -> Self {
        Self { members, capacity }
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.members.iter().map(|m| m.f().clone()).collect()
    }

    pub fn into_members(self) -> Vec<Individual> {
        self.members
    }
}

/// A deterministic, pure multi-objective minimization problem over a box.
pub trait MopProblem: Sync {
    /// Decision-space dimension `n`.
    fn dim(&self) -> usize;
    /// Objective count `m >= 2`.
    fn objectives(&self) -> usize;
    fn bounds(&self) -> &BoxBounds;
    /// Raw objective computation. Must be pure: the same `x` yields a
    /// bitwise-identical image. Counting and finiteness checking live in
    /// [`Evaluator`].
    fn evaluate(&self, x: &DecisionVector) -> ObjectiveVector;
}

/// Evaluation produced a non-finite objective component.
#[derive(Debug, Clone, Error)]
#[error("non-finite objective value {values:?} at x = {x:?}")]
pub struct EvalError {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
}

/// Wraps a problem with the run's evaluation counter and NaN/Inf guard.
pub struct Evaluator<'a> {
    problem: &'a dyn MopProblem,
    count: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a dyn MopProblem) -> Self {
        Self { problem, count: 0 }
    }

    pub fn problem(&self) -> &dyn MopProblem {
        self.problem
    }

    /// Objective evaluations performed so far.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Evaluates `F(x)`, bumping the counter by one.
    pub fn evaluate(&mut self, x: &DecisionVector) -> Result<ObjectiveVector, EvalError> {
        self.count += 1;
        let f = self.problem.evaluate(x);
        if f.values().iter().any(|v| !v.is_finite()) {
            return Err(EvalError { x: x.coords().to_vec(), values: f.values().to_vec() });
        }
        Ok(f)
    }

    /// Evaluates `x` and packages it as an [`Individual`].
    pub fn individual(&mut self, x: DecisionVector) -> Result<Individual, EvalError> {
        let f = self.evaluate(&x)?;
        Ok(Individual::from_parts(x, f))
    }
}

/// Pareto dominance for minimization: `u` dominates `v` iff `u_i <= v_i`
/// everywhere and `u != v`. Exact float comparison, no epsilon.
pub fn dominates(u: &ObjectiveVector, v: &ObjectiveVector) -> bool {
    assert_eq!(u.dim(), v.dim(), "objective dimension mismatch");
    let mut strictly_better = false;
    for (a, b) in u.values().iter().zip(v.values()) {
        if a > b {
            return false;
        }
        if a < b {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Clamps each coordinate into the box. Idempotent; in-bounds inputs come
/// back unchanged.
pub fn repair(x: &DecisionVector, bounds: &BoxBounds) -> DecisionVector {
    assert_eq!(x.dim(), bounds.dim(), "decision dimension mismatch");
    DecisionVector::new(
        x.coords()
            .iter()
            .zip(bounds.lower().iter().zip(bounds.upper()))
            .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
            .collect(),
    )
}
