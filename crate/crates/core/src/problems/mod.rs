//! Benchmark problem registry, analytic Pareto-front references for IGD,
//! and Latin hypercube population initialization.

mod lhs;
mod lz;
mod pf_io;

use std::fmt;
use std::str::FromStr;

use crate::mop::{dominates, ObjectiveVector};

pub use lhs::latin_hypercube_init;
pub use lz::LzProblem;
pub use pf_io::{format_f64, parse_pf_text, read_pf_file, write_pf_file, write_pf_text};

/// Identifier of one of the nine suite instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
}

impl ProblemId {
    pub const ALL: [ProblemId; 9] = [
        ProblemId::F1,
        ProblemId::F2,
        ProblemId::F3,
        ProblemId::F4,
        ProblemId::F5,
        ProblemId::F6,
        ProblemId::F7,
        ProblemId::F8,
        ProblemId::F9,
    ];

    /// Standard decision dimension: 30 for F1-F5 and F9, 10 for F6-F8.
    pub fn default_dim(self) -> usize {
        match self {
            ProblemId::F6 | ProblemId::F7 | ProblemId::F8 => 10,
            _ => 30,
        }
    }

    /// Objective count: 3 for F6, 2 otherwise.
    pub fn objectives(self) -> usize {
        if self == ProblemId::F6 {
            3
        } else {
            2
        }
    }

    /// F7 and F8 carry multimodal distance terms with many local fronts.
    pub fn is_multimodal(self) -> bool {
        matches!(self, ProblemId::F7 | ProblemId::F8)
    }

    /// Whether the instance is conventionally run at varying dimensions
    /// (the 30-variable instances). F6-F8 are treated as fixed at n = 10.
    pub fn dimension_sweepable(self) -> bool {
        !matches!(self, ProblemId::F6 | ProblemId::F7 | ProblemId::F8)
    }

    /// Smallest decision dimension for which the index groups are non-empty.
    pub fn min_dim(self) -> usize {
        if self == ProblemId::F6 {
            5
        } else {
            3
        }
    }

    /// Conventional population size: 600 for the three-objective instance,
    /// 300 otherwise.
    pub fn default_population(self) -> usize {
        if self == ProblemId::F6 {
            600
        } else {
            300
        }
    }

    /// Conventional reference-front size: 1000 points for three objectives,
    /// 500 for two.
    pub fn default_pf_size(self) -> usize {
        if self == ProblemId::F6 {
            1000
        } else {
            500
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", *self as usize + 1)
    }
}

impl FromStr for ProblemId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let idx = s
            .strip_prefix('F')
            .or_else(|| s.strip_prefix('f'))
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|d| (1..=9).contains(d))
            .ok_or_else(|| format!("unknown problem '{s}' (expected F1..F9)"))?;
        Ok(ProblemId::ALL[idx - 1])
    }
}

/// Builds the instance at its standard dimension.
pub fn make_problem(id: ProblemId) -> LzProblem {
    LzProblem::new(id, id.default_dim())
}

/// Builds the instance at a custom decision dimension (dimension studies).
pub fn make_problem_with_dim(id: ProblemId, n: usize) -> LzProblem {
    LzProblem::new(id, n)
}

/// A discrete reference set `P*` sampled from the true Pareto front.
#[derive(Clone, Debug, PartialEq)]
pub struct PfReference {
    points: Vec<ObjectiveVector>,
}

impl PfReference {
    pub fn new(points: Vec<ObjectiveVector>) -> Self {
        assert!(!points.is_empty(), "reference front must be non-empty");
        let m = points[0].dim();
        assert!(points.iter().all(|p| p.dim() == m), "mixed objective dimensions");
        Self { points }
    }

    pub fn points(&self) -> &[ObjectiveVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn objectives(&self) -> usize {
        self.points[0].dim()
    }

    /// True when no member dominates another.
    pub fn is_mutually_nondominated(&self) -> bool {
        for (i, u) in self.points.iter().enumerate() {
            for v in &self.points[i + 1..] {
                if dominates(u, v) || dominates(v, u) {
                    return false;
                }
            }
        }
        true
    }
}

/// Uniformly samples `count >= 2` points from the analytic Pareto front.
///
/// Two-objective fronts are gridded in their natural parameter `f1`; the
/// three-objective spherical front uses a simplex lattice in weight space
/// projected onto the unit sphere, thinned to exactly `count` points.
pub fn sample_true_pf(id: ProblemId, count: usize) -> PfReference {
    assert!(count >= 2, "reference front needs at least 2 points");
    let problem = make_problem(id);
    let points = if id == ProblemId::F6 {
        sphere_octant_grid(count)
    } else {
        (0..count)
            .map(|i| {
                let t = i as f64 / (count - 1) as f64;
                problem.pareto_front_point(&[t])
            })
            .collect()
    };
    PfReference::new(points)
}

/// Simplex-lattice directions normalized to the unit sphere octant.
///
/// The lattice order `h` is the smallest with at least `count` nodes; the
/// lexicographically ordered nodes are then thinned by even striding so the
/// result has exactly `count` points.
fn sphere_octant_grid(count: usize) -> Vec<ObjectiveVector> {
    let mut h = 1usize;
    while (h + 1) * (h + 2) / 2 < count {
        h += 1;
    }
    let mut nodes = Vec::with_capacity((h + 1) * (h + 2) / 2);
    for i in 0..=h {
        for j in 0..=(h - i) {
            let k = h - i - j;
            let w = [i as f64, j as f64, k as f64];
            let norm = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
            nodes.push(ObjectiveVector::new(vec![w[0] / norm, w[1] / norm, w[2] / norm]));
        }
    }
    let total = nodes.len();
    (0..count).map(|t| nodes[t * total / count].clone()).collect()
}
