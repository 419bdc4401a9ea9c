//! The F1-F9 test problems (Li & Zhang 2009), a two/three-objective suite
//! whose Pareto sets are complicated curves in decision space.
//!
//! Every instance decomposes the variable index range `2..=n` (1-based) into
//! groups attached to one objective each; the objective is a position term in
//! `x1` (and `x2` for three objectives) plus a distance penalty that vanishes
//! exactly on the Pareto set `x_j = target_j(x1, x2)`.

use std::f64::consts::PI;

use super::ProblemId;
use crate::mop::{BoxBounds, DecisionVector, MopProblem, ObjectiveVector};

/// One instance of the suite, pinned to a concrete dimension.
#[derive(Debug)]
pub struct LzProblem {
    id: ProblemId,
    n: usize,
    m: usize,
    bounds: BoxBounds,
}

impl LzProblem {
    /// Builds `id` with decision dimension `n`. Panics below the smallest
    /// dimension for which the instance's index groups are all non-empty.
    pub fn new(id: ProblemId, n: usize) -> Self {
        assert!(n >= id.min_dim(), "{id} requires n >= {}", id.min_dim());
        let m = id.objectives();
        let bounds = match id {
            // Polynomial Pareto set: unit box.
            ProblemId::F1 | ProblemId::F7 | ProblemId::F8 => BoxBounds::uniform(n, 0.0, 1.0),
            // Trigonometric Pareto set: tail variables range over [-1, 1].
            ProblemId::F2 | ProblemId::F3 | ProblemId::F4 | ProblemId::F5 | ProblemId::F9 => {
                let mut lo = vec![-1.0; n];
                let mut hi = vec![1.0; n];
                lo[0] = 0.0;
                hi[0] = 1.0;
                BoxBounds::new(lo, hi)
            }
            ProblemId::F6 => {
                let mut lo = vec![-2.0; n];
                let mut hi = vec![2.0; n];
                lo[0] = 0.0;
                hi[0] = 1.0;
                lo[1] = 0.0;
                hi[1] = 1.0;
                BoxBounds::new(lo, hi)
            }
        };
        Self { id, n, m, bounds }
    }

    pub fn id(&self) -> ProblemId {
        self.id
    }

    /// Pareto-set target value for variable `j` (1-based, `j >= 2`; `j >= 3`
    /// for the three-objective instance), given the leading free variables.
    fn target(&self, x1: f64, x2: f64, j: usize) -> f64 {
        let n = self.n as f64;
        let jf = j as f64;
        match self.id {
            ProblemId::F1 | ProblemId::F7 | ProblemId::F8 => {
                x1.powf(0.5 * (1.0 + 3.0 * (jf - 2.0) / (n - 2.0)))
            }
            ProblemId::F2 | ProblemId::F9 => (6.0 * PI * x1 + jf * PI / n).sin(),
            ProblemId::F3 => {
                let angle = 6.0 * PI * x1 + jf * PI / n;
                if j % 2 == 1 {
                    0.8 * x1 * angle.cos()
                } else {
                    0.8 * x1 * angle.sin()
                }
            }
            ProblemId::F4 => {
                let angle = 6.0 * PI * x1 + jf * PI / n;
                if j % 2 == 1 {
                    0.8 * x1 * (angle / 3.0).cos()
                } else {
                    0.8 * x1 * angle.sin()
                }
            }
            ProblemId::F5 => {
                let angle = 6.0 * PI * x1 + jf * PI / n;
                let amp = 0.3 * x1 * x1 * (24.0 * PI * x1 + 4.0 * jf * PI / n).cos() + 0.6 * x1;
                if j % 2 == 1 {
                    amp * angle.cos()
                } else {
                    amp * angle.sin()
                }
            }
            ProblemId::F6 => 2.0 * x2 * (2.0 * PI * x1 + jf * PI / n).sin(),
        }
    }

    /// A point of the analytic Pareto set. `u` holds the free variables:
    /// `[x1]` for two objectives, `[x1, x2]` for three; each in `[0, 1]`.
    pub fn pareto_set_point(&self, u: &[f64]) -> DecisionVector {
        assert_eq!(u.len(), self.m - 1, "expected {} Pareto-set parameters", self.m - 1);
        let mut coords = vec![0.0; self.n];
        coords[0] = u[0];
        let x2 = if self.m == 3 {
            coords[1] = u[1];
            u[1]
        } else {
            0.0
        };
        for j in self.m..=self.n {
            coords[j - 1] = self.target(u[0], x2, j);
        }
        DecisionVector::new(coords)
    }

    /// The Pareto-front image of [`pareto_set_point`](Self::pareto_set_point)
    /// for the same parameters.
    pub fn pareto_front_point(&self, u: &[f64]) -> ObjectiveVector {
        assert_eq!(u.len(), self.m - 1, "expected {} Pareto-set parameters", self.m - 1);
        let t = u[0];
        match self.id {
            ProblemId::F9 => ObjectiveVector::new(vec![t, 1.0 - t * t]),
            ProblemId::F6 => {
                let (a, b) = (0.5 * PI * t, 0.5 * PI * u[1]);
                ObjectiveVector::new(vec![a.cos() * b.cos(), a.cos() * b.sin(), a.sin()])
            }
            _ => ObjectiveVector::new(vec![t, 1.0 - t.sqrt()]),
        }
    }
}

impl MopProblem for LzProblem {
    fn dim(&self) -> usize {
        self.n
    }

    fn objectives(&self) -> usize {
        self.m
    }

    fn bounds(&self) -> &BoxBounds {
        &self.bounds
    }

    fn evaluate(&self, x: &DecisionVector) -> ObjectiveVector {
        assert_eq!(x.dim(), self.n, "decision dimension mismatch");
        let x1 = x[0];
        match self.id {
            ProblemId::F6 => {
                let x2 = x[1];
                // Group by j mod 3: 1 -> f1, 2 -> f2, 0 -> f3.
                let mut sums = [0.0_f64; 3];
                let mut counts = [0usize; 3];
                for j in 3..=self.n {
                    let y = x[j - 1] - self.target(x1, x2, j);
                    let g = (j + 2) % 3; // j % 3 == 1 -> 0, == 2 -> 1, == 0 -> 2
                    sums[g] += y * y;
                    counts[g] += 1;
                }
                let penalty = |g: usize| 2.0 * sums[g] / counts[g] as f64;
                let (a, b) = (0.5 * PI * x1, 0.5 * PI * x2);
                ObjectiveVector::new(vec![
                    a.cos() * b.cos() + penalty(0),
                    a.cos() * b.sin() + penalty(1),
                    a.sin() + penalty(2),
                ])
            }
            ProblemId::F8 => {
                // Griewank-style: per group, 4*sum(y^2) - 2*prod(cos(20*pi*y/sqrt(j))) + 2.
                let mut sum = [0.0_f64; 2];
                let mut prod = [1.0_f64; 2];
                let mut counts = [0usize; 2];
                for j in 2..=self.n {
                    let y = x[j - 1] - self.target(x1, 0.0, j);
                    let g = if j % 2 == 1 { 0 } else { 1 };
                    sum[g] += y * y;
                    prod[g] *= (20.0 * PI * y / (j as f64).sqrt()).cos();
                    counts[g] += 1;
                }
                let penalty =
                    |g: usize| 2.0 * (4.0 * sum[g] - 2.0 * prod[g] + 2.0) / counts[g] as f64;
                ObjectiveVector::new(vec![x1 + penalty(0), 1.0 - x1.sqrt() + penalty(1)])
            }
            _ => {
                let mut sums = [0.0_f64; 2];
                let mut counts = [0usize; 2];
                for j in 2..=self.n {
                    let y = x[j - 1] - self.target(x1, 0.0, j);
                    let term = if self.id == ProblemId::F7 {
                        // Rastrigin-style multimodal distance term.
                        4.0 * y * y - (8.0 * PI * y).cos() + 1.0
                    } else {
                        y * y
                    };
                    let g = if j % 2 == 1 { 0 } else { 1 };
                    sums[g] += term;
                    counts[g] += 1;
                }
                let penalty = |g: usize| 2.0 * sums[g] / counts[g] as f64;
                let f2_shape =
                    if self.id == ProblemId::F9 { 1.0 - x1 * x1 } else { 1.0 - x1.sqrt() };
                ObjectiveVector::new(vec![x1 + penalty(0), f2_shape + penalty(1)])
            }
        }
    }
}
