//! Differential-evolution variation: trial-vector generation with binomial
//! crossover against a non-dominated guide, and polynomial mutation.

use rand::Rng;
use thiserror::Error;

use crate::mop::{repair, BoxBounds, DecisionVector, Individual};

/// Control parameters for DE variation and polynomial mutation.
#[derive(Clone, Copy, Debug)]
pub struct DeParams {
    /// Difference scaling factor F.
    pub scale: f64,
    /// Crossover probability CR in [0, 1].
    pub crossover: f64,
    /// Per-component mutation probability in [0, 1].
    pub mutation_rate: f64,
    /// Polynomial-mutation distribution index (larger = smaller steps).
    pub eta: f64,
}

impl DeParams {
    pub fn new(scale: f64, crossover: f64, mutation_rate: f64, eta: f64) -> Self {
        assert!((0.0..=1.0).contains(&crossover), "CR must lie in [0, 1]");
        assert!((0.0..=1.0).contains(&mutation_rate), "mutation rate must lie in [0, 1]");
        assert!(eta > 0.0, "distribution index must be positive");
        Self { scale, crossover, mutation_rate, eta }
    }

    /// Conventional settings: F = 0.5, CR = 0.9, mutation rate 1/n, eta = 20.
    pub fn defaults(n: usize) -> Self {
        Self::new(0.5, 0.9, 1.0 / n as f64, 20.0)
    }
}

/// Builds the trial vector `v`: per component, with probability CR (and
/// always at one uniformly chosen forced index) take
/// `r1 + F*(best - r1) + F*(r2 - r3)`, otherwise copy `r1`.
pub fn de_trial<R: Rng + ?Sized>(
    r1: &DecisionVector,
    r2: &DecisionVector,
    r3: &DecisionVector,
    best: &DecisionVector,
    params: &DeParams,
    rng: &mut R,
) -> DecisionVector {
    let n = r1.dim();
    assert!(r2.dim() == n && r3.dim() == n && best.dim() == n, "parent dimension mismatch");
    let forced = rng.random_range(0..n);
    let mut coords = Vec::with_capacity(n);
    for k in 0..n {
        let gate: f64 = rng.random();
        if k == forced || gate < params.crossover {
            coords.push(
                r1[k] + params.scale * (best[k] - r1[k]) + params.scale * (r2[k] - r3[k]),
            );
        } else {
            coords.push(r1[k]);
        }
    }
    DecisionVector::new(coords)
}

/// Displacement fraction of polynomial mutation for a uniform draw `r`.
/// Lies in [-1, 1], is zero at r = 0.5 and concentrates toward zero as
/// `eta` grows.
pub fn polynomial_delta(r: f64, eta: f64) -> f64 {
    let exponent = 1.0 / (eta + 1.0);
    if r < 0.5 {
        (2.0 * r).powf(exponent) - 1.0
    } else {
        1.0 - (2.0 - 2.0 * r).powf(exponent)
    }
}

/// Polynomial mutation: each component moves by `delta * (upper - lower)`
/// with probability `mutation_rate`; the result is clamped into `bounds`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    v: &DecisionVector,
    params: &DeParams,
    bounds: &BoxBounds,
    rng: &mut R,
) -> DecisionVector {
    assert_eq!(v.dim(), bounds.dim(), "decision dimension mismatch");
    let mut coords = v.coords().to_vec();
    for (k, c) in coords.iter_mut().enumerate() {
        let gate: f64 = rng.random();
        if gate < params.mutation_rate {
            let delta = polynomial_delta(rng.random(), params.eta);
            *c += delta * (bounds.upper()[k] - bounds.lower()[k]);
        }
    }
    repair(&DecisionVector::new(coords), bounds)
}

/// Parent indices for one DE trial: three mutually distinct solutions plus a
/// non-dominated guide, all pairwise distinct as decision vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeParents {
    pub r1: usize,
    pub r2: usize,
    pub r3: usize,
    pub best: usize,
}

/// Not even the whole population can supply four pairwise-distinct parents.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("cannot draw four pairwise-distinct DE parents")]
pub struct ClusterTooSmall;

const DRAW_ATTEMPTS: usize = 32;

fn all_distinct(population: &[Individual], picks: &[usize]) -> bool {
    for (i, &a) in picks.iter().enumerate() {
        for &b in &picks[i + 1..] {
            if population[a].x() == population[b].x() {
                return false;
            }
        }
    }
    true
}

/// Draws `r1, r2, r3` from the cluster (falling back to the population when
/// the cluster holds fewer than three distinct solutions) and `best` from the
/// population's non-dominated set.
///
/// On [`ClusterTooSmall`] the caller reroutes the offspring quota to the
/// probability-model arm.
pub fn pick_de_parents<R: Rng + ?Sized>(
    cluster: &[usize],
    population: &[Individual],
    nondominated: &[usize],
    rng: &mut R,
) -> Result<DeParents, ClusterTooSmall> {
    assert!(!cluster.is_empty(), "cluster must be non-empty");
    assert!(!nondominated.is_empty(), "non-dominated set must be non-empty");

    let cluster_has_three = distinct_at_least(cluster, population, 3);
    let trio = if cluster_has_three {
        (0..DRAW_ATTEMPTS).find_map(|_| {
            let pick = rand::seq::index::sample(rng, cluster.len(), 3);
            let trio = [cluster[pick.index(0)], cluster[pick.index(1)], cluster[pick.index(2)]];
            all_distinct(population, &trio).then_some(trio)
        })
    } else if population.len() >= 3 {
        (0..DRAW_ATTEMPTS).find_map(|_| {
            let r1 = cluster[rng.random_range(0..cluster.len())];
            let pick = rand::seq::index::sample(rng, population.len(), 2);
            let trio = [r1, pick.index(0), pick.index(1)];
            all_distinct(population, &trio).then_some(trio)
        })
    } else {
        None
    };

    if let Some([r1, r2, r3]) = trio {
        for _ in 0..DRAW_ATTEMPTS {
            let best = nondominated[rng.random_range(0..nondominated.len())];
            if all_distinct(population, &[r1, r2, r3, best]) {
                return Ok(DeParents { r1, r2, r3, best });
            }
        }
    }
    exhaustive_parents(cluster, population, nondominated, rng)
}

/// Like [`pick_de_parents`] with `r1` fixed (tournament-selected callers);
/// `r2, r3` come from the whole population.
pub fn complete_de_parents<R: Rng + ?Sized>(
    r1: usize,
    population: &[Individual],
    nondominated: &[usize],
    rng: &mut R,
) -> Result<DeParents, ClusterTooSmall> {
    assert!(!nondominated.is_empty(), "non-dominated set must be non-empty");
    if population.len() >= 3 {
        for _ in 0..DRAW_ATTEMPTS {
            let pick = rand::seq::index::sample(rng, population.len(), 2);
            let (r2, r3) = (pick.index(0), pick.index(1));
            if !all_distinct(population, &[r1, r2, r3]) {
                continue;
            }
            for _ in 0..DRAW_ATTEMPTS {
                let best = nondominated[rng.random_range(0..nondominated.len())];
                if all_distinct(population, &[r1, r2, r3, best]) {
                    return Ok(DeParents { r1, r2, r3, best });
                }
            }
        }
    }
    exhaustive_parents(&[r1], population, nondominated, rng)
}

fn distinct_at_least(indices: &[usize], population: &[Individual], wanted: usize) -> bool {
    let mut reps: Vec<usize> = Vec::with_capacity(wanted);
    for &i in indices {
        if reps.iter().all(|&r| population[r].x() != population[i].x()) {
            reps.push(i);
            if reps.len() >= wanted {
                return true;
            }
        }
    }
    false
}

/// Deterministic completion for pathologically duplicated data: scan shuffled
/// candidates for any feasible (best, r1, r2, r3) combination.
fn exhaustive_parents<R: Rng + ?Sized>(
    cluster: &[usize],
    population: &[Individual],
    nondominated: &[usize],
    rng: &mut R,
) -> Result<DeParents, ClusterTooSmall> {
    let shuffled = |items: &[usize], rng: &mut R| {
        let mut v = items.to_vec();
        rand::seq::SliceRandom::shuffle(v.as_mut_slice(), rng);
        v
    };
    let all: Vec<usize> = (0..population.len()).collect();
    for &best in &shuffled(nondominated, rng) {
        for &r1 in &shuffled(cluster, rng) {
            if population[r1].x() == population[best].x() {
                continue;
            }
            let mut picks = [r1, best, 0, 0];
            let mut found = 0;
            for &cand in &shuffled(&all, rng) {
                picks[2 + found] = cand;
                if all_distinct(population, &picks[..3 + found]) {
                    found += 1;
                    if found == 2 {
                        return Ok(DeParents { r1, r2: picks[2], r3: picks[3], best });
                    }
                }
            }
        }
    }
    Err(ClusterTooSmall)
}
