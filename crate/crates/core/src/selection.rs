//! Environmental selection: fast non-dominated sorting, crowding distance,
//! and elite retention over parents plus offspring.

use crate::mop::{dominates, Individual, ObjectiveVector, Population};

/// Pareto front stratification: `fronts[0]` is the non-dominated set of the
/// input, `fronts[i + 1]` the non-dominated set of what remains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontRanking {
    fronts: Vec<Vec<usize>>,
    rank: Vec<usize>,
}

impl FrontRanking {
    /// Fronts in rank order; indices ascending within each front.
    pub fn fronts(&self) -> &[Vec<usize>] {
        &self.fronts
    }

    /// Front index of each input individual.
    pub fn rank(&self) -> &[usize] {
        &self.rank
    }
}

/// The bookkeeping algorithm: counts dominators and tracks dominated sets,
/// peeling fronts off in rank order.
pub fn fast_nondominated_sort(objectives: &[ObjectiveVector]) -> FrontRanking {
    assert!(!objectives.is_empty(), "cannot sort an empty set");
    let n = objectives.len();
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dominators = vec![0usize; n];
    for p in 0..n {
        for q in (p + 1)..n {
            if dominates(&objectives[p], &objectives[q]) {
                dominated[p].push(q);
                dominators[q] += 1;
            } else if dominates(&objectives[q], &objectives[p]) {
                dominated[q].push(p);
                dominators[p] += 1;
            }
        }
    }
    let mut current: Vec<usize> = (0..n).filter(|&p| dominators[p] == 0).collect();

    let mut rank = vec![0usize; n];
    let mut fronts = Vec::new();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            rank[p] = fronts.len();
            for &q in &dominated[p] {
                dominators[q] -= 1;
                if dominators[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    FrontRanking { fronts, rank }
}

/// Crowding distances for one front, indexed like the input.
///
/// Boundary individuals under any objective's sort get infinity; interior
/// ones sum the normalized gap between their neighbors over all objectives,
/// skipping objectives with zero spread.
pub fn crowding_distance(front: &[ObjectiveVector]) -> Vec<f64> {
    assert!(!front.is_empty(), "front must be non-empty");
    let count = front.len();
    let m = front[0].dim();
    let mut distance = vec![0.0; count];
    // The objective index drives both the sort key and the gap lookups.
    #[allow(clippy::needless_range_loop)]
    for obj in 0..m {
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by(|&a, &b| front[a][obj].partial_cmp(&front[b][obj]).unwrap().then(a.cmp(&b)));
        distance[order[0]] = f64::INFINITY;
        distance[order[count - 1]] = f64::INFINITY;
        let spread = front[order[count - 1]][obj] - front[order[0]][obj];
        if spread == 0.0 {
            continue;
        }
        for w in order.windows(3) {
            distance[w[1]] += (front[w[2]][obj] - front[w[0]][obj]) / spread;
        }
    }
    distance
}

/// Keeps the best `n` of `combined` by (front rank, crowding distance):
/// whole fronts in rank order, the splitting front truncated by descending
/// crowding with ties to the lower original index.
pub fn elite_select(combined: Vec<Individual>, n: usize) -> Population {
    assert!(combined.len() >= n, "cannot select {n} from {}", combined.len());
    let objectives: Vec<ObjectiveVector> = combined.iter().map(|i| i.f().clone()).collect();
    let ranking = fast_nondominated_sort(&objectives);

    let mut keep: Vec<usize> = Vec::with_capacity(n);
    for front in ranking.fronts() {
        let missing = n - keep.len();
        if missing == 0 {
            break;
        }
        if front.len() <= missing {
            keep.extend_from_slice(front);
            continue;
        }
        let front_objectives: Vec<ObjectiveVector> =
            front.iter().map(|&i| objectives[i].clone()).collect();
        let crowding = crowding_distance(&front_objectives);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| crowding[b].partial_cmp(&crowding[a]).unwrap().then(a.cmp(&b)));
        keep.extend(order[..missing].iter().map(|&i| front[i]));
        break;
    }

    let mut members: Vec<Option<Individual>> = combined.into_iter().map(Some).collect();
    Population::new(keep.into_iter().map(|i| members[i].take().expect("unique index")).collect(), n)
}

/// Indices of the individuals not dominated by anyone in `members`.
pub fn nondominated_indices(members: &[Individual]) -> Vec<usize> {
    (0..members.len())
        .filter(|&i| {
            members.iter().enumerate().all(|(j, m)| j == i || !dominates(m.f(), members[i].f()))
        })
        .collect()
}
