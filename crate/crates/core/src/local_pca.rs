//! Local PCA clustering: partitions a population into K clusters whose
//! centroids are (m-1)-dimensional affine subspaces rather than points.
//!
//! Each iteration assigns every point to the nearest subspace, then refits
//! each non-empty cluster's subspace as the principal affine subspace of its
//! members, until assignments stop changing.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::mop::DecisionVector;

/// An (m-1)-dimensional affine subspace with the full covariance spectrum of
/// the cluster it was fitted to.
#[derive(Clone, Debug)]
pub struct AffineSubspace {
    mean: Vec<f64>,
    basis: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
}

impl AffineSubspace {
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Leading principal directions, orthonormal, one per subspace dimension.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Full spectrum of the cluster covariance, descending, clamped at zero.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Degenerate subspace anchored at a single point: zero spectrum,
    /// canonical-axis basis.
    pub fn singleton(point: &[f64], m: usize) -> Self {
        let n = point.len();
        Self { mean: point.to_vec(), basis: canonical_basis(n, m - 1), eigenvalues: vec![0.0; n] }
    }
}

fn canonical_basis(n: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect()
}

/// Mean, covariance (divisor |S|-1) and eigen-decomposition of a non-empty
/// member set; the subspace basis is the top m-1 eigenvectors.
///
/// Singletons and zero-variance sets get a zero spectrum with canonical axes.
pub fn cluster_statistics(members: &[DecisionVector], m: usize) -> AffineSubspace {
    assert!(!members.is_empty(), "cluster must be non-empty");
    let indices: Vec<usize> = (0..members.len()).collect();
    statistics_of(members, &indices, m)
}

fn statistics_of(points: &[DecisionVector], indices: &[usize], m: usize) -> AffineSubspace {
    let n = points[indices[0]].dim();
    let count = indices.len();
    let mut mean = vec![0.0; n];
    for &i in indices {
        for (acc, v) in mean.iter_mut().zip(points[i].coords()) {
            *acc += v;
        }
    }
    for v in &mut mean {
        *v /= count as f64;
    }

    if count == 1 {
        return AffineSubspace::singleton(&mean, m);
    }

    let mut cov = DMatrix::<f64>::zeros(n, n);
    for &idx in indices {
        let coords = points[idx].coords();
        for r in 0..n {
            let dr = coords[r] - mean[r];
            for c in r..n {
                cov[(r, c)] += dr * (coords[c] - mean[c]);
            }
        }
    }
    let divisor = (count - 1) as f64;
    for r in 0..n {
        for c in r..n {
            let v = cov[(r, c)] / divisor;
            cov[(r, c)] = v;
            cov[(c, r)] = v;
        }
    }

    if cov.iter().all(|v| *v == 0.0) {
        // All members coincide; treat like a singleton.
        return AffineSubspace::singleton(&mean, m);
    }

    let eigen = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b].partial_cmp(&eigen.eigenvalues[a]).unwrap().then(a.cmp(&b))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigen.eigenvalues[i].max(0.0)).collect();
    let basis: Vec<Vec<f64>> =
        order.iter().take(m - 1).map(|&i| eigen.eigenvectors.column(i).iter().copied().collect()).collect();
    AffineSubspace { mean, basis, eigenvalues }
}

/// Euclidean distance from `x` to the affine subspace: the norm of the
/// centered vector minus its projection onto the basis span.
///
/// Forms the residual coordinate-wise (rather than via the Pythagorean
/// shortcut) so points on the subspace come out at machine-epsilon scale.
pub fn distance_to_subspace(x: &DecisionVector, subspace: &AffineSubspace) -> f64 {
    let coords = x.coords();
    assert_eq!(coords.len(), subspace.mean.len(), "dimension mismatch");
    let k = subspace.basis.len();
    let mut dots = [0.0_f64; 4];
    let mut dots_vec;
    let dots: &mut [f64] = if k <= 4 {
        &mut dots[..k]
    } else {
        dots_vec = vec![0.0; k];
        &mut dots_vec
    };
    for (i, u) in subspace.basis.iter().enumerate() {
        let mut dot = 0.0;
        for ((v, mu), uk) in coords.iter().zip(&subspace.mean).zip(u) {
            dot += (v - mu) * uk;
        }
        dots[i] = dot;
    }
    let mut residual_sq = 0.0;
    for (j, (v, mu)) in coords.iter().zip(&subspace.mean).enumerate() {
        let mut r = v - mu;
        for (i, u) in subspace.basis.iter().enumerate() {
            r -= dots[i] * u[j];
        }
        residual_sq += r * r;
    }
    residual_sq.sqrt()
}

/// Result of the Local PCA iteration: disjoint index clusters covering the
/// input, each non-empty cluster paired with the subspace fitted to exactly
/// its members.
#[derive(Clone, Debug)]
pub struct Partition {
    clusters: Vec<Vec<usize>>,
    subspaces: Vec<AffineSubspace>,
    converged: bool,
}

impl Partition {
    /// Member indices per cluster; empty clusters are possible.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn subspaces(&self) -> &[AffineSubspace] {
        &self.subspaces
    }

    /// True when the iteration reached an assignment fixpoint before the
    /// iteration cap.
    pub fn converged(&self) -> bool {
        self.converged
    }
}

/// Runs the Local PCA iteration over `points`.
///
/// Subspaces are seeded at `k` distinct random members; assignment ties go to
/// the lowest cluster index; clusters that empty out are reseeded at the
/// member currently farthest from its own cluster's subspace.
pub fn partition<R: Rng + ?Sized>(
    points: &[DecisionVector],
    k: usize,
    m: usize,
    rng: &mut R,
    max_iters: usize,
) -> Partition {
    assert!(!points.is_empty(), "population must be non-empty");
    assert!(k >= 1 && k <= points.len(), "need 1 <= K <= population size");
    assert!(max_iters >= 1);

    let seeds = rand::seq::index::sample(rng, points.len(), k);
    let mut subspaces: Vec<AffineSubspace> =
        seeds.iter().map(|i| AffineSubspace::singleton(points[i].coords(), m)).collect();

    let mut assignment = assign_all(points, &subspaces);
    let mut converged = false;
    for _ in 0..max_iters {
        refit(&mut subspaces, points, &assignment, m);
        let next = assign_all(points, &subspaces);
        if next == assignment {
            converged = true;
            break;
        }
        assignment = next;
    }
    if !converged {
        // Hit the cap after a reassignment; refit so subspaces match members.
        refit(&mut subspaces, points, &assignment, m);
    }

    let mut clusters = vec![Vec::new(); k];
    for (i, &c) in assignment.iter().enumerate() {
        clusters[c].push(i);
    }
    Partition { clusters, subspaces, converged }
}

fn assign_all(points: &[DecisionVector], subspaces: &[AffineSubspace]) -> Vec<usize> {
    points
        .iter()
        .map(|x| {
            let mut best = 0;
            let mut best_dist = distance_to_subspace(x, &subspaces[0]);
            for (j, s) in subspaces.iter().enumerate().skip(1) {
                let d = distance_to_subspace(x, s);
                if d < best_dist {
                    best = j;
                    best_dist = d;
                }
            }
            best
        })
        .collect()
}

fn refit(
    subspaces: &mut [AffineSubspace],
    points: &[DecisionVector],
    assignment: &[usize],
    m: usize,
) {
    let k = subspaces.len();
    let mut members = vec![Vec::new(); k];
    for (i, &c) in assignment.iter().enumerate() {
        members[c].push(i);
    }
    for j in 0..k {
        if !members[j].is_empty() {
            subspaces[j] = statistics_of(points, &members[j], m);
        }
    }
    // Reseed empty clusters at the members farthest from their own subspace.
    let mut taken: Vec<usize> = Vec::new();
    for j in 0..k {
        if !members[j].is_empty() {
            continue;
        }
        let mut far_idx = None;
        let mut far_dist = f64::NEG_INFINITY;
        for (i, &c) in assignment.iter().enumerate() {
            if taken.contains(&i) {
                continue;
            }
            let d = distance_to_subspace(&points[i], &subspaces[c]);
            if d > far_dist {
                far_dist = d;
                far_idx = Some(i);
            }
        }
        if let Some(i) = far_idx {
            subspaces[j] = AffineSubspace::singleton(points[i].coords(), m);
            taken.push(i);
        }
    }
}
