//! Offspring budgeting: cluster totals proportional to model volume
//! (largest-remainder rounding so the totals conserve N), split between the
//! probability-model arm and the DE arm by the convergence ratio.

/// Mixing coefficients: the model arm's share of a cluster's offspring is
/// `alpha + beta * p` for convergence ratio `p`.
#[derive(Clone, Copy, Debug)]
pub struct MixParams {
    pub alpha: f64,
    pub beta: f64,
}

impl MixParams {
    pub fn new(alpha: f64, beta: f64) -> Self {
        assert!((0.0..=1.0).contains(&alpha), "alpha must lie in [0, 1]");
        assert!((0.0..=1.0).contains(&beta), "beta must lie in [0, 1]");
        assert!(alpha + beta <= 1.0, "alpha + beta must not exceed 1");
        Self { alpha, beta }
    }

    /// Conventional mix: alpha = 0.3, beta = 0.6.
    pub fn defaults() -> Self {
        Self::new(0.3, 0.6)
    }

    /// Everything through the probability model (pure EDA reproduction).
    pub fn model_only() -> Self {
        Self::new(1.0, 0.0)
    }
}

/// Offspring budget of one cluster.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterQuota {
    /// Probability-model arm count (k1).
    pub model: usize,
    /// DE arm count (k2).
    pub de: usize,
    /// Convergence ratio of the cluster.
    pub ratio: f64,
    /// Fraction of the total volume attributed to the cluster.
    pub volume_share: f64,
}

impl ClusterQuota {
    pub fn total(&self) -> usize {
        self.model + self.de
    }
}

/// Fraction of the covariance spectrum captured by the leading `m - 1`
/// eigenvalues. A zero spectrum counts as fully converged (ratio 1).
pub fn convergence_ratio(eigenvalues: &[f64], m: usize) -> f64 {
    assert!(m >= 2 && m - 1 <= eigenvalues.len(), "need at least m - 1 eigenvalues");
    debug_assert!(
        eigenvalues.windows(2).all(|w| w[0] >= w[1]) && eigenvalues.iter().all(|&l| l >= 0.0),
        "spectrum must be descending and non-negative"
    );
    let total: f64 = eigenvalues.iter().sum();
    if total == 0.0 {
        return 1.0;
    }
    let leading: f64 = eigenvalues[..m - 1].iter().sum();
    (leading / total).clamp(0.0, 1.0)
}

/// Splits `n` offspring across clusters proportionally to volume, then
/// between the two arms: `k1 = floor(total * (alpha + beta * p))`,
/// `k2 = total - k1`. The quotas always sum to exactly `n`.
pub fn allocate(n: usize, volumes: &[f64], ratios: &[f64], mix: &MixParams) -> Vec<ClusterQuota> {
    assert_eq!(volumes.len(), ratios.len(), "one ratio per volume");
    assert!(!volumes.is_empty(), "need at least one cluster");
    assert!(volumes.iter().all(|&v| v > 0.0), "volumes must be positive");
    assert!(ratios.iter().all(|&p| (0.0..=1.0).contains(&p)), "ratios must lie in [0, 1]");

    let total_volume: f64 = volumes.iter().sum();
    let shares: Vec<f64> = volumes.iter().map(|v| v / total_volume).collect();
    let totals = largest_remainder(n, &shares);

    totals
        .into_iter()
        .zip(ratios)
        .zip(&shares)
        .map(|((total, &p), &share)| {
            let model = (total as f64 * (mix.alpha + mix.beta * p)).floor() as usize;
            ClusterQuota { model, de: total - model, ratio: p, volume_share: share }
        })
        .collect()
}

/// Rounds `n * share_j` to integers summing to exactly `n`: floor first,
/// then hand the deficit to the largest fractional remainders (ties to the
/// lower index).
fn largest_remainder(n: usize, shares: &[f64]) -> Vec<usize> {
    let raw: Vec<f64> = shares.iter().map(|s| n as f64 * s).collect();
    let mut totals: Vec<usize> = raw.iter().map(|r| r.floor() as usize).collect();
    let assigned: usize = totals.iter().sum();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = raw[a] - raw[a].floor();
        let fb = raw[b] - raw[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for &j in order.iter().take(n.saturating_sub(assigned)) {
        totals[j] += 1;
    }
    totals
}
