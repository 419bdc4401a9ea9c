//! Per-cluster sampling model: the principal affine subspace segment,
//! extended 25% per side, plus isotropic Gaussian noise whose variance is
//! the mean of the trailing covariance eigenvalues.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::local_pca::AffineSubspace;
use crate::mop::{repair, BoxBounds, DecisionVector};

/// Floor applied to degenerate extent lengths so every cluster keeps a
/// nonzero share of the sampling budget.
pub const VOLUME_FLOOR: f64 = 1e-12;

/// Sampling region of one cluster: projection extents along each principal
/// direction and the noise standard deviation.
#[derive(Clone, Debug)]
pub struct ManifoldModel {
    subspace: AffineSubspace,
    extents_lo: Vec<f64>,
    extents_hi: Vec<f64>,
    noise_sd: f64,
}

impl ManifoldModel {
    pub fn new(
        subspace: AffineSubspace,
        extents_lo: Vec<f64>,
        extents_hi: Vec<f64>,
        noise_sd: f64,
    ) -> Self {
        assert_eq!(extents_lo.len(), subspace.basis().len());
        assert_eq!(extents_hi.len(), subspace.basis().len());
        assert!(
            extents_lo.iter().zip(&extents_hi).all(|(a, b)| a <= b),
            "extent intervals must be ordered"
        );
        assert!(noise_sd >= 0.0);
        Self { subspace, extents_lo, extents_hi, noise_sd }
    }

    pub fn subspace(&self) -> &AffineSubspace {
        &self.subspace
    }

    pub fn extents_lo(&self) -> &[f64] {
        &self.extents_lo
    }

    pub fn extents_hi(&self) -> &[f64] {
        &self.extents_hi
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }

    /// The 25%-extended sampling interval along principal direction `i`.
    pub fn extended_interval(&self, i: usize) -> (f64, f64) {
        let (a, b) = (self.extents_lo[i], self.extents_hi[i]);
        let margin = 0.25 * (b - a);
        (a - margin, b + margin)
    }
}

/// Fits the sampling model of a cluster: projection extents of the members
/// along each principal direction and noise variance equal to the mean of
/// the trailing `n - m + 1` eigenvalues.
pub fn build_model(members: &[DecisionVector], subspace: &AffineSubspace) -> ManifoldModel {
    assert!(!members.is_empty(), "cluster must be non-empty");
    let mean = subspace.mean();
    let k = subspace.basis().len(); // m - 1
    let mut lo = vec![f64::INFINITY; k];
    let mut hi = vec![f64::NEG_INFINITY; k];
    for x in members {
        for (i, u) in subspace.basis().iter().enumerate() {
            let proj: f64 =
                x.coords().iter().zip(mean).zip(u).map(|((v, mu), uk)| (v - mu) * uk).sum();
            lo[i] = lo[i].min(proj);
            hi[i] = hi[i].max(proj);
        }
    }
    let trailing = &subspace.eigenvalues()[k..];
    let variance = trailing.iter().sum::<f64>() / trailing.len() as f64;
    ManifoldModel::new(subspace.clone(), lo, hi, variance.sqrt())
}

/// Volume of the extended sampling region: the product of the extended
/// interval lengths, each floored at [`VOLUME_FLOOR`].
pub fn model_volume(model: &ManifoldModel) -> f64 {
    model
        .extents_lo
        .iter()
        .zip(&model.extents_hi)
        .map(|(a, b)| (1.5 * (b - a)).max(VOLUME_FLOOR))
        .product()
}

/// Draws `count` solutions: a uniform point of the extended subspace segment
/// plus isotropic Gaussian noise, clamped into `bounds`.
pub fn sample_model<R: Rng + ?Sized>(
    model: &ManifoldModel,
    count: usize,
    bounds: &BoxBounds,
    rng: &mut R,
) -> Vec<DecisionVector> {
    let mean = model.subspace.mean();
    let n = mean.len();
    assert_eq!(n, bounds.dim(), "decision dimension mismatch");
    let noise = Normal::new(0.0, model.noise_sd).expect("noise sd is finite and non-negative");
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut coords = mean.to_vec();
        for (i, u) in model.subspace.basis().iter().enumerate() {
            let (lo, hi) = model.extended_interval(i);
            let theta = if lo < hi { rng.random_range(lo..hi) } else { lo };
            for (c, uk) in coords.iter_mut().zip(u) {
                *c += theta * uk;
            }
        }
        for c in coords.iter_mut() {
            *c += noise.sample(rng);
        }
        out.push(repair(&DecisionVector::new(coords), bounds));
    }
    out
}
