use rand::seq::SliceRandom;
use rand::Rng;

use crate::mop::{BoxBounds, DecisionVector};

/// Latin hypercube sample of `count` points.
///
/// Per dimension, `[lower, upper]` is cut into `count` equal strata; each
/// stratum receives exactly one point at a uniform position, and the
/// stratum-to-sample assignment is an independent random permutation per
/// dimension.
pub fn latin_hypercube_init<R: Rng + ?Sized>(
    bounds: &BoxBounds,
    count: usize,
    rng: &mut R,
) -> Vec<DecisionVector> {
    assert!(count >= 1, "need at least one sample");
    let n = bounds.dim();
    let mut coords = vec![vec![0.0_f64; n]; count];
    let mut column = Vec::with_capacity(count);
    for dim in 0..n {
        let (lo, hi) = (bounds.lower()[dim], bounds.upper()[dim]);
        let width = hi - lo;
        column.clear();
        for stratum in 0..count {
            let u: f64 = rng.random();
            column.push(lo + width * ((stratum as f64 + u) / count as f64));
        }
        column.shuffle(rng);
        for (sample, value) in coords.iter_mut().zip(&column) {
            sample[dim] = *value;
        }
    }
    coords.into_iter().map(DecisionVector::new).collect()
}
