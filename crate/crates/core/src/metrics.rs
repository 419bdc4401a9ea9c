//! Inverted generational distance: mean distance from each reference-front
//! point to its nearest approximation point. Measures convergence and
//! diversity jointly; smaller is better.

use crate::mop::ObjectiveVector;
use crate::problems::PfReference;

/// IGD of `approx` against `reference`, in raw objective units.
pub fn igd(approx: &[ObjectiveVector], reference: &PfReference) -> f64 {
    assert!(!approx.is_empty(), "approximation set must be non-empty");
    assert_eq!(
        approx[0].dim(),
        reference.objectives(),
        "objective dimension mismatch between approximation and reference"
    );
    let total: f64 = reference
        .points()
        .iter()
        .map(|v| {
            approx
                .iter()
                .map(|p| squared_distance(v, p))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    total / reference.len() as f64
}

fn squared_distance(a: &ObjectiveVector, b: &ObjectiveVector) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn ov(values: &[f64]) -> ObjectiveVector {
        ObjectiveVector::new(values.to_vec())
    }

    #[test]
    fn identical_sets_have_zero_distance() {
        let points = vec![ov(&[0.0, 1.0]), ov(&[0.5, 0.5]), ov(&[1.0, 0.0])];
        let reference = PfReference::new(points.clone());
        assert_eq!(igd(&points, &reference), 0.0);
    }

    #[test]
    fn single_midpoint_against_two_corners() {
        let reference = PfReference::new(vec![ov(&[0.0, 1.0]), ov(&[1.0, 0.0])]);
        let approx = [ov(&[0.5, 0.5])];
        assert_abs_diff_eq!(igd(&approx, &reference), 0.5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    #[should_panic(expected = "approximation set must be non-empty")]
    fn empty_approximation_is_a_contract_violation() {
        let reference = PfReference::new(vec![ov(&[0.0, 1.0])]);
        igd(&[], &reference);
    }

    #[test]
    fn adding_points_never_increases_igd() {
        let mut rng = ChaCha12Rng::seed_from_u64(81);
        for _ in 0..100 {
            let reference = PfReference::new(
                (0..20).map(|_| ov(&[rng.random(), rng.random()])).collect(),
            );
            let mut approx: Vec<ObjectiveVector> =
                (0..10).map(|_| ov(&[rng.random(), rng.random()])).collect();
            let before = igd(&approx, &reference);
            approx.push(ov(&[rng.random(), rng.random()]));
            assert!(igd(&approx, &reference) <= before + 1e-15);
        }
    }

    #[test]
    fn invariant_under_common_rigid_motion() {
        let mut rng = ChaCha12Rng::seed_from_u64(82);
        let rotate = |p: &ObjectiveVector, angle: f64, shift: (f64, f64)| {
            let (s, c) = angle.sin_cos();
            ov(&[c * p[0] - s * p[1] + shift.0, s * p[0] + c * p[1] + shift.1])
        };
        for _ in 0..50 {
            let reference_pts: Vec<ObjectiveVector> =
                (0..15).map(|_| ov(&[rng.random(), rng.random()])).collect();
            let approx: Vec<ObjectiveVector> =
                (0..8).map(|_| ov(&[rng.random(), rng.random()])).collect();
            let base = igd(&approx, &PfReference::new(reference_pts.clone()));
            let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let shift = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let moved_ref: Vec<ObjectiveVector> =
                reference_pts.iter().map(|p| rotate(p, angle, shift)).collect();
            let moved_approx: Vec<ObjectiveVector> =
                approx.iter().map(|p| rotate(p, angle, shift)).collect();
            let moved = igd(&moved_approx, &PfReference::new(moved_ref));
            assert_abs_diff_eq!(base, moved, epsilon = 1e-12);
        }
    }
}
