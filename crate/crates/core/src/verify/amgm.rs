use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::{is_strictly_distance_decreasing, m_matrix, prop1_margin, prop2_value, FiringJacobian};
use crate::error::{Error, Result};

/// Jacobian entries are drawn uniformly from `[−JACOBIAN_RANGE, JACOBIAN_RANGE]`.
pub const JACOBIAN_RANGE: f64 = 5.0;

/// `|Δ|` at or below this is left out of the criterion survey.
const SURVEY_DELTA: f64 = 1e-6;

pub fn sample_jacobians(count: usize, seed: u64) -> Vec<FiringJacobian> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = -JACOBIAN_RANGE..JACOBIAN_RANGE;
    (0..count)
        .map(|_| {
            FiringJacobian::new(
                rng.random_range(range.clone()),
                rng.random_range(range.clone()),
                rng.random_range(range.clone()),
                rng.random_range(range.clone()),
            )
        })
        .collect()
}

/// Agreement of the margin sign with the distance-decreasing test on `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionSurvey {
    pub samples: usize,
    /// Samples with `|Δ| > 1e−6` and both factors positive.
    pub considered: usize,
    pub accepted: usize,
    pub disagreements: Vec<FiringJacobian>,
}

pub fn m_criterion_survey(count: usize, seed: u64) -> Result<CriterionSurvey> {
    let mut survey = CriterionSurvey { samples: count, considered: 0, accepted: 0, disagreements: Vec::new() };
    for j in sample_jacobians(count, seed) {
        let margin = prop1_margin(&j);
        if j.delta().abs() <= SURVEY_DELTA || margin.factor1 <= 0.0 || margin.factor2 <= 0.0 {
            continue;
        }
        survey.considered += 1;
        let shrinks = is_strictly_distance_decreasing(&m_matrix(&j)?);
        survey.accepted += usize::from(shrinks);
        if shrinks != (margin.margin > 0.0) {
            survey.disagreements.push(j);
        }
    }
    Ok(survey)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmgmReport {
    pub samples: usize,
    pub accepted: usize,
    pub min_prop2: f64,
    pub min_delta: f64,
}

/// Checks that every sampled jacobian accepted by the fibration inequality
/// also has positive contact value and positive `Δ`.
pub fn amgm_samples(count: usize, seed: u64) -> Result<AmgmReport> {
    let mut report = AmgmReport { samples: count, accepted: 0, min_prop2: f64::INFINITY, min_delta: f64::INFINITY };
    for j in sample_jacobians(count, seed) {
        if !prop1_margin(&j).accepts() {
            continue;
        }
        report.accepted += 1;
        let (value, delta) = (prop2_value(&j), j.delta());
        if !(value > 0.0 && delta > 0.0) {
            return Err(Error::InternalConsistency(format!(
                "accepted jacobian {j:?} has contact value {value} and delta {delta}"
            )));
        }
        report.min_prop2 = report.min_prop2.min(value);
        report.min_delta = report.min_delta.min(delta);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Matrix2;
    use proptest::prelude::*;

    fn largest_singular_value(m: &Matrix2<f64>) -> f64 {
        m.svd(false, false).singular_values.max()
    }

    #[test]
    fn hopf_value() {
        assert_eq!(prop2_value(&FiringJacobian::HOPF), 2.0);
        assert!(prop1_margin(&FiringJacobian::HOPF).accepts());
    }

    #[test]
    fn sampling_is_seeded() {
        assert_eq!(sample_jacobians(20, 1), sample_jacobians(20, 1));
        assert_ne!(sample_jacobians(20, 1), sample_jacobians(20, 2));
        assert!(sample_jacobians(500, 3)
            .iter()
            .all(|j| j.f_x.abs() <= JACOBIAN_RANGE && j.g_y.abs() <= JACOBIAN_RANGE));
    }

    #[test]
    fn survey_has_no_disagreements() {
        let survey = m_criterion_survey(20_000, 4).unwrap();
        assert!(survey.considered > 1000 && survey.accepted > 100, "{survey:?}");
        assert!(survey.disagreements.is_empty(), "{:?}", &survey.disagreements[..1]);
    }

    #[test]
    fn amgm_has_no_violations() {
        let report = amgm_samples(20_000, 5).unwrap();
        assert!(report.accepted > 100);
        assert!(report.min_prop2 > 0.0 && report.min_delta > 0.0);
    }

    #[test]
    fn boundary_family_approaches_zero() {
        for eps in [1e-1, 1e-2, 1e-3] {
            let j = FiringJacobian::new(0.0, -1.0 + eps, 1.0 - eps, 0.0);
            let margin = prop1_margin(&j);
            assert!(margin.accepts());
            assert!((prop2_value(&j) - 2.0 * eps).abs() < 1e-12);
            assert!((margin.margin - 4.0 * eps * eps).abs() < 1e-12);
        }
        assert!(!prop1_margin(&FiringJacobian::new(0.0, -1.0, 1.0, 0.0)).accepts());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn margin_sign_matches_operator_norm(
            f_x in -5.0..5.0f64, f_y in -1.0..5.0f64, g_x in -5.0..1.0f64, g_y in -5.0..5.0f64,
        ) {
            let j = FiringJacobian::new(f_x, f_y, g_x, g_y);
            let margin = prop1_margin(&j);
            prop_assume!(margin.factor1 > 0.0 && margin.factor2 > 0.0 && j.delta().abs() > 1e-6);
            prop_assume!(margin.margin.abs() > 1e-9);
            let m = m_matrix(&j).unwrap();
            prop_assert_eq!(margin.margin > 0.0, largest_singular_value(&m) < 1.0);
            prop_assert_eq!(margin.margin > 0.0, is_strictly_distance_decreasing(&m));
        }

        #[test]
        fn accepted_jacobians_are_contact(
            factor1 in 1e-3..6.0f64, factor2 in 1e-3..6.0f64, skew in -0.999..0.999f64, g_y in -5.0..5.0f64,
        ) {
            let f_x = g_y + skew * 2.0 * (factor1 * factor2).sqrt();
            let j = FiringJacobian::new(f_x, factor1 - 1.0, 1.0 - factor2, g_y);
            prop_assert!(prop1_margin(&j).accepts());
            prop_assert!(prop2_value(&j) > 0.0);
            prop_assert!(j.delta() > prop2_value(&j) + 1.0 - 1e-9);
        }
    }
}
