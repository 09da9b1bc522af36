//! The contact form of a fibration in chart coordinates.
//!
//! On the chart `S(x, y, t) = P(x, y) cos t + Q(x, y) sin t` the form dual to
//! the fibre direction is `α = a dx + b dy + dt`. At the origin the
//! coefficient of `α ∧ dα` is checked three ways: the full finite-difference
//! expression, its reduction at `t = 0`, and the closed form in the firing
//! jacobian.

use crate::chart::{p_partials, prop1_margin, prop2_value, standardize, ChartSettings, FiringJacobian, StandardChart};
use crate::error::{Error, Result};
use crate::fibration::{deform, lipschitz_estimate, BaseMap, DeformationPath, DEFORMATION_GRID};
use crate::quat::{Quaternion, UnitQuaternion};
use crate::tol;

pub fn chart_point<M: BaseMap>(chart: &StandardChart<M>, x: f64, y: f64, t: f64) -> Result<UnitQuaternion> {
    let p = chart.p_of(x, y)?.quat();
    let q = chart.q_of(x, y)?.quat();
    let (s, c) = t.sin_cos();
    UnitQuaternion::new(p * c + q * s)
}

/// Coefficients of `α` in `dx`, `dy`, `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaCoeffs {
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub alpha_t: f64,
}

/// `(Q_x, Q_y)` by Richardson-extrapolated central differences of `q_of`.
pub fn q_partials<M: BaseMap>(chart: &StandardChart<M>, x: f64, y: f64, step: f64) -> Result<(Quaternion, Quaternion)> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("finite-difference step {step} must be positive")));
    }
    let q = |dx: f64, dy: f64| chart.q_of(x + dx, y + dy).map(UnitQuaternion::quat);
    let central = |ex: f64, ey: f64, h: f64| -> Result<Quaternion> {
        Ok((q(ex * h, ey * h)? - q(-ex * h, -ey * h)?) * (0.5 / h))
    };
    let derivative = |ex: f64, ey: f64| -> Result<Quaternion> {
        let coarse = central(ex, ey, step)?;
        let fine = central(ex, ey, 0.5 * step)?;
        Ok((fine * 4.0 - coarse) * (1.0 / 3.0))
    };
    Ok((derivative(1.0, 0.0)?, derivative(0.0, 1.0)?))
}

pub fn alpha_coeffs<M: BaseMap>(chart: &StandardChart<M>, x: f64, y: f64, t: f64, fd_step: f64) -> Result<AlphaCoeffs> {
    let p = chart.p_of(x, y)?.quat();
    let q = chart.q_of(x, y)?.quat();
    let (p_x, p_y) = p_partials(x, y)?;
    let (q_x, q_y) = q_partials(chart, x, y, fd_step)?;
    let (s, c) = t.sin_cos();
    let (s2, c2) = (s * s, c * c);
    Ok(AlphaCoeffs {
        alpha_x: -p.dot(q_x) * s2 + q.dot(p_x) * c2,
        alpha_y: -p.dot(q_y) * s2 + q.dot(p_y) * c2,
        alpha_t: 1.0,
    })
}

/// `−((1 + f_y) + (1 − g_x))`.
pub fn contact_coefficient_analytic(j: &FiringJacobian) -> f64 {
    -prop2_value(j)
}

/// The three evaluations of the `dx ∧ dy ∧ dt` coefficient at the chart origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactCheck {
    /// `−a·b_t + b·a_t + b_x − a_y`.
    pub full: f64,
    /// `⟨Q_x, P_y⟩ − ⟨Q_y, P_x⟩`.
    pub reduced: f64,
    pub analytic: f64,
    pub alpha: AlphaCoeffs,
    pub a_t: f64,
    pub b_t: f64,
    pub a_y: f64,
    pub b_x: f64,
    pub jacobian: FiringJacobian,
}

impl ContactCheck {
    /// Largest pairwise gap between the three evaluations.
    pub fn discrepancy(&self) -> f64 {
        let d1 = (self.full - self.reduced).abs();
        let d2 = (self.full - self.analytic).abs();
        let d3 = (self.reduced - self.analytic).abs();
        d1.max(d2).max(d3)
    }
}

/// All three evaluations without judging their agreement.
pub fn contact_cross_check<M: BaseMap>(chart: &StandardChart<M>, fd_step: f64) -> Result<ContactCheck> {
    let h = fd_step;
    let alpha = |x: f64, y: f64, t: f64| alpha_coeffs(chart, x, y, t, h);
    let richardson = |f: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
        let coarse = (f(h)? - f(-h)?) / (2.0 * h);
        let fine = (f(0.5 * h)? - f(-0.5 * h)?) / h;
        Ok((4.0 * fine - coarse) / 3.0)
    };
    let a_t = richardson(&|s| alpha(0.0, 0.0, s).map(|c| c.alpha_x))?;
    let b_t = richardson(&|s| alpha(0.0, 0.0, s).map(|c| c.alpha_y))?;
    let a_y = richardson(&|s| alpha(0.0, s, 0.0).map(|c| c.alpha_x))?;
    let b_x = richardson(&|s| alpha(s, 0.0, 0.0).map(|c| c.alpha_y))?;
    let at_origin = alpha(0.0, 0.0, 0.0)?;
    let full = -at_origin.alpha_x * b_t + at_origin.alpha_y * a_t + b_x - a_y;

    let (p_x, p_y) = p_partials(0.0, 0.0)?;
    let (q_x, q_y) = q_partials(chart, 0.0, 0.0, h)?;
    let reduced = q_x.dot(p_y) - q_y.dot(p_x);

    let jacobian = chart.firing_jacobian(h)?.jacobian;
    Ok(ContactCheck {
        full,
        reduced,
        analytic: contact_coefficient_analytic(&jacobian),
        alpha: at_origin,
        a_t,
        b_t,
        a_y,
        b_x,
        jacobian,
    })
}

/// As [`contact_cross_check`], failing when the evaluations disagree beyond
/// the cross-check tolerance.
pub fn contact_coefficient_numeric<M: BaseMap>(chart: &StandardChart<M>, fd_step: f64) -> Result<ContactCheck> {
    let check = contact_cross_check(chart, fd_step)?;
    if check.discrepancy() > tol::CONTACT_CROSS_CHECK {
        return Err(Error::InternalConsistency(format!(
            "contact coefficient: full {}, reduced {}, analytic {}",
            check.full, check.reduced, check.analytic
        )));
    }
    Ok(check)
}

/// `α` and `α ∧ dα` at the point a chart was built around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactSample {
    pub point: UnitQuaternion,
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub alpha_t: f64,
    pub coefficient: f64,
}

impl ContactSample {
    pub fn at_origin<M: BaseMap>(chart: &StandardChart<M>, fd_step: f64) -> Result<Self> {
        let check = contact_cross_check(chart, fd_step)?;
        Ok(Self {
            point: chart.origin,
            alpha_x: check.alpha.alpha_x,
            alpha_y: check.alpha.alpha_y,
            alpha_t: check.alpha.alpha_t,
            coefficient: check.full,
        })
    }
}

/// One stage of a contact sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageContact {
    pub t: f64,
    pub lipschitz: f64,
    pub min_margin: f64,
    /// Largest (least negative) analytic coefficient over the sampled fibres.
    pub max_coefficient: f64,
}

/// A sampled fibre at which `α ∧ dα` failed to be negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonContact {
    pub t: f64,
    pub point: UnitQuaternion,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathContactReport {
    pub stages: Vec<StageContact>,
    pub max_coefficient: f64,
    pub findings: Vec<NonContact>,
}

impl PathContactReport {
    pub fn is_contact(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Sign of `α_t ∧ dα_t` at the sampled fibres for `t = k / t_steps`.
pub fn contact_along_path(
    path: &DeformationPath,
    t_steps: usize,
    fibre_samples: &[UnitQuaternion],
    settings: &ChartSettings,
    fd_step: f64,
) -> Result<PathContactReport> {
    if t_steps == 0 {
        return Err(Error::InvalidArgument("a contact sweep needs at least one step".into()));
    }
    let mut stages = Vec::with_capacity(t_steps + 1);
    let mut findings = Vec::new();
    for k in 0..=t_steps {
        let t = k as f64 / t_steps as f64;
        let stage = deform(path, t)?;
        let lipschitz = lipschitz_estimate(&stage.map, DEFORMATION_GRID)?;
        let mut max_coefficient = f64::NEG_INFINITY;
        let mut min_margin = f64::INFINITY;
        for &p in fibre_samples {
            let chart = standardize(&stage, p, settings)?;
            let j = chart.firing_jacobian(fd_step)?.jacobian;
            let coefficient = contact_coefficient_analytic(&j);
            min_margin = min_margin.min(prop1_margin(&j).worst());
            max_coefficient = max_coefficient.max(coefficient);
            if !(coefficient < 0.0) {
                findings.push(NonContact { t, point: p, coefficient });
            }
        }
        stages.push(StageContact { t, lipschitz, min_margin, max_coefficient });
    }
    let max_coefficient = stages.iter().map(|s| s.max_coefficient).fold(f64::NEG_INFINITY, f64::max);
    Ok(PathContactReport { stages, max_coefficient, findings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{p_of, DEFAULT_FD_STEP};
    use crate::fibration::{FibrationSpec, Handedness};
    use crate::quat::ImaginaryUnit;
    use crate::sampling::s3_random;
    use crate::sphere::AxisAngle;
    use std::f64::consts::FRAC_PI_2;

    fn hopf_chart() -> StandardChart<crate::fibration::BaseMapKind> {
        standardize(&FibrationSpec::hopf(ImaginaryUnit::K), UnitQuaternion::ONE, &ChartSettings::default()).unwrap()
    }

    fn pull(lambda: f64) -> FibrationSpec {
        FibrationSpec::pull_toward(ImaginaryUnit::K, lambda, Some(AxisAngle::new(ImaginaryUnit::I, 0.2))).unwrap()
    }

    #[test]
    fn chart_point_examples() {
        let chart = hopf_chart();
        assert_eq!(chart_point(&chart, 0.0, 0.0, 0.0).unwrap(), UnitQuaternion::ONE);
        let top = chart_point(&chart, 0.0, 0.0, FRAC_PI_2).unwrap().quat();
        assert!((top - Quaternion::K).norm() < 1e-15);
        let s = chart_point(&chart, 0.1, 0.0, 0.3).unwrap().quat();
        let expected = p_of(0.1, 0.0).unwrap().quat() * Quaternion::new(0.3f64.cos(), 0.0, 0.0, 0.3f64.sin());
        assert!((s - expected).norm() < 1e-15);
        assert!(chart_point(&chart, 0.3, 0.0, 0.0).is_err());
    }

    #[test]
    fn hopf_alpha_is_dt_along_the_central_fibre() {
        let chart = hopf_chart();
        for t in [0.0, 0.4, 1.3, 2.9] {
            let a = alpha_coeffs(&chart, 0.0, 0.0, t, DEFAULT_FD_STEP).unwrap();
            assert!(a.alpha_x.abs() < 1e-12 && a.alpha_y.abs() < 1e-12);
            assert_eq!(a.alpha_t, 1.0);
        }
    }

    #[test]
    fn alpha_vanishes_at_the_origin_for_any_spec() {
        for p0 in s3_random(10, 21) {
            let chart = standardize(&pull(0.3), p0, &ChartSettings::default()).unwrap();
            let a = alpha_coeffs(&chart, 0.0, 0.0, 0.0, DEFAULT_FD_STEP).unwrap();
            assert!(a.alpha_x.abs() < 1e-10 && a.alpha_y.abs() < 1e-10, "{a:?}");
        }
    }

    #[test]
    fn partials_are_tangent() {
        for (i, p0) in s3_random(10, 22).into_iter().enumerate() {
            let chart = standardize(&pull(0.25), p0, &ChartSettings::default()).unwrap();
            let (x, y) = (0.05 * (i as f64 - 4.5) / 4.5, 0.08 - 0.01 * i as f64);
            let p = chart.p_of(x, y).unwrap().quat();
            let q = chart.q_of(x, y).unwrap().quat();
            let (p_x, p_y) = p_partials(x, y).unwrap();
            let (q_x, q_y) = q_partials(&chart, x, y, DEFAULT_FD_STEP).unwrap();
            for v in [p.dot(p_x), p.dot(p_y), q.dot(q_x), q.dot(q_y), p.dot(q)] {
                assert!(v.abs() < 1e-10, "{v}");
            }
        }
    }

    #[test]
    fn analytic_examples() {
        assert_eq!(contact_coefficient_analytic(&FiringJacobian::HOPF), -2.0);
        assert_eq!(contact_coefficient_analytic(&FiringJacobian::new(0.0, 0.5, -0.5, 0.0)), -3.0);
        assert_eq!(contact_coefficient_analytic(&FiringJacobian::new(0.0, -1.0, 1.0, 0.0)), 0.0);
    }

    #[test]
    fn hopf_numeric_coefficient() {
        let check = contact_coefficient_numeric(&hopf_chart(), DEFAULT_FD_STEP).unwrap();
        assert_eq!(check.analytic, -2.0);
        assert!((check.full + 2.0).abs() < 1e-6 && (check.reduced + 2.0).abs() < 1e-6, "{check:?}");
    }

    #[test]
    fn pull_toward_coefficients_agree() {
        for p0 in s3_random(8, 23) {
            let chart = standardize(&pull(0.3), p0, &ChartSettings::default()).unwrap();
            let check = contact_coefficient_numeric(&chart, DEFAULT_FD_STEP).unwrap();
            assert!(check.full < 0.0);
            assert!(check.a_t.abs() < 1e-6 && check.b_t.abs() < 1e-6, "{check:?}");
        }
    }

    #[test]
    fn left_handed_charts_are_contact() {
        let spec = pull(0.2).with_handedness(Handedness::Left);
        let chart = standardize(&spec, s3_random(1, 24)[0], &ChartSettings::default()).unwrap();
        assert!(contact_coefficient_numeric(&chart, DEFAULT_FD_STEP).unwrap().full < 0.0);
    }

    #[test]
    fn contact_sample_at_origin() {
        let p0 = s3_random(1, 25)[0];
        let chart = standardize(&pull(0.2), p0, &ChartSettings::default()).unwrap();
        let sample = ContactSample::at_origin(&chart, DEFAULT_FD_STEP).unwrap();
        assert_eq!(sample.point, p0);
        assert_eq!(sample.alpha_t, 1.0);
        assert!(sample.coefficient < 0.0);
    }

    #[test]
    fn constant_path_is_identically_hopf() {
        let path = DeformationPath::new(FibrationSpec::hopf(ImaginaryUnit::K), ImaginaryUnit::K, 4).unwrap();
        let samples = s3_random(4, 26);
        let report = contact_along_path(&path, 4, &samples, &ChartSettings::default(), DEFAULT_FD_STEP).unwrap();
        assert!(report.is_contact());
        assert_eq!(report.max_coefficient, -2.0);
        assert_eq!(report.stages.len(), 5);
    }

    #[test]
    fn pull_toward_path_stays_contact() {
        let spec = FibrationSpec::pull_toward(ImaginaryUnit::K, 0.3, None).unwrap();
        let path = DeformationPath::new(spec, ImaginaryUnit::K, 5).unwrap();
        let samples = s3_random(5, 27);
        let report = contact_along_path(&path, 5, &samples, &ChartSettings::default(), DEFAULT_FD_STEP).unwrap();
        assert!(report.is_contact());
        assert!(report.max_coefficient < -1.0);
        assert!(report.stages.iter().all(|s| s.lipschitz < 1.0 && s.min_margin > 0.0));
    }
}
