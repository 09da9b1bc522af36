//! TOML spec files.
//!
//! ```toml
//! [fibration]
//! type = "pull_toward"        # or "hopf"
//! center = [0.0, 0.0, 1.0]    # "axis" for hopf
//! lambda = 0.3
//! handedness = "right"
//!
//! [fibration.rotation]
//! axis = [1.0, 0.0, 0.0]
//! angle = 0.4
//!
//! [chart]
//! epsilon = 0.04
//! fd_step = 1e-4
//!
//! [run]
//! samples = 100
//! seed = 1
//! tolerance = 0.0
//! ```

use std::path::Path;

use gcfib::chart::{ChartSettings, DEFAULT_EPSILON, DEFAULT_FD_STEP};
use gcfib::fibration::LAMBDA_LIMIT;
use gcfib::{AxisAngle, FibrationSpec, Handedness, ImaginaryUnit};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FibrationType {
    Hopf,
    PullToward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HandednessKey {
    #[default]
    Right,
    Left,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationSection {
    pub axis: [f64; 3],
    pub angle: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationSection {
    #[serde(rename = "type")]
    pub kind: FibrationType,
    pub axis: Option<[f64; 3]>,
    pub center: Option<[f64; 3]>,
    pub lambda: Option<f64>,
    pub rotation: Option<RotationSection>,
    #[serde(default)]
    pub handedness: HandednessKey,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ChartSection {
    pub epsilon: Option<f64>,
    pub fd_step: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub fibration: FibrationSection,
    #[serde(default)]
    pub chart: ChartSection,
    #[serde(default)]
    pub run: RunSection,
}

/// A parsed spec with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSpec {
    pub fibration: FibrationSpec,
    pub epsilon: f64,
    pub fd_step: f64,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
}

impl LoadedSpec {
    pub fn chart_settings(&self) -> ChartSettings {
        ChartSettings { epsilon: self.epsilon, ..ChartSettings::default() }
    }
}

fn unit(key: &str, v: [f64; 3]) -> Result<ImaginaryUnit, CliError> {
    ImaginaryUnit::from_vector(v).map_err(|_| CliError::Parse(format!("{key} must be a nonzero finite 3-vector")))
}

pub fn parse_spec(text: &str, allow_large_lambda: bool) -> Result<LoadedSpec, CliError> {
    let file: SpecFile = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let f = &file.fibration;
    let fibration = match f.kind {
        FibrationType::Hopf => {
            if f.center.is_some() || f.lambda.is_some() || f.rotation.is_some() {
                return Err(CliError::Parse("hopf takes only fibration.axis and fibration.handedness".into()));
            }
            let axis = f.axis.ok_or_else(|| CliError::Parse("hopf needs fibration.axis".into()))?;
            FibrationSpec::hopf(unit("fibration.axis", axis)?)
        }
        FibrationType::PullToward => {
            if f.axis.is_some() {
                return Err(CliError::Parse("pull_toward uses fibration.center, not fibration.axis".into()));
            }
            let center = f.center.ok_or_else(|| CliError::Parse("pull_toward needs fibration.center".into()))?;
            let lambda = f.lambda.ok_or_else(|| CliError::Parse("pull_toward needs fibration.lambda".into()))?;
            if !allow_large_lambda && !(0.0..LAMBDA_LIMIT).contains(&lambda) {
                return Err(CliError::Parse(format!(
                    "fibration.lambda = {lambda} outside [0, {LAMBDA_LIMIT}); pass --allow-large-lambda to override"
                )));
            }
            let rotation = match &f.rotation {
                Some(r) if !r.angle.is_finite() => {
                    return Err(CliError::Parse("fibration.rotation.angle must be finite".into()))
                }
                Some(r) => Some(AxisAngle::new(unit("fibration.rotation.axis", r.axis)?, r.angle)),
                None => None,
            };
            FibrationSpec::pull_toward_unrestricted(unit("fibration.center", center)?, lambda, rotation)
                .map_err(|e| CliError::Parse(e.to_string()))?
        }
    };
    let handedness = match f.handedness {
        HandednessKey::Right => Handedness::Right,
        HandednessKey::Left => Handedness::Left,
    };
    let epsilon = file.chart.epsilon.unwrap_or(DEFAULT_EPSILON);
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(CliError::Parse(format!("chart.epsilon = {epsilon} outside (0, 1]")));
    }
    let fd_step = file.chart.fd_step.unwrap_or(DEFAULT_FD_STEP);
    if !(fd_step > 0.0 && 4.0 * fd_step * fd_step < epsilon) {
        return Err(CliError::Parse(format!("chart.fd_step = {fd_step} must be positive and well inside the chart")));
    }
    if let Some(t) = file.run.tolerance {
        if !t.is_finite() {
            return Err(CliError::Parse("run.tolerance must be finite".into()));
        }
    }
    Ok(LoadedSpec {
        fibration: fibration.with_handedness(handedness),
        epsilon,
        fd_step,
        samples: file.run.samples,
        seed: file.run.seed,
        tolerance: file.run.tolerance,
    })
}

pub fn load_spec(path: &Path, allow_large_lambda: bool) -> Result<LoadedSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_spec(&text, allow_large_lambda)
}
