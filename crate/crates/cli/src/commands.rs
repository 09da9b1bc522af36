use std::path::Path;

use gcfib::chart::{prop1_margin, standardize, ChartSettings};
use gcfib::contact::{contact_along_path, contact_cross_check};
use gcfib::fibration::{distance_from_constant, DEFORMATION_GRID};
use gcfib::sampling::{s2_fibonacci, s3_points};
use gcfib::tol;
use gcfib::verify::{prop1_oracle_agreement, smallest_cap, Agreement, CircleFamily, FiringFamily, OracleThresholds};
use gcfib::{
    deform, lipschitz_estimate, preserved_fibre_check, BaseMap, BaseMapKind, DeformationPath, Error, FibrationSpec,
    Handedness, SolverOptions, UnitQuaternion,
};
use serde_json::Value;

use crate::plot::{parse_quaternion, plot_fibres, to_csv, to_svg};
use crate::report::{number, row, Report};
use crate::spec::LoadedSpec;
use crate::CliError;

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_DEFORM_SAMPLES: usize = 16;
pub const DEFAULT_STEPS: usize = 20;
const LIPSCHITZ_GRID: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

/// Options shared by the sampling commands; `None` falls back to the spec file.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
}

impl RunOptions {
    fn resolve(&self, spec: &LoadedSpec, default_samples: usize, default_tol: f64) -> (usize, u64, f64) {
        (
            self.samples.or(spec.samples).unwrap_or(default_samples),
            self.seed.or(spec.seed).unwrap_or(DEFAULT_SEED),
            self.tol.or(spec.tolerance).unwrap_or(default_tol),
        )
    }
}

fn at_point(p: UnitQuaternion, e: Error) -> CliError {
    match CliError::from(e) {
        CliError::Solver(msg) => CliError::Solver(format!("at point {p}: {msg}")),
        other => other,
    }
}

fn describe(spec: &FibrationSpec, report: &mut Report) {
    match spec.map {
        BaseMapKind::Constant { axis } => {
            report.value("fibration", "hopf").value("axis", axis.to_string());
        }
        BaseMapKind::PullToward { center, lambda, rotation } => {
            report
                .value("fibration", "pull_toward")
                .value("center", center.to_string())
                .real("lambda", lambda)
                .value("rotation_axis", rotation.axis.to_string())
                .real("rotation_angle", rotation.angle);
        }
    }
    let hand = match spec.handedness {
        Handedness::Right => "right",
        Handedness::Left => "left",
    };
    report.value("handedness", hand);
}

fn sample_count(n: usize) -> Result<usize, CliError> {
    if n == 0 {
        return Err(CliError::Parse("sample count must be positive".into()));
    }
    Ok(n)
}

pub fn cmd_validate(spec: &LoadedSpec, opts: &RunOptions) -> Result<(Report, Outcome), CliError> {
    let (samples, seed, threshold) = opts.resolve(spec, DEFAULT_SAMPLES, 0.0);
    let samples = sample_count(samples)?;
    let settings = spec.chart_settings();
    let lipschitz = lipschitz_estimate(&spec.fibration.map, LIPSCHITZ_GRID)?;
    let mut worst: Option<(f64, UnitQuaternion)> = None;
    let (mut min_margin, mut min_f1, mut min_f2, mut max_h) = (f64::INFINITY, f64::INFINITY, f64::INFINITY, 0.0f64);
    for p in s3_points(samples, seed) {
        let chart = standardize(&spec.fibration, p, &settings).map_err(|e| at_point(p, e))?;
        let est = chart.firing_jacobian(spec.fd_step).map_err(|e| at_point(p, e))?;
        let m = prop1_margin(&est.jacobian);
        if worst.is_none_or(|(w, _)| m.worst() < w) {
            worst = Some((m.worst(), p));
        }
        min_margin = min_margin.min(m.margin);
        min_f1 = min_f1.min(m.factor1);
        min_f2 = min_f2.min(m.factor2);
        max_h = max_h.max(est.h_x.abs()).max(est.h_y.abs());
    }
    let pass = min_margin > threshold && min_f1 > threshold && min_f2 > threshold;
    let mut report = Report::new("validate");
    describe(&spec.fibration, &mut report);
    report
        .value("samples", samples)
        .value("seed", seed)
        .real("threshold", threshold)
        .real("lipschitz_estimate", lipschitz)
        .real("min_margin", min_margin)
        .real("min_factor1", min_f1)
        .real("min_factor2", min_f2)
        .real("max_abs_h_derivative", max_h)
        .value("worst_point", worst.map(|(_, p)| p.to_string()).unwrap_or_default())
        .value("passed", pass);
    Ok((report, Outcome::from_pass(pass)))
}

pub fn cmd_contact(spec: &LoadedSpec, opts: &RunOptions) -> Result<(Report, Outcome), CliError> {
    let (samples, seed, cross_tol) = opts.resolve(spec, DEFAULT_SAMPLES, tol::CONTACT_CROSS_CHECK);
    let samples = sample_count(samples)?;
    let settings = spec.chart_settings();
    let mut rows = Vec::with_capacity(samples);
    let (mut max_gap, mut max_coefficient, mut min_abs) = (0.0f64, f64::NEG_INFINITY, f64::INFINITY);
    for (i, p) in s3_points(samples, seed).into_iter().enumerate() {
        let chart = standardize(&spec.fibration, p, &settings).map_err(|e| at_point(p, e))?;
        let check = contact_cross_check(&chart, spec.fd_step).map_err(|e| at_point(p, e))?;
        max_gap = max_gap.max(check.discrepancy());
        max_coefficient = max_coefficient.max(check.analytic).max(check.full);
        min_abs = min_abs.min(check.analytic.abs());
        rows.push(row([
            ("sample", i.into()),
            ("analytic", number(check.analytic)),
            ("numeric", number(check.full)),
            ("reduced", number(check.reduced)),
            ("abs_coefficient", number(check.analytic.abs())),
        ]));
    }
    let pass = max_coefficient < 0.0 && max_gap <= cross_tol;
    let mut report = Report::new("contact");
    describe(&spec.fibration, &mut report);
    report
        .value("samples", samples)
        .value("seed", seed)
        .real("cross_check_tolerance", cross_tol)
        .real("max_cross_check", max_gap)
        .real("max_coefficient", max_coefficient)
        .real("min_abs_coefficient", min_abs)
        .value("passed", pass)
        .rows("fibres", rows)
        .note("coefficients are of dx^dy^dt at the standardized chart origin; Hopf gives -2");
    Ok((report, Outcome::from_pass(pass)))
}

pub fn cmd_deform(
    spec: &LoadedSpec,
    steps: Option<usize>,
    fix_fibre: Option<&str>,
    opts: &RunOptions,
) -> Result<(Report, Outcome), CliError> {
    let (samples, seed, _) = opts.resolve(spec, DEFAULT_DEFORM_SAMPLES, 0.0);
    let samples = sample_count(samples)?;
    let steps = steps.unwrap_or(DEFAULT_STEPS);
    if steps == 0 {
        return Err(CliError::Parse("--steps must be positive".into()));
    }
    let p0 = fix_fibre.map(parse_quaternion).transpose()?.unwrap_or(UnitQuaternion::ONE);
    let settings = spec.chart_settings();
    let solver = SolverOptions::default();
    let path = DeformationPath::fixing_fibre(spec.fibration, p0, steps, &solver).map_err(|e| at_point(p0, e))?;

    let mut report = Report::new("deform");
    describe(&spec.fibration, &mut report);
    report.value("steps", steps).value("samples", samples).value("seed", seed);
    report.value("fixed_point", p0.to_string()).value("target", path.target.to_string());
    let image: Vec<_> =
        s2_fibonacci(DEFORMATION_GRID * DEFORMATION_GRID).into_iter().map(|u| spec.fibration.map.eval(u)).collect();
    match smallest_cap(&image) {
        Ok(cap) => report.value("image_cap_center", cap.center.to_string()).real("image_cap_radius", cap.radius),
        Err(_) => report.value("image_cap_center", "none"),
    };
    report.real("image_radius_from_target", path.image_radius());

    let fibres = s3_points(samples, seed);
    let sweep = contact_along_path(&path, steps, &fibres, &settings, spec.fd_step).map_err(deformation_error)?;
    let mut rows = Vec::with_capacity(sweep.stages.len());
    let mut pass = sweep.is_contact();
    let mut max_drift = 0.0f64;
    for stage in &sweep.stages {
        let drift = preserved_fibre_check(&path, p0, stage.t, &solver).map_err(deformation_error)?;
        max_drift = max_drift.max(drift);
        let ok = stage.lipschitz < 1.0
            && stage.min_margin > 0.0
            && stage.max_coefficient < 0.0
            && drift <= tol::PRESERVED_FIBRE;
        pass &= ok;
        rows.push(row([
            ("t", number(stage.t)),
            ("lipschitz", number(stage.lipschitz)),
            ("min_margin", number(stage.min_margin)),
            ("max_coefficient", number(stage.max_coefficient)),
            ("drift", number(drift)),
            ("ok", ok.into()),
        ]));
    }
    let end = deform(&path, 1.0).map_err(deformation_error)?;
    let endpoint = distance_from_constant(&end.map, path.target);
    pass &= endpoint <= 1e-10;
    report
        .real("max_drift", max_drift)
        .real("max_coefficient", sweep.max_coefficient)
        .real("endpoint_distance_from_constant", endpoint)
        .value("passed", pass)
        .rows("stages", rows)
        .note("tightness is not checked; contactness at every sampled stage stands in for the stability hypothesis");
    Ok((report, Outcome::from_pass(pass)))
}

fn deformation_error(e: Error) -> CliError {
    match e {
        Error::DeformationValidity { t, lipschitz } => {
            CliError::Deformation(format!("stage t = {t} has lipschitz estimate {lipschitz} >= 1"))
        }
        Error::DeformationDomain { distance } => {
            CliError::Deformation(format!("image reaches distance {distance} from the target, beyond the pi/2 cap"))
        }
        other => CliError::from(other),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotFormat {
    Csv,
    Svg,
}

pub fn cmd_plot(
    spec: &LoadedSpec,
    fibres: usize,
    points: usize,
    pole: Option<&str>,
    format: PlotFormat,
    out: Option<&Path>,
) -> Result<(Report, Outcome, Option<String>), CliError> {
    let pole = pole.map(parse_quaternion).transpose()?.unwrap_or(-UnitQuaternion::ONE);
    let (lines, retries) = plot_fibres(&spec.fibration, fibres, points, pole)?;
    let body = match format {
        PlotFormat::Csv => to_csv(&lines),
        PlotFormat::Svg => to_svg(&lines),
    };
    let mut report = Report::new("plot");
    describe(&spec.fibration, &mut report);
    report
        .value("fibres", fibres)
        .value("points_per_fibre", points)
        .value("vertices", fibres * points)
        .value("pole", pole.to_string())
        .value("retries", retries)
        .value("format", if format == PlotFormat::Csv { "csv" } else { "svg" });
    let stdout_body = match out {
        Some(path) => {
            std::fs::write(path, &body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            report.value("out", path.display().to_string());
            None
        }
        None => Some(body),
    };
    Ok((report, Outcome::Pass, stdout_body))
}

pub fn parse_family(text: &str) -> Result<FiringFamily, CliError> {
    if text == "hopf" {
        return Ok(FiringFamily::HopfConstant);
    }
    let Some(coeffs) = text.strip_prefix("linear-tilt:") else {
        return Err(CliError::Parse(format!("unknown family {text:?}; use hopf or linear-tilt:cf_x,cf_y,cg_x,cg_y")));
    };
    let values: Vec<f64> = coeffs
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Parse(format!("linear-tilt coefficients: {e}")))?;
    match values[..] {
        [a, b, c, d] if values.iter().all(|v| v.is_finite()) => Ok(FiringFamily::linear_tilt(a, b, c, d)),
        _ => Err(CliError::Parse("linear-tilt needs four finite coefficients".into())),
    }
}

pub enum OracleSource<'a> {
    Family(FiringFamily),
    Spec(&'a LoadedSpec),
}

pub fn cmd_oracle(source: OracleSource<'_>, region: f64, samples: usize) -> Result<(Report, Outcome), CliError> {
    if samples < 2 || !(region > 0.0 && region < 1.0) {
        return Err(CliError::Parse("oracle needs at least 2 samples and a region radius in (0, 1)".into()));
    }
    let thresholds = OracleThresholds { region_radius: region, samples, ..OracleThresholds::default() };
    let mut report = Report::new("oracle");
    let result = match source {
        OracleSource::Family(fam) => {
            let label = match fam {
                FiringFamily::HopfConstant => "hopf".to_string(),
                FiringFamily::LinearTilt { cf_x, cf_y, cg_x, cg_y } => {
                    format!("linear-tilt:{cf_x},{cf_y},{cg_x},{cg_y}")
                }
            };
            report.value("family", label);
            run_oracle(&fam, &thresholds)?
        }
        OracleSource::Spec(spec) => {
            describe(&spec.fibration, &mut report);
            // The scanned disk has radius below `region`, so the chart only needs to reach it.
            let settings = ChartSettings { epsilon: spec.epsilon.max(region * region), ..spec.chart_settings() };
            let chart = standardize(&spec.fibration, UnitQuaternion::ONE, &settings)?;
            run_oracle(&chart, &thresholds)?
        }
    };
    let (margin, scans, verdict) = result;
    report
        .real("margin", margin.margin)
        .real("factor1", margin.factor1)
        .real("factor2", margin.factor2)
        .real("min_theta", scans.first().map_or(f64::NAN, |s| s.min_theta))
        .value("verdict", verdict.as_str());
    let rows = scans
        .iter()
        .map(|s| {
            row([
                ("region", number(s.region_radius)),
                ("samples", s.samples.into()),
                ("min_theta", number(s.min_theta)),
                ("threshold", number(s.threshold)),
                ("colliding", s.colliding().into()),
                (
                    "witness",
                    Value::String(format!(
                        "({}, {}) ({}, {})",
                        s.witness.0[0], s.witness.0[1], s.witness.1[0], s.witness.1[1]
                    )),
                ),
            ])
        })
        .collect();
    report.rows("regions", rows);
    let outcome = match verdict {
        Agreement::AgreeAccept | Agreement::AgreeReject => Outcome::Pass,
        Agreement::Disagree => Outcome::Fail,
        Agreement::Inconclusive => Outcome::Inconclusive,
    };
    Ok((report, outcome))
}

type OracleResult = (gcfib::Prop1Margin, Vec<gcfib::verify::CollisionScan>, Agreement);

fn run_oracle<F: CircleFamily>(fam: &F, thresholds: &OracleThresholds) -> Result<OracleResult, CliError> {
    let r = prop1_oracle_agreement(fam, thresholds)?;
    Ok((r.margin, r.scans, r.verdict))
}
