//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use gcfib::chart::DEFAULT_FD_STEP;
use gcfib::contact::contact_cross_check;
use gcfib::fibration::solve_fixed_point;
use gcfib::sampling::{s3_points, s3_random};
use gcfib::verify::{
    amgm_samples, collision_scan, exhaustive_smallest_cap, m_criterion_survey, prop1_oracle_agreement, smallest_cap,
    Agreement, FiringFamily, OracleThresholds,
};
use gcfib::{
    from_grassmann, lipschitz_estimate, standardize, to_grassmann, AxisAngle, ChartSettings, FibrationSpec,
    GrassmannPoint, GreatCircle, Handedness, ImaginaryUnit, SolverOptions, UnitQuaternion,
};
use serde_json::Value;

const SEED: u64 = 20_240_601;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = gcfib_cli::run(std::iter::once("gcfib").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8 report"))
}

fn random_imaginary(seed: u64, count: usize) -> Vec<ImaginaryUnit> {
    s3_random(count, seed)
        .into_iter()
        .map(|q| {
            let [_, x, y, z] = q.to_array();
            ImaginaryUnit::from_vector([x, y, z]).unwrap_or(ImaginaryUnit::K)
        })
        .collect()
}

fn pull(lambda: f64) -> FibrationSpec {
    FibrationSpec::pull_toward(ImaginaryUnit::K, lambda, None).unwrap()
}

fn hopf_anchor() -> Outcome {
    let start = Instant::now();
    let path = spec_path("hopf.toml");
    let (code, out) = run_cli(&["--json", "contact", path.to_str().unwrap(), "--samples", "100"]);
    let elapsed = start.elapsed();
    let report: Value = serde_json::from_str(&out).expect("json report");
    let fibres = report["fibres"].as_array().cloned().unwrap_or_default();
    let exact = fibres.iter().all(|f| f["analytic"].as_f64() == Some(-2.0));
    let worst = fibres.iter().map(|f| (f["numeric"].as_f64().unwrap_or(f64::NAN) + 2.0).abs()).fold(0.0, f64::max);
    let pass = code == 0 && fibres.len() == 100 && exact && worst <= 1e-6 && elapsed < Duration::from_secs(5);
    outcome(pass, format!("100 fibres, analytic exactly -2: {exact}, max |numeric + 2| = {worst:.3e}, {:.2?}", elapsed))
}

fn cancellation() -> Outcome {
    let specs = [
        ("hopf", FibrationSpec::hopf(ImaginaryUnit::K)),
        ("pull 0.1", pull(0.1)),
        ("pull 0.2", pull(0.2)),
        ("pull 0.3", pull(0.3)),
    ];
    let mut worst = 0.0f64;
    let mut failures = 0;
    for (_, spec) in &specs {
        for p in s3_points(50, SEED) {
            let chart = standardize(spec, p, &ChartSettings::default()).unwrap();
            match contact_cross_check(&chart, DEFAULT_FD_STEP) {
                Ok(check) => worst = worst.max(check.discrepancy()),
                Err(_) => failures += 1,
            }
        }
    }
    outcome(
        failures == 0 && worst <= 1e-5,
        format!("4 specs x 50 fibres, max pairwise gap {worst:.3e}, solver failures {failures}"),
    )
}

fn m_criterion() -> Outcome {
    let start = Instant::now();
    let survey = m_criterion_survey(100_000, SEED).unwrap();
    let elapsed = start.elapsed();
    outcome(
        survey.disagreements.is_empty() && elapsed < Duration::from_secs(10),
        format!(
            "{} samples, {} considered, {} disagreements, {:.2?}",
            survey.samples,
            survey.considered,
            survey.disagreements.len(),
            elapsed
        ),
    )
}

fn amgm() -> Outcome {
    match amgm_samples(100_000, SEED) {
        Ok(r) => outcome(
            r.accepted > 0 && r.min_prop2 > 0.0 && r.min_delta > 0.0,
            format!(
                "{} accepted of {}, min prop2 {:.3e}, min delta {:.3e}",
                r.accepted, r.samples, r.min_prop2, r.min_delta
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn oracle_concordance() -> Outcome {
    let thresholds = OracleThresholds::default();
    let mut lines = Vec::new();
    let mut pass = true;
    for cf_x in [0.0, 0.5, 1.0, 1.5, 1.9, 2.1, 3.0] {
        let fam = FiringFamily::linear_tilt(cf_x, 0.0, 0.0, 0.0);
        let report = prop1_oracle_agreement(&fam, &thresholds).unwrap();
        let scan = collision_scan(&fam, 400, 0.2).unwrap();
        let ok = if cf_x < 2.0 {
            report.verdict == Agreement::AgreeAccept && scan.min_theta > 0.0
        } else {
            report.verdict == Agreement::AgreeReject && scan.min_theta < 1e-2
        };
        pass &= ok;
        lines.push(format!("{cf_x}:{}({:.1e})", report.verdict.as_str(), scan.min_theta));
    }
    outcome(pass, lines.join(" "))
}

fn grassmann_round_trip() -> Outcome {
    let ms = random_imaginary(SEED, 10_000);
    let ns = random_imaginary(SEED + 1, 10_000);
    let mut worst_trip = 0.0f64;
    for (&m, &n) in ms.iter().zip(&ns) {
        let g = GrassmannPoint::new(m, n);
        worst_trip = worst_trip.max(from_grassmann(&g).map(|c| to_grassmann(&c).distance(&g)).unwrap_or(f64::INFINITY));
    }
    let (a, b, p) = (s3_random(10_000, SEED + 2), s3_random(10_000, SEED + 3), s3_random(10_000, SEED + 4));
    let mut worst_equi = 0.0f64;
    for i in 0..10_000 {
        let c = GreatCircle::new(p[i], UnitQuaternion::from(ms[i]) * p[i]).unwrap();
        let moved = GreatCircle::new(a[i] * c.p() * b[i], a[i] * c.q() * b[i]).unwrap();
        let g = to_grassmann(&c);
        let expected = GrassmannPoint::new(a[i].rotate(g.m), b[i].rotate_inverse(g.n));
        worst_equi = worst_equi.max(to_grassmann(&moved).distance(&expected));
    }
    outcome(
        worst_trip <= 1e-9 && worst_equi <= 1e-10,
        format!("round trip max {worst_trip:.3e}, equivariance max {worst_equi:.3e}"),
    )
}

fn fixed_point_solver() -> Outcome {
    let mut max_iter = 0;
    let mut max_excess = f64::NEG_INFINITY;
    let mut failures = 0;
    for lambda in [0.1, 0.2, 0.3, 0.4] {
        let spec = pull(lambda);
        let lip = lipschitz_estimate(&spec.map, 32).unwrap();
        for p in s3_random(1000, SEED + (lambda * 10.0) as u64) {
            match solve_fixed_point(&spec.map, p, &SolverOptions::default()) {
                Ok(fp) if fp.residual < 1e-12 => {
                    max_iter = max_iter.max(fp.iterations);
                    if let Some(r) = fp.max_contraction_ratio(1e-13) {
                        max_excess = max_excess.max(r - lip);
                    }
                }
                _ => failures += 1,
            }
        }
    }
    outcome(
        failures == 0 && max_iter <= 60 && max_excess <= 0.05,
        format!(
            "4000 solves, max iterations {max_iter}, max (ratio - lipschitz) {max_excess:+.3e}, unconverged {failures}"
        ),
    )
}

fn h_derivatives() -> Outcome {
    let specs = [
        FibrationSpec::hopf(ImaginaryUnit::K),
        pull(0.2),
        pull(0.45),
        FibrationSpec::pull_toward(
            ImaginaryUnit::new(0.3, -0.2, 1.0).unwrap(),
            0.35,
            Some(AxisAngle::new(ImaginaryUnit::J, 0.8)),
        )
        .unwrap(),
        pull(0.3).with_handedness(Handedness::Left),
    ];
    let mut worst = 0.0f64;
    for spec in &specs {
        for p in s3_points(20, SEED) {
            let est =
                standardize(spec, p, &ChartSettings::default()).unwrap().firing_jacobian(DEFAULT_FD_STEP).unwrap();
            worst = worst.max(est.h_x.abs()).max(est.h_y.abs());
        }
    }
    outcome(worst <= 1e-6, format!("5 specs x 20 fibres, max |h_x|, |h_y| = {worst:.3e}"))
}

fn cap_points(set: u64) -> Vec<ImaginaryUnit> {
    let center = random_imaginary(SEED + 100 + set, 1)[0];
    let count = 1 + (set as usize % 12);
    random_imaginary(SEED + 200 + set, 4000)
        .into_iter()
        .filter(|&u| gcfib::sphere::distance(center, u) < 0.4)
        .take(count)
        .collect()
}

fn smallest_caps() -> Outcome {
    let mut worst = 0.0f64;
    let mut sizes = 0;
    for set in 0..50 {
        let points = cap_points(set);
        sizes += points.len();
        let (fast, slow) = (smallest_cap(&points), exhaustive_smallest_cap(&points));
        worst = worst.max(match (fast, slow) {
            (Ok(a), Ok(b)) => (a.radius - b.radius).abs(),
            _ => f64::INFINITY,
        });
    }
    outcome(worst <= 1e-9, format!("50 sets ({sizes} points), max radius gap {worst:.3e}"))
}

fn deformation() -> Outcome {
    let path = spec_path("pull_toward.toml");
    let (code, out) = run_cli(&["--json", "deform", path.to_str().unwrap(), "--steps", "20", "--fix-fibre", "1,0,0,0"]);
    let report: Value = serde_json::from_str(&out).expect("json report");
    let stages = report["stages"].as_array().cloned().unwrap_or_default();
    let all = |key: &str, f: &dyn Fn(f64) -> bool| stages.iter().all(|s| s[key].as_f64().is_some_and(f));
    let lip = all("lipschitz", &|v| v < 1.0);
    let margin = all("min_margin", &|v| v > 0.0);
    let contact = all("max_coefficient", &|v| v < 0.0);
    let drift = all("drift", &|v| v <= 1e-8);
    let endpoint = report["endpoint_distance_from_constant"].as_f64().unwrap_or(f64::INFINITY);
    let noted = report["notes"].to_string().contains("tightness is not checked");
    outcome(
        code == 0 && stages.len() == 21 && lip && margin && contact && drift && endpoint <= 1e-10 && noted,
        format!(
            "21 stages: lipschitz<1 {lip}, margin>0 {margin}, contact {contact}, drift {drift} (max {}), endpoint {endpoint:.1e}",
            report["max_drift"]
        ),
    )
}

fn plot_contract() -> Outcome {
    let out_path = std::env::temp_dir().join(format!("gcfib-acceptance-{}.csv", std::process::id()));
    let spec = spec_path("hopf.toml");
    let (code, _) = run_cli(&[
        "plot",
        spec.to_str().unwrap(),
        "--fibres",
        "24",
        "--points-per-fibre",
        "256",
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&out_path).unwrap_or_default();
    let _ = std::fs::remove_file(&out_path);
    let mut lines = text.lines();
    let header_ok = lines.next() == Some("fibre_id,vertex_index,px,py,pz");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect()).collect();
    let mut worst_gap = 0.0f64;
    for fibre in rows.chunks(256) {
        let (a, b) = (&fibre[0], &fibre[fibre.len() - 1]);
        worst_gap = worst_gap.max((2..5).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max));
    }
    outcome(
        code == 0 && header_ok && rows.len() == 6144 && worst_gap <= 1e-6,
        format!("{} rows plus header ({header_ok}), max closure gap {worst_gap:.3e}", rows.len()),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("hopf anchor", hopf_anchor),
        ("cancellation check", cancellation),
        ("margin vs M-criterion", m_criterion),
        ("AM-GM implication", amgm),
        ("oracle concordance", oracle_concordance),
        ("Grassmann round trip", grassmann_round_trip),
        ("fixed-point solver", fixed_point_solver),
        ("h-derivatives", h_derivatives),
        ("smallest cap", smallest_caps),
        ("deformation", deformation),
        ("plot contract", plot_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        println!("{} {:>2} {name}: {}", if result.pass { "PASS" } else { "FAIL" }, i + 1, result.detail);
        failed += usize::from(!result.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
