use crate::chart::{prop1_margin, Prop1Margin};
use crate::error::{Error, Result};
use crate::grassmann::{principal_angles, GreatCircle};
use crate::sampling::{disk_spacing, disk_sunflower};

use super::family::CircleFamily;

/// Closest pair of circles over a sampled disk of the chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionScan {
    pub min_theta: f64,
    pub witness: ([f64; 2], [f64; 2]),
    pub samples: usize,
    pub region_radius: f64,
    pub spacing: f64,
    /// A pair closer than `spacing²` counts as a collision.
    pub threshold: f64,
}

impl CollisionScan {
    pub fn colliding(&self) -> bool {
        self.min_theta < self.threshold
    }
}

pub fn collision_scan<F: CircleFamily + ?Sized>(
    fam: &F,
    n_samples: usize,
    region_radius: f64,
) -> Result<CollisionScan> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument(format!("collision scan needs at least 2 samples, got {n_samples}")));
    }
    if !(region_radius > 0.0 && region_radius < 1.0) {
        return Err(Error::InvalidArgument(format!("region radius {region_radius} outside (0, 1)")));
    }
    let points = disk_sunflower(n_samples, region_radius);
    let circles = points.iter().map(|&[x, y]| fam.circle(x, y)).collect::<Result<Vec<GreatCircle>>>()?;
    let mut best = (f64::INFINITY, 0, 1);
    for i in 0..circles.len() {
        for j in i + 1..circles.len() {
            let theta = principal_angles(&circles[i], &circles[j]).0;
            if theta < best.0 {
                best = (theta, i, j);
            }
        }
    }
    let spacing = disk_spacing(n_samples, region_radius);
    Ok(CollisionScan {
        min_theta: best.0,
        witness: (points[best.1], points[best.2]),
        samples: n_samples,
        region_radius,
        spacing,
        threshold: spacing * spacing,
    })
}

/// Parameters of the shrinking-region protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleThresholds {
    pub region_radius: f64,
    /// Radii `r, r/2, …, r/2^(levels−1)` are scanned.
    pub levels: usize,
    pub samples: usize,
    /// Margins with `|margin|` below this are not judged.
    pub band: f64,
}

impl Default for OracleThresholds {
    fn default() -> Self {
        Self { region_radius: 0.2, levels: 3, samples: 400, band: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    AgreeAccept,
    AgreeReject,
    Disagree,
    Inconclusive,
}

impl Agreement {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::AgreeAccept => "agree-accept",
            Self::AgreeReject => "agree-reject",
            Self::Disagree => "disagree",
            Self::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub margin: Prop1Margin,
    pub scans: Vec<CollisionScan>,
    /// `Some(true)` when the smallest region is collision free, `Some(false)`
    /// when every region collides, `None` otherwise.
    pub scan_accepts: Option<bool>,
    pub verdict: Agreement,
}

/// Compares the analytic verdict with collision scans over shrinking regions.
pub fn prop1_oracle_agreement<F: CircleFamily + ?Sized>(
    fam: &F,
    thresholds: &OracleThresholds,
) -> Result<OracleReport> {
    if thresholds.levels == 0 {
        return Err(Error::InvalidArgument("oracle needs at least one region".into()));
    }
    let margin = prop1_margin(&fam.jacobian()?);
    let scans = (0..thresholds.levels)
        .map(|level| collision_scan(fam, thresholds.samples, thresholds.region_radius / f64::powi(2.0, level as i32)))
        .collect::<Result<Vec<_>>>()?;
    let scan_accepts = if scans.iter().all(CollisionScan::colliding) {
        Some(false)
    } else if !scans.last().is_some_and(CollisionScan::colliding) {
        Some(true)
    } else {
        None
    };
    let verdict = match scan_accepts {
        _ if margin.margin.abs() < thresholds.band => Agreement::Inconclusive,
        None => Agreement::Inconclusive,
        Some(scan) if scan == margin.accepts() => {
            if scan {
                Agreement::AgreeAccept
            } else {
                Agreement::AgreeReject
            }
        }
        Some(_) => Agreement::Disagree,
    };
    Ok(OracleReport { margin, scans, scan_accepts, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{standardize, ChartSettings};
    use crate::fibration::FibrationSpec;
    use crate::quat::{ImaginaryUnit, UnitQuaternion};
    use crate::verify::FiringFamily;

    fn tilt(cf_x: f64) -> FiringFamily {
        FiringFamily::linear_tilt(cf_x, 0.0, 0.0, 0.0)
    }

    #[test]
    fn hopf_scan_is_clean() {
        let scan = collision_scan(&FiringFamily::HopfConstant, 200, 0.2).unwrap();
        assert!(!scan.colliding());
        // Hopf fibres through chart points at distance d meet at angle about d.
        assert!(scan.min_theta > 0.5 * scan.spacing, "{scan:?}");
    }

    #[test]
    fn tilt_examples() {
        let accept = collision_scan(&tilt(1.0), 400, 0.2).unwrap();
        assert!(accept.min_theta > 0.0 && !accept.colliding());
        let reject = collision_scan(&tilt(3.0), 400, 0.2).unwrap();
        assert!(reject.min_theta < 1e-2 && reject.colliding());
        assert_ne!(reject.witness.0, reject.witness.1);
    }

    #[test]
    fn invalid_arguments() {
        assert!(collision_scan(&tilt(0.0), 1, 0.2).is_err());
        assert!(collision_scan(&tilt(0.0), 10, 1.5).is_err());
        let zero = OracleThresholds { levels: 0, ..OracleThresholds::default() };
        assert!(prop1_oracle_agreement(&tilt(0.0), &zero).is_err());
    }

    #[test]
    fn verdicts_on_the_family_grid() {
        let t = OracleThresholds::default();
        for cf_x in [0.0, 0.5, 1.0, 1.5, 1.9] {
            assert_eq!(prop1_oracle_agreement(&tilt(cf_x), &t).unwrap().verdict, Agreement::AgreeAccept, "{cf_x}");
        }
        for cf_x in [2.1, 3.0] {
            assert_eq!(prop1_oracle_agreement(&tilt(cf_x), &t).unwrap().verdict, Agreement::AgreeReject, "{cf_x}");
        }
        let hopf = prop1_oracle_agreement(&FiringFamily::HopfConstant, &t).unwrap();
        assert_eq!(hopf.verdict, Agreement::AgreeAccept);
    }

    #[test]
    fn boundary_band_is_inconclusive() {
        // cf_x = 2 gives margin exactly 0.
        let report = prop1_oracle_agreement(&tilt(2.0), &OracleThresholds::default()).unwrap();
        assert_eq!(report.verdict, Agreement::Inconclusive);
    }

    #[test]
    fn fibration_charts_never_collide() {
        let spec = FibrationSpec::pull_toward(ImaginaryUnit::new(0.2, 0.0, 1.0).unwrap(), 0.4, None).unwrap();
        let p0 = UnitQuaternion::from_components(0.5, 0.5, -0.5, 0.5).unwrap();
        let chart = standardize(&spec, p0, &ChartSettings::default()).unwrap();
        for n in [50, 150] {
            let scan = collision_scan(&chart, n, 0.19).unwrap();
            assert!(scan.min_theta > 0.0 && !scan.colliding(), "{scan:?}");
        }
    }
}
