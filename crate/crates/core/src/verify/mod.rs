//! Brute-force oracles that check the analytic criteria independently.

mod amgm;
mod cap;
mod collision;
mod family;

pub use amgm::{amgm_samples, m_criterion_survey, sample_jacobians, AmgmReport, CriterionSurvey, JACOBIAN_RANGE};
pub use cap::{exhaustive_smallest_cap, smallest_cap, SphericalCap};
pub use collision::{collision_scan, prop1_oracle_agreement, Agreement, CollisionScan, OracleReport, OracleThresholds};
pub use family::{CircleFamily, FiringFamily};
