//! Numerical verification kernels for smooth great-circle fibrations of S³.
//!
//! Fibrations are described by strictly distance-decreasing base maps
//! φ: S² → S² in the S² × S² picture of oriented 2-planes in R⁴. From a base
//! map the crate solves for the fibre through any point, rotates that fibre to
//! pass through 1 and k, extracts the firing solution `(f, g, h)` on a
//! transverse disk, and evaluates both the local fibration inequality and the
//! contact coefficient of α ∧ dα there. Independent brute-force oracles live in
//! [`verify`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chart;
pub mod contact;
pub mod error;
pub mod fibration;
pub mod grassmann;
pub mod quat;
pub mod sampling;
pub mod sphere;
pub mod tol;
pub mod verify;

pub use chart::{
    dpi_matrices, is_strictly_distance_decreasing, m_matrix, p_of, prop1_margin, prop2_value, standardize, ChartFrame,
    ChartSettings, FiringJacobian, FiringSolution, JacobianEstimate, Prop1Margin, StandardChart,
};
pub use contact::{
    alpha_coeffs, chart_point, contact_along_path, contact_coefficient_analytic, contact_coefficient_numeric,
    contact_cross_check, AlphaCoeffs, ContactCheck, ContactSample, PathContactReport,
};
pub use error::{Error, Result};
pub use fibration::{
    deform, eval_phi, fibre_through, hopf_invariance_check, lipschitz_estimate, preserved_fibre_check, BaseMap,
    BaseMapKind, DeformationPath, DeformedMap, Fibration, FibrationSpec, FibreSolution, Handedness, SolverOptions,
};
pub use grassmann::{
    contains, from_grassmann, grassmann_distance, principal_angles, to_grassmann, GrassmannPoint, GreatCircle,
};
pub use quat::{ImaginaryUnit, Quaternion, UnitQuaternion};
pub use sphere::AxisAngle;
