//! Named tolerances shared across modules.

/// Algebraic identities evaluated in double precision.
pub const ALGEBRAIC: f64 = 1e-12;
/// Quantities obtained through finite differences.
pub const FINITE_DIFFERENCE: f64 = 1e-6;
/// Orthonormality of great-circle bases and related membership tests.
pub const CIRCLE: f64 = 1e-10;
/// Singular values below this count towards the null space.
pub const RANK: f64 = 1e-9;
/// Norms below this cannot be normalized.
pub const DEGENERATE_NORM: f64 = 1e-14;
/// `|Δ|` at or below this makes the chart differential singular.
pub const SINGULAR_DELTA: f64 = 1e-9;
/// Agreement required between the closed-form and finite-difference contact coefficients.
pub const CONTACT_CROSS_CHECK: f64 = 1e-5;
/// Drift allowed for a fibre that a deformation is supposed to fix.
pub const PRESERVED_FIBRE: f64 = 1e-8;
