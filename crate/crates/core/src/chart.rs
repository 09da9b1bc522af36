//! Local charts around one fibre.
//!
//! A rigid motion `p ↦ a·p·b` carries the chosen point to 1 and its fibre to
//! the circle through 1 and k. On the transverse disk
//! `P(x, y) = (√(1 − x² − y²), x, y, 0)` the fibre through `P` reaches
//! `Q = P·R` a quarter turn later, with `R = f i + g j + h k`; the triple
//! `(f, g, h)` is the firing solution and its jacobian at the origin decides
//! both the local fibration inequality and the sign of α ∧ dα.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::fibration::{solve_fixed_point, BaseMap, Fibration, Handedness, SolverOptions};
use crate::grassmann::GreatCircle;
use crate::quat::{ImaginaryUnit, Quaternion, UnitQuaternion};
use crate::sphere;
use crate::tol;

/// Default chart disk `x² + y² < 0.04`, radius 0.2.
pub const DEFAULT_EPSILON: f64 = 0.04;
/// Default finite-difference step for chart derivatives.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// The motion `p ↦ a·p·b` that standardizes a fibre, and the chart radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartFrame {
    pub a: UnitQuaternion,
    pub b: UnitQuaternion,
    pub epsilon: f64,
}

impl ChartFrame {
    pub fn apply(&self, p: UnitQuaternion) -> UnitQuaternion {
        self.a * p * self.b
    }
}

/// The base map of a fibration after the motion `p ↦ a·p·b`:
/// `u ↦ conj(b)·φ(conj(a)·u·a)·b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjugated<M> {
    pub inner: M,
    pub a: UnitQuaternion,
    pub b: UnitQuaternion,
}

impl<M: BaseMap> BaseMap for Conjugated<M> {
    fn eval(&self, u: ImaginaryUnit) -> ImaginaryUnit {
        self.b.rotate_inverse(self.inner.eval(self.a.rotate_inverse(u)))
    }

    fn anchor(&self) -> ImaginaryUnit {
        self.b.rotate_inverse(self.inner.anchor())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartSettings {
    pub epsilon: f64,
    pub solver: SolverOptions,
}

impl Default for ChartSettings {
    fn default() -> Self {
        // Chart solves feed finite differences, so they run close to machine precision.
        Self { epsilon: DEFAULT_EPSILON, solver: SolverOptions::default().with_tol(1e-14) }
    }
}

/// A fibration rotated so that the fibre through the chosen point runs from 1 to k.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardChart<M> {
    pub frame: ChartFrame,
    pub map: Conjugated<M>,
    pub solver: SolverOptions,
    /// The point the chart was built around, in original coordinates.
    pub origin: UnitQuaternion,
    /// Left-handed fibrations are charted through their right-handed mirror image.
    pub mirrored: bool,
}

/// Unit quaternion `a` with `a·m·conj(a) = k`; `m = −k` uses `a = i`.
fn rotation_to_k(m: ImaginaryUnit) -> UnitQuaternion {
    let v = m.vector();
    let axis = sphere::cross(v, [0.0, 0.0, 1.0]);
    let s = sphere::norm(axis);
    let c = v[2];
    if s < 1e-15 {
        return if c > 0.0 { UnitQuaternion::ONE } else { UnitQuaternion::I };
    }
    let axis = ImaginaryUnit::renormalized(axis);
    UnitQuaternion::from_axis_angle(axis, s.atan2(c))
}

pub fn standardize<M: BaseMap + Clone>(
    fib: &Fibration<M>,
    p0: UnitQuaternion,
    settings: &ChartSettings,
) -> Result<StandardChart<M>> {
    if !(settings.epsilon > 0.0 && settings.epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!("chart epsilon {} outside (0, 1]", settings.epsilon)));
    }
    let mirrored = fib.handedness == Handedness::Left;
    let p = if mirrored { p0.conj() } else { p0 };
    let m0 = solve_fixed_point(&fib.map, p, &settings.solver)?.m;
    let a = rotation_to_k(m0);
    let b = p.conj() * a.conj();
    let frame = ChartFrame { a, b, epsilon: settings.epsilon };

    let q = UnitQuaternion::renormalized(m0.quat() * p.quat());
    let at_one = (frame.apply(p).quat() - Quaternion::ONE).norm();
    let at_k = (frame.apply(q).quat() - Quaternion::K).norm();
    if at_one > tol::CIRCLE || at_k > tol::CIRCLE {
        return Err(Error::InternalConsistency(format!("standardizing motion misses 1 or k by {at_one:e}, {at_k:e}")));
    }
    Ok(StandardChart {
        frame,
        map: Conjugated { inner: fib.map.clone(), a, b },
        solver: settings.solver,
        origin: p0,
        mirrored,
    })
}

/// `P(x, y) = (√(1 − x² − y²), x, y, 0)`, defined on the open unit disk.
pub fn p_of(x: f64, y: f64) -> Result<UnitQuaternion> {
    let r2 = x * x + y * y;
    if !(r2 < 1.0) {
        return Err(Error::ChartDomain { x, y, epsilon: 1.0 });
    }
    Ok(UnitQuaternion::renormalized(Quaternion::new((1.0 - r2).sqrt(), x, y, 0.0)))
}

/// `(∂P/∂x, ∂P/∂y)` from the closed form of `P`.
pub fn p_partials(x: f64, y: f64) -> Result<(Quaternion, Quaternion)> {
    let r2 = x * x + y * y;
    if !(r2 < 1.0) {
        return Err(Error::ChartDomain { x, y, epsilon: 1.0 });
    }
    let s = (1.0 - r2).sqrt();
    Ok((Quaternion::new(-x / s, 1.0, 0.0, 0.0), Quaternion::new(-y / s, 0.0, 1.0, 0.0)))
}

/// The triple `(f, g, h)` at one chart point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiringSolution {
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

impl FiringSolution {
    pub fn as_array(&self) -> [f64; 3] {
        [self.f, self.g, self.h]
    }

    pub fn direction(&self) -> Quaternion {
        Quaternion::pure(self.as_array())
    }
}

impl<M: BaseMap> StandardChart<M> {
    pub fn p_of(&self, x: f64, y: f64) -> Result<UnitQuaternion> {
        if !(x * x + y * y < self.frame.epsilon) {
            return Err(Error::ChartDomain { x, y, epsilon: self.frame.epsilon });
        }
        p_of(x, y)
    }

    /// Fibre data through `P(x, y)`: the point, the Grassmann pair `(m, R)`.
    fn fibre_data(&self, x: f64, y: f64) -> Result<(UnitQuaternion, ImaginaryUnit, ImaginaryUnit)> {
        let p = self.p_of(x, y)?;
        let m = solve_fixed_point(&self.map, p, &self.solver)?.m;
        // R = conj(P)·Q with Q = m·P; the fixed-point equation makes it φ(m).
        Ok((p, m, self.map.eval(m)))
    }

    pub fn firing_solution(&self, x: f64, y: f64) -> Result<FiringSolution> {
        let (_, _, r) = self.fibre_data(x, y)?;
        let [f, g, h] = r.vector();
        Ok(FiringSolution { f, g, h })
    }

    /// The fibre through `P(x, y)` as a circle with basis `(P, Q)`.
    pub fn circle(&self, x: f64, y: f64) -> Result<GreatCircle> {
        let (p, m, _) = self.fibre_data(x, y)?;
        GreatCircle::new(p, UnitQuaternion::renormalized(m.quat() * p.quat()))
    }

    /// `Q(x, y)` from the expanded four-component formula, checked against
    /// the quaternion product `P·R`.
    pub fn q_of(&self, x: f64, y: f64) -> Result<UnitQuaternion> {
        let p = self.p_of(x, y)?;
        let FiringSolution { f, g, h } = self.firing_solution(x, y)?;
        let s = (1.0 - x * x - y * y).sqrt();
        let closed = Quaternion::new(-x * f - y * g, s * f + y * h, s * g - x * h, s * h + x * g - y * f);
        let product = p.quat() * Quaternion::pure([f, g, h]);
        let gap = (closed - product).norm();
        if gap > tol::ALGEBRAIC {
            return Err(Error::InternalConsistency(format!(
                "closed form of Q differs from P·R by {gap:e} at ({x}, {y})"
            )));
        }
        UnitQuaternion::new(closed)
    }

    pub fn firing_jacobian(&self, fd_step: f64) -> Result<JacobianEstimate> {
        jacobian_of(|x, y| self.firing_solution(x, y).map(|s| s.as_array()), fd_step)
    }
}

/// The partial derivatives `(f_x, f_y, g_x, g_y)` at the chart origin.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FiringJacobian {
    pub f_x: f64,
    pub f_y: f64,
    pub g_x: f64,
    pub g_y: f64,
}

impl FiringJacobian {
    pub const HOPF: Self = Self { f_x: 0.0, f_y: 0.0, g_x: 0.0, g_y: 0.0 };

    pub fn new(f_x: f64, f_y: f64, g_x: f64, g_y: f64) -> Self {
        Self { f_x, f_y, g_x, g_y }
    }

    /// `(a, b, c, d) = (f_x, f_y + 2, g_x − 2, g_y)`.
    pub fn abbreviations(&self) -> (f64, f64, f64, f64) {
        (self.f_x, self.f_y + 2.0, self.g_x - 2.0, self.g_y)
    }

    /// `Δ = a·d − b·c`.
    pub fn delta(&self) -> f64 {
        let (a, b, c, d) = self.abbreviations();
        a * d - b * c
    }
}

/// Firing jacobian together with the `h` partials, which vanish at the origin
/// because `(f, g, h)` is a unit vector equal to `(0, 0, 1)` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianEstimate {
    pub jacobian: FiringJacobian,
    pub h_x: f64,
    pub h_y: f64,
}

/// Central differences at `step` and `step / 2`, combined by one Richardson level.
pub fn jacobian_of<F>(firing: F, step: f64) -> Result<JacobianEstimate>
where
    F: Fn(f64, f64) -> Result<[f64; 3]>,
{
    if !(step > 0.0) {
        return Err(Error::InvalidArgument(format!("finite-difference step {step} must be positive")));
    }
    let central = |dx: f64, dy: f64| -> Result<[f64; 3]> {
        let (plus, minus) = (firing(dx, dy)?, firing(-dx, -dy)?);
        let h = dx.abs().max(dy.abs());
        Ok(std::array::from_fn(|i| (plus[i] - minus[i]) / (2.0 * h)))
    };
    let richardson =
        |coarse: [f64; 3], fine: [f64; 3]| -> [f64; 3] { std::array::from_fn(|i| (4.0 * fine[i] - coarse[i]) / 3.0) };
    let dx = richardson(central(step, 0.0)?, central(0.5 * step, 0.0)?);
    let dy = richardson(central(0.0, step)?, central(0.0, 0.5 * step)?);
    Ok(JacobianEstimate {
        jacobian: FiringJacobian { f_x: dx[0], f_y: dy[0], g_x: dx[1], g_y: dy[1] },
        h_x: dx[2],
        h_y: dy[2],
    })
}

/// `(dπ₁, dπ₂)` at the origin, with the zero third rows dropped.
pub fn dpi_matrices(j: &FiringJacobian) -> (Matrix2<f64>, Matrix2<f64>) {
    let dpi1 = Matrix2::new(j.f_x, j.f_y + 2.0, j.g_x - 2.0, j.g_y);
    let dpi2 = Matrix2::new(j.f_x, j.f_y, j.g_x, j.g_y);
    (dpi1, dpi2)
}

/// `M = d(π₂ π₁⁻¹) = (1/Δ)·[[Δ + 2c, −2a], [2d, Δ − 2b]]`.
pub fn m_matrix(j: &FiringJacobian) -> Result<Matrix2<f64>> {
    let (a, b, c, d) = j.abbreviations();
    let delta = j.delta();
    if delta.abs() <= tol::SINGULAR_DELTA {
        return Err(Error::SingularDifferential { delta });
    }
    Ok(Matrix2::new(delta + 2.0 * c, -2.0 * a, 2.0 * d, delta - 2.0 * b) / delta)
}

/// Whether a 2×2 linear map shrinks every nonzero vector.
///
/// `|M|² < 1 + (det M)²` says the two singular values lie on the same side of
/// 1; `|M|² < 2` picks the side below.
pub fn is_strictly_distance_decreasing(m: &Matrix2<f64>) -> bool {
    let frob = m.norm_squared();
    let det = m.determinant();
    frob < 1.0 + det * det && frob < 2.0
}

/// `4(1 + f_y)(1 − g_x) − (f_x − g_y)²` and its two factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop1Margin {
    pub margin: f64,
    pub factor1: f64,
    pub factor2: f64,
}

impl Prop1Margin {
    /// Local fibration verdict: positive margin with both factors positive.
    pub fn accepts(&self) -> bool {
        self.margin > 0.0 && self.factor1 > 0.0 && self.factor2 > 0.0
    }

    /// Smallest of the margin and the two factors.
    pub fn worst(&self) -> f64 {
        self.margin.min(self.factor1).min(self.factor2)
    }
}

pub fn prop1_margin(j: &FiringJacobian) -> Prop1Margin {
    let factor1 = 1.0 + j.f_y;
    let factor2 = 1.0 - j.g_x;
    let skew = j.f_x - j.g_y;
    Prop1Margin { margin: 4.0 * factor1 * factor2 - skew * skew, factor1, factor2 }
}

/// `(1 + f_y) + (1 − g_x)`; α ∧ dα is nonzero at the origin iff this is.
pub fn prop2_value(j: &FiringJacobian) -> f64 {
    (1.0 + j.f_y) + (1.0 - j.g_x)
}
