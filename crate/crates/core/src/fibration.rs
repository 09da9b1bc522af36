//! Base maps φ: S² → S², the fibre-through-a-point solver, and the
//! deformation of a fibration to a Hopf fibration that keeps one fibre fixed.
//!
//! A right-handed fibration with base map φ consists of the circles whose
//! Grassmann image `(m, n)` satisfies `n = φ(m)`. The circle through `p` has
//! basis `(p, m·p)` where `m = p·φ(m)·conj(p)`; conjugation by `p` is an
//! isometry of S², so the right-hand side is a contraction whenever `|dφ| < 1`.

use crate::error::{Error, Result};
use crate::grassmann::{grassmann_distance, to_grassmann, GreatCircle};
use crate::quat::{ImaginaryUnit, UnitQuaternion};
use crate::sampling::s2_fibonacci;
use crate::sphere::{self, AxisAngle};

/// A smooth map S² → S².
pub trait BaseMap: Send + Sync {
    fn eval(&self, u: ImaginaryUnit) -> ImaginaryUnit;

    /// A point of (or near) the image; fixed-point iterations start from its
    /// conjugate by the base point.
    fn anchor(&self) -> ImaginaryUnit {
        ImaginaryUnit::K
    }
}

impl<M: BaseMap + ?Sized> BaseMap for &M {
    fn eval(&self, u: ImaginaryUnit) -> ImaginaryUnit {
        (**self).eval(u)
    }

    fn anchor(&self) -> ImaginaryUnit {
        (**self).anchor()
    }
}

/// The parametric family of base maps a [`FibrationSpec`] can carry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseMapKind {
    /// `u ↦ axis`; with right handedness this is the right Hopf fibration around `axis`.
    Constant { axis: ImaginaryUnit },
    /// `u ↦ normalize(center + lambda·ρ(u))`, with `|dφ| ≤ lambda / (1 − lambda)`.
    PullToward { center: ImaginaryUnit, lambda: f64, rotation: AxisAngle },
}

impl BaseMapKind {
    /// Analytic upper bound on `|dφ|`.
    pub fn lipschitz_bound(&self) -> f64 {
        match *self {
            Self::Constant { .. } => 0.0,
            Self::PullToward { lambda, .. } => lambda / (1.0 - lambda),
        }
    }
}

impl BaseMap for BaseMapKind {
    fn eval(&self, u: ImaginaryUnit) -> ImaginaryUnit {
        match *self {
            Self::Constant { axis } => axis,
            Self::PullToward { center, lambda, rotation } => {
                let r = rotation.apply(u).vector();
                let c = center.vector();
                ImaginaryUnit::renormalized([c[0] + lambda * r[0], c[1] + lambda * r[1], c[2] + lambda * r[2]])
            }
        }
    }

    fn anchor(&self) -> ImaginaryUnit {
        match *self {
            Self::Constant { axis } => axis,
            Self::PullToward { center, .. } => center,
        }
    }
}

/// Screw sense. Left-handed fibrations are the mirror images of right-handed
/// ones under `p ↦ conj(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Handedness {
    #[default]
    Right,
    Left,
}

/// A base map together with a screw sense.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fibration<M = BaseMapKind> {
    pub map: M,
    pub handedness: Handedness,
}

/// A fibration drawn from the parametric family of [`BaseMapKind`].
pub type FibrationSpec = Fibration<BaseMapKind>;

/// Largest `lambda` accepted without an explicit override.
pub const LAMBDA_LIMIT: f64 = 0.5;

impl FibrationSpec {
    /// The right Hopf fibration whose fibres are the orbits `p·(cos t + axis·sin t)`.
    pub fn hopf(axis: ImaginaryUnit) -> Self {
        Self { map: BaseMapKind::Constant { axis }, handedness: Handedness::Right }
    }

    /// `PullToward` with `0 ≤ lambda < 1/2`, which makes `|dφ| < 1` automatic.
    pub fn pull_toward(center: ImaginaryUnit, lambda: f64, rotation: Option<AxisAngle>) -> Result<Self> {
        if !(0.0..LAMBDA_LIMIT).contains(&lambda) {
            return Err(Error::InvalidSpec(format!("lambda = {lambda} must lie in [0, 1/2)")));
        }
        Self::pull_toward_unrestricted(center, lambda, rotation)
    }

    /// `PullToward` with any `0 ≤ lambda < 1`. The base map is well defined but
    /// need not be distance decreasing; callers must check [`lipschitz_estimate`].
    pub fn pull_toward_unrestricted(center: ImaginaryUnit, lambda: f64, rotation: Option<AxisAngle>) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::InvalidSpec(format!("lambda = {lambda} must lie in [0, 1)")));
        }
        let rotation = rotation.unwrap_or_else(AxisAngle::identity);
        Ok(Self { map: BaseMapKind::PullToward { center, lambda, rotation }, handedness: Handedness::Right })
    }
}

impl<M> Fibration<M> {
    pub fn new(map: M, handedness: Handedness) -> Self {
        Self { map, handedness }
    }

    pub fn with_handedness(self, handedness: Handedness) -> Self {
        Self { handedness, ..self }
    }
}

pub fn eval_phi<M: BaseMap>(spec: &Fibration<M>, u: ImaginaryUnit) -> ImaginaryUnit {
    spec.map.eval(u)
}

/// How the fixed-point iteration is driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceleration {
    /// Plain iteration `m ← p·φ(m)·conj(p)`.
    None,
    /// Depth-2 Anderson mixing, accepted only when it beats the plain step.
    Anderson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub acceleration: Acceleration,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 200, acceleration: Acceleration::Anderson }
    }
}

impl SolverOptions {
    pub fn with_tol(self, tol: f64) -> Self {
        Self { tol, ..self }
    }

    pub fn plain(self) -> Self {
        Self { acceleration: Acceleration::None, ..self }
    }
}

/// Result of solving `m = p·φ(m)·conj(p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub m: ImaginaryUnit,
    /// Index of the first iterate whose residual dropped below the tolerance.
    pub iterations: usize,
    pub residual: f64,
    /// Residual `|m_k − p·φ(m_k)·conj(p)|` of every iterate, starting with the initial guess.
    pub trace: Vec<f64>,
}

impl FixedPoint {
    /// Largest ratio of consecutive residuals while the earlier one exceeds `floor`.
    pub fn max_contraction_ratio(&self, floor: f64) -> Option<f64> {
        self.trace.windows(2).filter(|w| w[0] > floor).map(|w| w[1] / w[0]).reduce(f64::max)
    }
}

struct Iterate {
    m: [f64; 3],
    image: [f64; 3],
    residual: [f64; 3],
    size: f64,
}

impl Iterate {
    fn at<M: BaseMap + ?Sized>(map: &M, p: UnitQuaternion, m: ImaginaryUnit) -> Self {
        let image = p.rotate(map.eval(m)).vector();
        let residual = sphere::sub(image, m.vector());
        Self { m: m.vector(), image, residual, size: sphere::norm(residual) }
    }
}

/// Anderson candidate from the current iterate and up to two predecessors.
fn anderson_candidate(history: &[Iterate]) -> Option<ImaginaryUnit> {
    let n = history.len();
    if n < 2 {
        return None;
    }
    let cur = &history[n - 1];
    let d1r = sphere::sub(cur.residual, history[n - 2].residual);
    let d1t = sphere::sub(cur.image, history[n - 2].image);
    let mixed = if n >= 3 {
        let d2r = sphere::sub(history[n - 2].residual, history[n - 3].residual);
        let d2t = sphere::sub(history[n - 2].image, history[n - 3].image);
        let (a, b, d) = (sphere::dot(d1r, d1r), sphere::dot(d1r, d2r), sphere::dot(d2r, d2r));
        let det = a * d - b * b;
        let (r1, r2) = (sphere::dot(d1r, cur.residual), sphere::dot(d2r, cur.residual));
        if det > 1e-10 * a * d && det > 0.0 {
            let g1 = (d * r1 - b * r2) / det;
            let g2 = (a * r2 - b * r1) / det;
            sphere::sub(cur.image, sphere::add(sphere::scale(d1t, g1), sphere::scale(d2t, g2)))
        } else if a > 0.0 {
            sphere::sub(cur.image, sphere::scale(d1t, r1 / a))
        } else {
            return None;
        }
    } else {
        let a = sphere::dot(d1r, d1r);
        if a == 0.0 {
            return None;
        }
        sphere::sub(cur.image, sphere::scale(d1t, sphere::dot(d1r, cur.residual) / a))
    };
    ImaginaryUnit::from_vector(mixed).ok()
}

/// Solves `m = p·φ(m)·conj(p)` starting from `p·anchor·conj(p)`.
///
/// Every accepted step has a residual no larger than the plain step from the
/// same iterate, so the residual trace contracts at least as fast as `|dφ|`.
pub fn solve_fixed_point<M: BaseMap + ?Sized>(map: &M, p: UnitQuaternion, opts: &SolverOptions) -> Result<FixedPoint> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {} must be positive", opts.tol)));
    }
    let start = p.rotate(map.anchor());
    let mut history = vec![Iterate::at(map, p, start)];
    let mut trace = vec![history[0].size];
    let mut iterations = 0;
    loop {
        let cur = history.last().expect("history is never empty");
        if cur.size < opts.tol {
            return Ok(FixedPoint { m: ImaginaryUnit::renormalized(cur.m), iterations, residual: cur.size, trace });
        }
        if iterations >= opts.max_iter {
            return Err(Error::NonContraction { iterations, residual: cur.size });
        }
        let mut next = Iterate::at(map, p, ImaginaryUnit::renormalized(cur.image));
        if opts.acceleration == Acceleration::Anderson {
            if let Some(candidate) = anderson_candidate(&history) {
                let mixed = Iterate::at(map, p, candidate);
                if mixed.size < next.size {
                    next = mixed;
                }
            }
        }
        trace.push(next.size);
        history.push(next);
        if history.len() > 3 {
            history.remove(0);
        }
        iterations += 1;
    }
}

/// The fibre of a fibration through a point.
#[derive(Debug, Clone, PartialEq)]
pub struct FibreSolution {
    /// Circle with basis `(p, Q)`.
    pub circle: GreatCircle,
    /// First Grassmann coordinate `Q·conj(p)` of the circle.
    pub m: ImaginaryUnit,
    /// The solved fixed point in right-handed coordinates (equal to `m` for
    /// right-handed fibrations).
    pub fixed_point: FixedPoint,
}

pub fn fibre_through<M: BaseMap>(fib: &Fibration<M>, p: UnitQuaternion, opts: &SolverOptions) -> Result<FibreSolution> {
    match fib.handedness {
        Handedness::Right => {
            let fp = solve_fixed_point(&fib.map, p, opts)?;
            let q = UnitQuaternion::renormalized(fp.m.quat() * p.quat());
            let circle = GreatCircle::new(p, q)?;
            Ok(FibreSolution { circle, m: fp.m, fixed_point: fp })
        }
        Handedness::Left => {
            // Mirror of the right-handed fibre through conj(p), with orientation
            // chosen so that Q = p·m'.
            let fp = solve_fixed_point(&fib.map, p.conj(), opts)?;
            let q = UnitQuaternion::renormalized(p.quat() * fp.m.quat());
            let circle = GreatCircle::new(p, q)?;
            let m = to_grassmann(&circle).m;
            Ok(FibreSolution { circle, m, fixed_point: fp })
        }
    }
}

/// Distance from `p·(cos t + axis·sin t)` to the right Hopf fibre through `p`.
pub fn hopf_invariance_check(axis: ImaginaryUnit, p: UnitQuaternion, t: f64) -> Result<f64> {
    let fibre = fibre_through(&FibrationSpec::hopf(axis), p, &SolverOptions::default())?;
    let moved = p * UnitQuaternion::exp_imaginary(axis, t);
    Ok(crate::grassmann::contains(&fibre.circle, moved))
}

/// Finite-difference step along geodesics used by [`lipschitz_estimate`].
const LIPSCHITZ_STEP: f64 = 1e-5;

/// Largest operator norm of `dφ` over a Fibonacci grid of `grid_density²`
/// points, each differential estimated by central differences in two
/// orthonormal tangent directions.
pub fn lipschitz_estimate<M: BaseMap + ?Sized>(map: &M, grid_density: usize) -> Result<f64> {
    if grid_density < 16 {
        return Err(Error::InvalidArgument(format!("grid density {grid_density} is below 16")));
    }
    let h = LIPSCHITZ_STEP;
    let norms = s2_fibonacci(grid_density * grid_density).into_iter().map(|u| {
        let (e1, e2) = sphere::tangent_basis(u);
        let column = |e: [f64; 3]| {
            let plus = map.eval(sphere::exp(u, sphere::scale(e, h))).vector();
            let minus = map.eval(sphere::exp(u, sphere::scale(e, -h))).vector();
            sphere::scale(sphere::sub(plus, minus), 0.5 / h)
        };
        let (c1, c2) = (column(e1), column(e2));
        let (a, b, d) = (sphere::dot(c1, c1), sphere::dot(c1, c2), sphere::dot(c2, c2));
        (0.5 * (a + d) + (0.25 * (a - d) * (a - d) + b * b).sqrt()).sqrt()
    });
    Ok(norms.fold(0.0, f64::max))
}

/// Grid density used when a deformation checks its preconditions.
pub const DEFORMATION_GRID: usize = 24;

/// A straight-line (geodesic) contraction of a base map towards one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationPath {
    pub start: FibrationSpec,
    pub target: ImaginaryUnit,
    pub steps: usize,
}

impl DeformationPath {
    pub fn new(start: FibrationSpec, target: ImaginaryUnit, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidArgument("a deformation needs at least one step".into()));
        }
        Ok(Self { start, target, steps })
    }

    /// Path whose target is the base-map value at the fibre through `p0`, so
    /// that every stage keeps that fibre.
    pub fn fixing_fibre(start: FibrationSpec, p0: UnitQuaternion, steps: usize, opts: &SolverOptions) -> Result<Self> {
        let fibre = fibre_through(&start, p0, opts)?;
        Self::new(start, start.map.eval(fibre.fixed_point.m), steps)
    }

    /// `t_k = k / steps` for `k = 0..=steps`.
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(move |k| k as f64 / self.steps as f64)
    }

    /// Largest distance from the target to the image of the start map on the check grid.
    pub fn image_radius(&self) -> f64 {
        s2_fibonacci(DEFORMATION_GRID * DEFORMATION_GRID)
            .into_iter()
            .map(|u| sphere::distance(self.target, self.start.map.eval(u)))
            .fold(0.0, f64::max)
    }
}

/// `φ_t(u)`: the point at fraction `keep = 1 − t` of the geodesic from the target to `φ(u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedMap {
    pub base: BaseMapKind,
    pub target: ImaginaryUnit,
    pub keep: f64,
}

impl BaseMap for DeformedMap {
    fn eval(&self, u: ImaginaryUnit) -> ImaginaryUnit {
        if self.keep == 0.0 {
            return self.target;
        }
        sphere::geodesic_fraction(self.target, self.base.eval(u), self.keep)
    }

    fn anchor(&self) -> ImaginaryUnit {
        self.target
    }
}

/// Stage `t` of the deformation, with both preconditions checked numerically:
/// the start image must lie within π/2 of the target and the stage must stay
/// strictly distance decreasing.
pub fn deform(path: &DeformationPath, t: f64) -> Result<Fibration<DeformedMap>> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("deformation time {t} outside [0, 1]")));
    }
    let radius = path.image_radius();
    if radius >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::DeformationDomain { distance: radius });
    }
    let map = DeformedMap { base: path.start.map, target: path.target, keep: 1.0 - t };
    let lipschitz = lipschitz_estimate(&map, DEFORMATION_GRID)?;
    if lipschitz >= 1.0 {
        return Err(Error::DeformationValidity { t, lipschitz });
    }
    Ok(Fibration::new(map, path.start.handedness))
}

/// Grassmann distance between the fibres through `p0` at stage `t` and at the start.
pub fn preserved_fibre_check(path: &DeformationPath, p0: UnitQuaternion, t: f64, opts: &SolverOptions) -> Result<f64> {
    let original = fibre_through(&path.start, p0, opts)?;
    let stage = fibre_through(&deform(path, t)?, p0, opts)?;
    Ok(grassmann_distance(&original.circle, &stage.circle))
}

/// Largest distance from the target over the check grid; zero for a constant stage.
pub fn distance_from_constant<M: BaseMap + ?Sized>(map: &M, target: ImaginaryUnit) -> f64 {
    s2_fibonacci(DEFORMATION_GRID * DEFORMATION_GRID).into_iter().map(|u| map.eval(u).chord(target)).fold(0.0, f64::max)
}
