//! Python bindings. Quaternions cross the boundary as `(w, x, y, z)` tuples and
//! points of S² as `(x, y, z)` tuples.

use gcfib_core as core;
use gcfib_core::chart::DEFAULT_FD_STEP;
use gcfib_core::verify::{self, FiringFamily, OracleThresholds};
use gcfib_core::{BaseMapKind, ChartSettings, Error, Handedness, ImaginaryUnit, SolverOptions, UnitQuaternion};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

type Quat4 = (f64, f64, f64, f64);
type Vec3 = (f64, f64, f64);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Degenerate(_)
        | Error::NotOrthonormal(_)
        | Error::InvalidGrassmannPoint { .. }
        | Error::InvalidSpec(_)
        | Error::ChartDomain { .. }
        | Error::InvalidArgument(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn unit(q: Quat4) -> PyResult<UnitQuaternion> {
    UnitQuaternion::from_components(q.0, q.1, q.2, q.3).map_err(py_err)
}

fn imag(v: Vec3) -> PyResult<ImaginaryUnit> {
    ImaginaryUnit::from_vector([v.0, v.1, v.2]).map_err(py_err)
}

fn quat4(q: UnitQuaternion) -> Quat4 {
    let [w, x, y, z] = q.to_array();
    (w, x, y, z)
}

fn vec3(u: ImaginaryUnit) -> Vec3 {
    let [x, y, z] = u.vector();
    (x, y, z)
}

/// A quaternion `w + xi + yj + zk` under the Hamilton product.
#[pyclass(module = "gcfib", frozen, get_all, skip_from_py_object)]
#[derive(Clone, Copy)]
struct Quaternion {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl Quaternion {
    fn inner(&self) -> core::Quaternion {
        core::Quaternion::new(self.w, self.x, self.y, self.z)
    }

    fn wrap(q: core::Quaternion) -> Self {
        Self { w: q.w, x: q.x, y: q.y, z: q.z }
    }
}

#[pymethods]
impl Quaternion {
    #[new]
    fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self::wrap(self.inner() * other.inner())
    }

    fn __add__(&self, other: &Self) -> Self {
        Self::wrap(self.inner() + other.inner())
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self::wrap(self.inner() - other.inner())
    }

    fn __neg__(&self) -> Self {
        Self::wrap(-self.inner())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner() == other.inner()
    }

    fn conj(&self) -> Self {
        Self::wrap(self.inner().conj())
    }

    fn dot(&self, other: &Self) -> f64 {
        self.inner().dot(other.inner())
    }

    fn norm(&self) -> f64 {
        self.inner().norm()
    }

    fn normalized(&self) -> PyResult<Self> {
        Ok(Self::wrap(self.inner().normalize().map_err(py_err)?.quat()))
    }

    fn components(&self) -> Quat4 {
        (self.w, self.x, self.y, self.z)
    }

    fn __repr__(&self) -> String {
        format!("Quaternion({}, {}, {}, {})", self.w, self.x, self.y, self.z)
    }
}

/// A great-circle fibration given by its base map and handedness.
#[pyclass(module = "gcfib", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Fibration {
    inner: core::FibrationSpec,
}

fn handedness(name: &str) -> PyResult<Handedness> {
    match name {
        "right" => Ok(Handedness::Right),
        "left" => Ok(Handedness::Left),
        other => Err(PyValueError::new_err(format!("handedness must be 'right' or 'left', got {other:?}"))),
    }
}

#[pymethods]
impl Fibration {
    #[staticmethod]
    #[pyo3(signature = (axis = (0.0, 0.0, 1.0), handedness = "right"))]
    fn hopf(axis: Vec3, handedness: &str) -> PyResult<Self> {
        let spec = core::FibrationSpec::hopf(imag(axis)?).with_handedness(self::handedness(handedness)?);
        Ok(Self { inner: spec })
    }

    #[staticmethod]
    #[pyo3(signature = (center, lam, rotation_axis = None, rotation_angle = 0.0, handedness = "right"))]
    fn pull_toward(
        center: Vec3,
        lam: f64,
        rotation_axis: Option<Vec3>,
        rotation_angle: f64,
        handedness: &str,
    ) -> PyResult<Self> {
        let rotation = rotation_axis.map(imag).transpose()?.map(|a| core::AxisAngle::new(a, rotation_angle));
        let spec = core::FibrationSpec::pull_toward(imag(center)?, lam, rotation)
            .map_err(py_err)?
            .with_handedness(self::handedness(handedness)?);
        Ok(Self { inner: spec })
    }

    #[getter]
    fn handedness(&self) -> &'static str {
        match self.inner.handedness {
            Handedness::Right => "right",
            Handedness::Left => "left",
        }
    }

    /// The base map evaluated at a point of S².
    fn phi(&self, u: Vec3) -> PyResult<Vec3> {
        Ok(vec3(core::eval_phi(&self.inner, imag(u)?)))
    }

    /// `(p, q)` spanning the fibre through `p`, plus solver iterations and residual.
    #[pyo3(signature = (p, tol = 1e-13))]
    fn fibre_through(&self, p: Quat4, tol: f64) -> PyResult<(Quat4, Quat4, usize, f64)> {
        let sol =
            core::fibre_through(&self.inner, unit(p)?, &SolverOptions::default().with_tol(tol)).map_err(py_err)?;
        Ok((quat4(sol.circle.p()), quat4(sol.circle.q()), sol.fixed_point.iterations, sol.fixed_point.residual))
    }

    #[pyo3(signature = (grid_density = 32))]
    fn lipschitz_estimate(&self, grid_density: usize) -> PyResult<f64> {
        core::lipschitz_estimate(&self.inner.map, grid_density).map_err(py_err)
    }

    /// The standardized chart around the fibre through `p`.
    #[pyo3(signature = (p = (1.0, 0.0, 0.0, 0.0), epsilon = 0.04))]
    fn chart(&self, p: Quat4, epsilon: f64) -> PyResult<Chart> {
        let settings = ChartSettings { epsilon, ..ChartSettings::default() };
        Ok(Chart { inner: core::standardize(&self.inner, unit(p)?, &settings).map_err(py_err)? })
    }

    fn __repr__(&self) -> String {
        format!("Fibration({:?}, {})", self.inner.map, self.handedness())
    }
}

/// First partials of the firing solution at the chart origin.
#[pyclass(module = "gcfib", frozen, get_all, skip_from_py_object)]
#[derive(Clone, Copy)]
struct FiringJacobian {
    f_x: f64,
    f_y: f64,
    g_x: f64,
    g_y: f64,
}

impl FiringJacobian {
    fn inner(&self) -> core::FiringJacobian {
        core::FiringJacobian::new(self.f_x, self.f_y, self.g_x, self.g_y)
    }

    fn wrap(j: core::FiringJacobian) -> Self {
        Self { f_x: j.f_x, f_y: j.f_y, g_x: j.g_x, g_y: j.g_y }
    }
}

#[pymethods]
impl FiringJacobian {
    #[new]
    fn new(f_x: f64, f_y: f64, g_x: f64, g_y: f64) -> Self {
        Self { f_x, f_y, g_x, g_y }
    }

    fn delta(&self) -> f64 {
        self.inner().delta()
    }

    /// `4(1 + f_y)(1 − g_x) − (f_x − g_y)²`.
    fn margin(&self) -> f64 {
        core::prop1_margin(&self.inner()).margin
    }

    fn accepts(&self) -> bool {
        core::prop1_margin(&self.inner()).accepts()
    }

    fn is_strictly_distance_decreasing(&self) -> PyResult<bool> {
        let m = core::m_matrix(&self.inner()).map_err(py_err)?;
        Ok(core::is_strictly_distance_decreasing(&m))
    }

    fn contact_coefficient(&self) -> f64 {
        core::contact_coefficient_analytic(&self.inner())
    }

    fn __repr__(&self) -> String {
        format!("FiringJacobian(f_x={}, f_y={}, g_x={}, g_y={})", self.f_x, self.f_y, self.g_x, self.g_y)
    }
}

/// Three evaluations of the contact coefficient at a chart origin.
#[pyclass(module = "gcfib", frozen, get_all)]
struct ContactCheck {
    full: f64,
    reduced: f64,
    analytic: f64,
    jacobian: FiringJacobian,
}

#[pymethods]
impl ContactCheck {
    fn discrepancy(&self) -> f64 {
        (self.full - self.reduced)
            .abs()
            .max((self.full - self.analytic).abs())
            .max((self.reduced - self.analytic).abs())
    }
}

/// A fibration moved so that the chosen fibre runs from 1 to k.
#[pyclass(module = "gcfib", frozen)]
struct Chart {
    inner: core::StandardChart<BaseMapKind>,
}

#[pymethods]
impl Chart {
    #[getter]
    fn epsilon(&self) -> f64 {
        self.inner.frame.epsilon
    }

    /// The firing solution `(f, g, h)` at `P(x, y)`.
    fn firing_solution(&self, x: f64, y: f64) -> PyResult<Vec3> {
        let s = self.inner.firing_solution(x, y).map_err(py_err)?;
        Ok((s.f, s.g, s.h))
    }

    fn q_of(&self, x: f64, y: f64) -> PyResult<Quat4> {
        self.inner.q_of(x, y).map(quat4).map_err(py_err)
    }

    /// The jacobian and the two h-derivatives `(h_x, h_y)`.
    #[pyo3(signature = (fd_step = DEFAULT_FD_STEP))]
    fn firing_jacobian(&self, fd_step: f64) -> PyResult<(FiringJacobian, f64, f64)> {
        let est = self.inner.firing_jacobian(fd_step).map_err(py_err)?;
        Ok((FiringJacobian::wrap(est.jacobian), est.h_x, est.h_y))
    }

    #[pyo3(signature = (fd_step = DEFAULT_FD_STEP))]
    fn contact_cross_check(&self, fd_step: f64) -> PyResult<ContactCheck> {
        let c = core::contact_cross_check(&self.inner, fd_step).map_err(py_err)?;
        Ok(ContactCheck {
            full: c.full,
            reduced: c.reduced,
            analytic: c.analytic,
            jacobian: FiringJacobian::wrap(c.jacobian),
        })
    }
}

/// `(m, n) = (q·conj(p), conj(p)·q)` for the circle `t ↦ p cos t + q sin t`.
#[pyfunction]
fn to_grassmann(p: Quat4, q: Quat4) -> PyResult<(Vec3, Vec3)> {
    let g = core::to_grassmann(&core::GreatCircle::new(unit(p)?, unit(q)?).map_err(py_err)?);
    Ok((vec3(g.m), vec3(g.n)))
}

/// An orthonormal basis `(p, q)` of the circle with Grassmann point `(m, n)`.
#[pyfunction]
fn from_grassmann(m: Vec3, n: Vec3) -> PyResult<(Quat4, Quat4)> {
    let c = core::from_grassmann(&core::GrassmannPoint::new(imag(m)?, imag(n)?)).map_err(py_err)?;
    Ok((quat4(c.p()), quat4(c.q())))
}

#[pyfunction]
fn principal_angles(c1: (Quat4, Quat4), c2: (Quat4, Quat4)) -> PyResult<(f64, f64)> {
    let a = core::GreatCircle::new(unit(c1.0)?, unit(c1.1)?).map_err(py_err)?;
    let b = core::GreatCircle::new(unit(c2.0)?, unit(c2.1)?).map_err(py_err)?;
    Ok(core::principal_angles(&a, &b))
}

/// Center and geodesic radius of the smallest cap holding the points.
#[pyfunction]
fn smallest_cap(points: Vec<Vec3>) -> PyResult<(Vec3, f64)> {
    let pts = points.into_iter().map(imag).collect::<PyResult<Vec<_>>>()?;
    let cap = verify::smallest_cap(&pts).map_err(py_err)?;
    Ok((vec3(cap.center), cap.radius))
}

/// Number of disagreements between the margin test and the M-criterion.
#[pyfunction]
#[pyo3(signature = (count = 100_000, seed = 0))]
fn m_criterion_disagreements(count: usize, seed: u64) -> PyResult<usize> {
    Ok(verify::m_criterion_survey(count, seed).map_err(py_err)?.disagreements.len())
}

/// Verdict of the collision oracle against the margin for a linearly tilted chart family.
#[pyfunction]
#[pyo3(signature = (cf_x, cf_y = 0.0, cg_x = 0.0, cg_y = 0.0))]
fn oracle_verdict(cf_x: f64, cf_y: f64, cg_x: f64, cg_y: f64) -> PyResult<&'static str> {
    let fam = FiringFamily::linear_tilt(cf_x, cf_y, cg_x, cg_y);
    let report = verify::prop1_oracle_agreement(&fam, &OracleThresholds::default()).map_err(py_err)?;
    Ok(report.verdict.as_str())
}

#[pymodule]
#[pyo3(name = "gcfib")]
fn gcfib_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Quaternion>()?;
    m.add_class::<Fibration>()?;
    m.add_class::<Chart>()?;
    m.add_class::<FiringJacobian>()?;
    m.add_class::<ContactCheck>()?;
    m.add_function(wrap_pyfunction!(to_grassmann, m)?)?;
    m.add_function(wrap_pyfunction!(from_grassmann, m)?)?;
    m.add_function(wrap_pyfunction!(principal_angles, m)?)?;
    m.add_function(wrap_pyfunction!(smallest_cap, m)?)?;
    m.add_function(wrap_pyfunction!(m_criterion_disagreements, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_verdict, m)?)?;
    Ok(())
}
