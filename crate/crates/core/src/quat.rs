//! Quaternion algebra on R⁴ together with the two subspaces used everywhere
//! else: the unit sphere S³ and the unit pure-imaginary sphere S².

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::tol;

/// A quaternion `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    /// Pure imaginary quaternion with the given vector part.
    pub const fn pure(v: [f64; 3]) -> Self {
        Self::new(0.0, v[0], v[1], v[2])
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn vector(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Euclidean inner product of the coordinate 4-vectors.
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        let [w, x, y, z] = self.to_array();
        w.hypot(x).hypot(y.hypot(z))
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub fn normalize(self) -> Result<UnitQuaternion> {
        UnitQuaternion::new(self)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, q: Self) -> Self {
        let p = self;
        Self::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Adding 0.0 turns negative zeros into positive ones.
        write!(f, "({}, {}, {}, {})", self.w + 0.0, self.x + 0.0, self.y + 0.0, self.z + 0.0)
    }
}

/// Hamilton product; a free function for call sites that read better that way.
pub fn mul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

pub fn conj(q: Quaternion) -> Quaternion {
    q.conj()
}

pub fn dot(p: Quaternion, q: Quaternion) -> f64 {
    p.dot(q)
}

pub fn normalize(q: Quaternion) -> Result<UnitQuaternion> {
    UnitQuaternion::new(q)
}

/// A point of S³. Construction re-normalizes, so inputs that drifted off the
/// sphere by rounding are accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const ONE: Self = Self(Quaternion::ONE);
    pub const I: Self = Self(Quaternion::I);
    pub const J: Self = Self(Quaternion::J);
    pub const K: Self = Self(Quaternion::K);

    pub fn new(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if !q.is_finite() || n <= tol::DEGENERATE_NORM {
            return Err(Error::Degenerate(format!("cannot normalize quaternion {q}")));
        }
        Ok(Self(q.scale(1.0 / n)))
    }

    pub fn from_components(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Quaternion::new(w, x, y, z))
    }

    /// Rotation of S² by `angle` about `axis`, as the unit quaternion acting by conjugation.
    pub fn from_axis_angle(axis: ImaginaryUnit, angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Self::renormalized(Quaternion::new(c, 0.0, 0.0, 0.0) + axis.quat().scale(s))
    }

    /// `cos t + u sin t`, the one-parameter subgroup through the imaginary unit `u`.
    pub fn exp_imaginary(u: ImaginaryUnit, t: f64) -> Self {
        let (s, c) = t.sin_cos();
        Self::renormalized(Quaternion::new(c, 0.0, 0.0, 0.0) + u.quat().scale(s))
    }

    /// Normalizes a quaternion that is known to be close to the sphere.
    pub(crate) fn renormalized(q: Quaternion) -> Self {
        Self(q.scale(1.0 / q.norm()))
    }

    pub fn quat(self) -> Quaternion {
        self.0
    }

    pub fn conj(self) -> Self {
        Self(self.0.conj())
    }

    pub fn to_array(self) -> [f64; 4] {
        self.0.to_array()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.0.dot(other.0)
    }

    /// `self · u · conj(self)`, the rotation of S² represented by `self`.
    pub fn rotate(self, u: ImaginaryUnit) -> ImaginaryUnit {
        ImaginaryUnit::renormalized((self.0 * u.quat() * self.0.conj()).vector())
    }

    /// `conj(self) · u · self`, the inverse rotation.
    pub fn rotate_inverse(self, u: ImaginaryUnit) -> ImaginaryUnit {
        ImaginaryUnit::renormalized((self.0.conj() * u.quat() * self.0).vector())
    }
}

impl Mul for UnitQuaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::renormalized(self.0 * o.0)
    }
}

impl Neg for UnitQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(u: UnitQuaternion) -> Self {
        u.0
    }
}

impl From<ImaginaryUnit> for UnitQuaternion {
    fn from(u: ImaginaryUnit) -> Self {
        Self(u.0)
    }
}

impl fmt::Display for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A unit pure-imaginary quaternion, i.e. a point of S² ⊂ Im H. The real part
/// is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryUnit(Quaternion);

impl ImaginaryUnit {
    pub const I: Self = Self(Quaternion::I);
    pub const J: Self = Self(Quaternion::J);
    pub const K: Self = Self(Quaternion::K);

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vector([x, y, z])
    }

    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let n = v[0].hypot(v[1]).hypot(v[2]);
        if !n.is_finite() || n <= tol::DEGENERATE_NORM {
            return Err(Error::Degenerate(format!("cannot normalize vector {v:?}")));
        }
        Ok(Self::renormalized(v))
    }

    /// Drops the real part of a quaternion that should be pure imaginary.
    /// Fails if the real part exceeds `tol` or the vector part is degenerate.
    pub fn from_quaternion(q: Quaternion, tol: f64) -> Result<Self> {
        if q.w.abs() > tol {
            return Err(Error::Degenerate(format!("quaternion {q} is not pure imaginary")));
        }
        Self::from_vector(q.vector())
    }

    pub(crate) fn renormalized(v: [f64; 3]) -> Self {
        let n = v[0].hypot(v[1]).hypot(v[2]);
        Self(Quaternion::pure([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Bypasses normalization; only for exercising invariant violations in tests.
    #[cfg(test)]
    pub(crate) fn raw_unchecked(v: [f64; 3]) -> Self {
        Self(Quaternion::pure(v))
    }

    pub fn quat(self) -> Quaternion {
        self.0
    }

    pub fn vector(self) -> [f64; 3] {
        self.0.vector()
    }

    pub fn dot(self, other: Self) -> f64 {
        self.0.dot(other.0)
    }

    /// Chordal distance in R³.
    pub fn chord(self, other: Self) -> f64 {
        (self.0 - other.0).norm()
    }
}

impl Neg for ImaginaryUnit {
    type Output = Self;

    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl From<ImaginaryUnit> for Quaternion {
    fn from(u: ImaginaryUnit) -> Self {
        u.0
    }
}

impl fmt::Display for ImaginaryUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0.x + 0.0, self.0.y + 0.0, self.0.z + 0.0)
    }
}
