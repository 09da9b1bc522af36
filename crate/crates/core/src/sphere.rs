//! Geodesic helpers on the unit 2-sphere of imaginary quaternions.

use crate::quat::ImaginaryUnit;

pub(crate) fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    a[0].hypot(a[1]).hypot(a[2])
}

/// Great-circle distance, computed with `atan2` so that it stays accurate for
/// nearly coincident and nearly antipodal pairs.
pub fn distance(u: ImaginaryUnit, v: ImaginaryUnit) -> f64 {
    let (a, b) = (u.vector(), v.vector());
    norm(cross(a, b)).atan2(dot(a, b))
}

/// An orthonormal basis `(e1, e2)` of the tangent plane at `u`, with
/// `e1 × e2 = u`.
pub fn tangent_basis(u: ImaginaryUnit) -> ([f64; 3], [f64; 3]) {
    let v = u.vector();
    let mut axis = [0.0; 3];
    let least = (0..3).min_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs())).unwrap_or(0);
    axis[least] = 1.0;
    let e1 = cross(axis, v);
    let e1 = scale(e1, 1.0 / norm(e1));
    let e2 = cross(v, e1);
    (e1, e2)
}

/// Exponential map at `u` applied to a tangent vector.
pub fn exp(u: ImaginaryUnit, tangent: [f64; 3]) -> ImaginaryUnit {
    let len = norm(tangent);
    if len == 0.0 {
        return u;
    }
    let (s, c) = len.sin_cos();
    ImaginaryUnit::renormalized(add(scale(u.vector(), c), scale(tangent, s / len)))
}

/// The point at fraction `s` of the way along the minimizing geodesic from
/// `from` to `to`. Undefined (returns `from`) for antipodal pairs.
pub fn geodesic_fraction(from: ImaginaryUnit, to: ImaginaryUnit, s: f64) -> ImaginaryUnit {
    let (a, b) = (from.vector(), to.vector());
    let theta = distance(from, to);
    if theta == 0.0 {
        return from;
    }
    let perp = sub(b, scale(a, dot(a, b)));
    let len = norm(perp);
    if len == 0.0 {
        return from;
    }
    let (sn, cs) = (s * theta).sin_cos();
    ImaginaryUnit::renormalized(add(scale(a, cs), scale(perp, sn / len)))
}

/// Rotation of R³ about a unit axis (Rodrigues' formula).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle {
    pub axis: ImaginaryUnit,
    pub angle: f64,
}

impl AxisAngle {
    pub fn new(axis: ImaginaryUnit, angle: f64) -> Self {
        Self { axis, angle }
    }

    pub fn identity() -> Self {
        Self { axis: ImaginaryUnit::K, angle: 0.0 }
    }

    pub fn apply(&self, u: ImaginaryUnit) -> ImaginaryUnit {
        if self.angle == 0.0 {
            return u;
        }
        let (k, v) = (self.axis.vector(), u.vector());
        let (s, c) = self.angle.sin_cos();
        let rotated = add(add(scale(v, c), scale(cross(k, v), s)), scale(k, dot(k, v) * (1.0 - c)));
        ImaginaryUnit::renormalized(rotated)
    }
}
