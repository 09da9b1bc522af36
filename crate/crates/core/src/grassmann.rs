//! Oriented great circles on S³ and the S² × S² picture of the Grassmannian
//! of oriented 2-planes in R⁴.
//!
//! A circle with ordered orthonormal basis `(P, Q)` maps to the pair
//! `(Q·conj(P), conj(P)·Q)`. Rotating the basis inside its plane leaves the
//! pair unchanged, so circles are compared through their images.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::quat::{ImaginaryUnit, Quaternion, UnitQuaternion};
use crate::tol;

/// The oriented great circle `t ↦ P cos t + Q sin t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreatCircle {
    p: UnitQuaternion,
    q: UnitQuaternion,
}

impl GreatCircle {
    /// Fails unless `p ⟂ q` within [`tol::CIRCLE`].
    pub fn new(p: UnitQuaternion, q: UnitQuaternion) -> Result<Self> {
        let d = p.dot(q);
        if d.abs() > tol::CIRCLE {
            return Err(Error::NotOrthonormal(format!("<P, Q> = {d:e}")));
        }
        Ok(Self { p, q })
    }

    /// Gram-Schmidt on an arbitrary independent pair, keeping the direction of `p`.
    pub fn spanned_by(p: Quaternion, q: Quaternion) -> Result<Self> {
        let p = UnitQuaternion::new(p)?;
        let q = q - p.quat().scale(p.quat().dot(q));
        let q = UnitQuaternion::new(q)?;
        Self::new(p, q)
    }

    pub fn p(&self) -> UnitQuaternion {
        self.p
    }

    pub fn q(&self) -> UnitQuaternion {
        self.q
    }

    pub fn point(&self, t: f64) -> UnitQuaternion {
        let (s, c) = t.sin_cos();
        UnitQuaternion::renormalized(self.p.quat().scale(c) + self.q.quat().scale(s))
    }

    /// Orthogonal projection onto the 2-plane of the circle.
    pub fn project(&self, v: Quaternion) -> Quaternion {
        let (p, q) = (self.p.quat(), self.q.quat());
        p.scale(p.dot(v)) + q.scale(q.dot(v))
    }
}

/// A point `(m, n)` of S² × S².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrassmannPoint {
    pub m: ImaginaryUnit,
    pub n: ImaginaryUnit,
}

impl GrassmannPoint {
    pub fn new(m: ImaginaryUnit, n: ImaginaryUnit) -> Self {
        Self { m, n }
    }

    /// Euclidean distance of the pairs in R³ × R³.
    pub fn distance(&self, other: &Self) -> f64 {
        self.m.chord(other.m).hypot(self.n.chord(other.n))
    }
}

pub fn to_grassmann(c: &GreatCircle) -> GrassmannPoint {
    let (p, q) = (c.p.quat(), c.q.quat());
    // Real parts vanish because P ⟂ Q; dropping them is exact up to rounding.
    let m = ImaginaryUnit::renormalized((q * p.conj()).vector());
    let n = ImaginaryUnit::renormalized((p.conj() * q).vector());
    GrassmannPoint { m, n }
}

/// Matrix of `v ↦ m·v·conj(n)` on R⁴ in the basis `1, i, j, k`.
fn sandwich_matrix(g: &GrassmannPoint) -> Matrix4<f64> {
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let (m, nc) = (g.m.quat(), g.n.quat().conj());
    Matrix4::from_fn(|row, col| (m * basis[col] * nc).to_array()[row])
}

/// Inverse of [`to_grassmann`]: a circle `(P, Q)` with `Q = m·P`, where `P`
/// spans part of the +1 eigenspace of `v ↦ m·v·conj(n)`.
pub fn from_grassmann(g: &GrassmannPoint) -> Result<GreatCircle> {
    let shifted = sandwich_matrix(g) - Matrix4::identity();
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::Degenerate("singular value decomposition failed".into()))?;
    let null: Vec<usize> = (0..4).filter(|&i| svd.singular_values[i] <= tol::RANK).collect();
    if null.len() != 2 {
        return Err(Error::InvalidGrassmannPoint { dimension: null.len() });
    }
    let row = v_t.row(null[0]);
    let p = UnitQuaternion::new(Quaternion::new(row[0], row[1], row[2], row[3]))?;
    let q = UnitQuaternion::new(g.m.quat() * p.quat())?;
    GreatCircle::new(p, q)
}

/// Distance between the Grassmann images of two circles.
pub fn grassmann_distance(c1: &GreatCircle, c2: &GreatCircle) -> f64 {
    to_grassmann(c1).distance(&to_grassmann(c2))
}

/// Symmetric 2×2 eigenvalues, larger first, the smaller obtained from the
/// determinant so that it keeps full relative accuracy.
fn sym2_eigenvalues(a: f64, b: f64, d: f64) -> (f64, f64) {
    let half_tr = 0.5 * (a + d);
    let det = a * d - b * b;
    let disc = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let large = half_tr + disc;
    let small = if large > 0.0 { det / large } else { 0.0 };
    (large, small.max(0.0))
}

/// Principal angles `(θ_min, θ_max)` between the 2-planes of two circles.
///
/// Cosines come from the Gram matrix of the bases and sines from the residual
/// of one basis after projecting onto the other plane; each angle is then an
/// `atan2` of a matched pair, which keeps small angles accurate.
pub fn principal_angles(c1: &GreatCircle, c2: &GreatCircle) -> (f64, f64) {
    let a = [c1.p.quat(), c1.q.quat()];
    let b = [c2.p.quat(), c2.q.quat()];
    let g = [[a[0].dot(b[0]), a[0].dot(b[1])], [a[1].dot(b[0]), a[1].dot(b[1])]];
    let (c_large_sq, c_small_sq) = sym2_eigenvalues(
        g[0][0] * g[0][0] + g[1][0] * g[1][0],
        g[0][0] * g[0][1] + g[1][0] * g[1][1],
        g[0][1] * g[0][1] + g[1][1] * g[1][1],
    );
    let r = [b[0] - c1.project(b[0]), b[1] - c1.project(b[1])];
    let (s_large_sq, s_small_sq) = sym2_eigenvalues(r[0].dot(r[0]), r[0].dot(r[1]), r[1].dot(r[1]));
    let theta_min = s_small_sq.sqrt().atan2(c_large_sq.sqrt());
    let theta_max = s_large_sq.sqrt().atan2(c_small_sq.sqrt());
    (theta_min, theta_max.max(theta_min))
}

/// Distance from `p` to the 2-plane of `c`; zero iff `p` lies on the circle.
pub fn contains(c: &GreatCircle, p: UnitQuaternion) -> f64 {
    (p.quat() - c.project(p.quat())).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn unit(w: f64, x: f64, y: f64, z: f64) -> UnitQuaternion {
        UnitQuaternion::from_components(w, x, y, z).unwrap()
    }

    fn circle(p: UnitQuaternion, q: UnitQuaternion) -> GreatCircle {
        GreatCircle::new(p, q).unwrap()
    }

    #[test]
    fn rejects_non_orthogonal_basis() {
        let err = GreatCircle::new(UnitQuaternion::ONE, unit(1.0, 0.0, 0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::NotOrthonormal(_)));
    }

    #[test]
    fn grassmann_images_of_coordinate_circles() {
        let g = to_grassmann(&circle(UnitQuaternion::ONE, UnitQuaternion::K));
        assert_eq!((g.m, g.n), (ImaginaryUnit::K, ImaginaryUnit::K));
        let g = to_grassmann(&circle(UnitQuaternion::ONE, UnitQuaternion::I));
        assert_eq!((g.m, g.n), (ImaginaryUnit::I, ImaginaryUnit::I));
    }

    #[test]
    fn grassmann_image_of_tilted_circle() {
        // Hand computation: Q·conj(P) = ½(k − j)(1 − i) = −j, conj(P)·Q = ½(1 − i)(k − j) = k.
        let h = FRAC_1_SQRT_2;
        let c = circle(unit(h, h, 0.0, 0.0), unit(0.0, 0.0, -h, h));
        let g = to_grassmann(&c);
        assert!(g.m.chord(-ImaginaryUnit::J) < 1e-15);
        assert!(g.n.chord(ImaginaryUnit::K) < 1e-15);
    }

    #[test]
    fn image_is_invariant_under_basis_rotation() {
        let h = FRAC_1_SQRT_2;
        let c = circle(unit(h, h, 0.0, 0.0), unit(0.0, 0.0, -h, h));
        let rotated = circle(c.point(0.7), c.point(0.7 + FRAC_PI_2));
        assert!(grassmann_distance(&c, &rotated) < 1e-14);
    }

    #[test]
    fn from_grassmann_recovers_circles() {
        let c = from_grassmann(&GrassmannPoint::new(ImaginaryUnit::K, ImaginaryUnit::K)).unwrap();
        assert!(contains(&c, UnitQuaternion::ONE) < 1e-12);
        assert!(contains(&c, UnitQuaternion::K) < 1e-12);

        let c = from_grassmann(&GrassmannPoint::new(ImaginaryUnit::I, ImaginaryUnit::I)).unwrap();
        assert!(contains(&c, UnitQuaternion::ONE) < 1e-12);
        assert!(contains(&c, UnitQuaternion::I) < 1e-12);

        let h = FRAC_1_SQRT_2;
        let g = GrassmannPoint::new(-ImaginaryUnit::J, ImaginaryUnit::K);
        let c = from_grassmann(&g).unwrap();
        assert!(contains(&c, unit(h, h, 0.0, 0.0)) < 1e-12);
        assert!(to_grassmann(&c).distance(&g) < 1e-12);
    }

    #[test]
    fn principal_angles_of_basic_pairs() {
        let c = circle(UnitQuaternion::ONE, UnitQuaternion::K);
        let (lo, hi) = principal_angles(&c, &c);
        assert!(lo.abs() < 1e-15 && hi.abs() < 1e-15);

        let d = circle(UnitQuaternion::I, UnitQuaternion::J);
        let (lo, hi) = principal_angles(&c, &d);
        assert!((lo - FRAC_PI_2).abs() < 1e-15 && (hi - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn principal_angles_are_symmetric() {
        let c1 =
            GreatCircle::spanned_by(Quaternion::new(1.0, 0.2, -0.3, 0.1), Quaternion::new(0.0, 1.0, 0.5, 0.4)).unwrap();
        let c2 =
            GreatCircle::spanned_by(Quaternion::new(0.1, 1.0, 0.2, -0.7), Quaternion::new(0.3, 0.0, 1.0, 0.2)).unwrap();
        let (a, b) = principal_angles(&c1, &c2);
        let (c, d) = principal_angles(&c2, &c1);
        assert!((a - c).abs() < 1e-14 && (b - d).abs() < 1e-14);
        assert!(0.0 <= a && a <= b && b <= FRAC_PI_2);
    }

    #[test]
    fn small_angles_keep_precision() {
        // Planes sharing the line through 1 and differing by 1e-9 rad in the other direction.
        let c1 = circle(UnitQuaternion::ONE, UnitQuaternion::K);
        let t = 1e-9_f64;
        let c2 = circle(UnitQuaternion::ONE, unit(0.0, 0.0, t.sin(), t.cos()));
        let (lo, hi) = principal_angles(&c1, &c2);
        assert!(lo < 1e-15, "{lo}");
        assert!((hi - t).abs() < 1e-20, "{hi}");
    }

    #[test]
    fn membership_distances() {
        let c = circle(UnitQuaternion::ONE, UnitQuaternion::K);
        assert!(contains(&c, UnitQuaternion::ONE) < 1e-15);
        assert!((contains(&c, UnitQuaternion::I) - 1.0).abs() < 1e-15);
        let h = FRAC_1_SQRT_2;
        assert!((contains(&c, unit(h, h, 0.0, 0.0)) - h).abs() < 1e-15);
    }

    #[test]
    fn defective_eigenspace_is_reported() {
        let half = ImaginaryUnit::raw_unchecked([0.0, 0.0, 0.5]);
        let g = GrassmannPoint::new(half, ImaginaryUnit::K);
        assert_eq!(from_grassmann(&g), Err(Error::InvalidGrassmannPoint { dimension: 0 }));
    }
}
