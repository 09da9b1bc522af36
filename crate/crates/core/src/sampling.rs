//! Deterministic low-discrepancy point sets on S³, S² and planar disks.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quat::{ImaginaryUnit, Quaternion, UnitQuaternion};

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    acc
}

/// Quasi-uniform points of S³: a Halton sequence in bases 2, 3, 5 with a seeded
/// Cranley-Patterson shift, pushed through Shoemake's map from the unit cube onto
/// unit quaternions (the double cover of SO(3), which is uniform on S³).
pub fn s3_points(count: usize, seed: u64) -> Vec<UnitQuaternion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; 3] = [rng.random(), rng.random(), rng.random()];
    (1..=count as u64)
        .map(|i| {
            let u = [
                (radical_inverse(i, 2) + shift[0]).fract(),
                (radical_inverse(i, 3) + shift[1]).fract(),
                (radical_inverse(i, 5) + shift[2]).fract(),
            ];
            let (r1, r2) = ((1.0 - u[0]).sqrt(), u[0].sqrt());
            let (s1, c1) = (TAU * u[1]).sin_cos();
            let (s2, c2) = (TAU * u[2]).sin_cos();
            UnitQuaternion::renormalized(Quaternion::new(r2 * c2, r1 * s1, r1 * c1, r2 * s2))
        })
        .collect()
}

/// Independent uniform points of S³ from a seeded generator.
pub fn s3_random(count: usize, seed: u64) -> Vec<UnitQuaternion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let q = Quaternion::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n2 = q.norm_squared();
        if n2 > 1e-4 && n2 <= 1.0 {
            out.push(UnitQuaternion::renormalized(q));
        }
    }
    out
}

/// Fibonacci lattice on S² with `count` points.
pub fn s2_fibonacci(count: usize) -> Vec<ImaginaryUnit> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let (s, c) = (golden * i as f64).sin_cos();
            ImaginaryUnit::renormalized([r * c, r * s, z])
        })
        .collect()
}

/// Sunflower (Vogel) spiral filling the disk of the given radius evenly.
pub fn disk_sunflower(count: usize, radius: f64) -> Vec<[f64; 2]> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let r = radius * ((i as f64 + 0.5) / count as f64).sqrt();
            let (s, c) = (golden * i as f64).sin_cos();
            [r * c, r * s]
        })
        .collect()
}

/// Typical nearest-neighbour spacing of `count` evenly spread points in a disk.
pub fn disk_spacing(count: usize, radius: f64) -> f64 {
    radius * (PI / count as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_bases() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(5, 3) - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn s3_points_are_deterministic_and_unit() {
        let a = s3_points(64, 3);
        assert_eq!(a, s3_points(64, 3));
        assert_ne!(a, s3_points(64, 4));
        for p in &a {
            assert!((p.quat().norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn s3_points_are_roughly_balanced() {
        // Each coordinate has mean zero under the uniform measure.
        let pts = s3_points(4096, 11);
        for c in 0..4 {
            let mean: f64 = pts.iter().map(|p| p.to_array()[c]).sum::<f64>() / 4096.0;
            assert!(mean.abs() < 0.02, "coordinate {c}: {mean}");
        }
    }

    #[test]
    fn fibonacci_is_balanced() {
        let pts = s2_fibonacci(400);
        let mut sum = [0.0; 3];
        for p in &pts {
            for (s, v) in sum.iter_mut().zip(p.vector()) {
                *s += v;
            }
        }
        assert!(sum.iter().all(|s| s.abs() < 1e-2 * 400.0));
    }

    #[test]
    fn sunflower_stays_inside() {
        for p in disk_sunflower(300, 0.2) {
            assert!(p[0].hypot(p[1]) < 0.2);
        }
    }
}
