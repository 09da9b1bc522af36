use nalgebra::{Matrix3, Vector3};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quat::ImaginaryUnit;
use crate::sphere::{self, cross, dot, norm, scale, sub};

/// Closed geodesic disk on S².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCap {
    pub center: ImaginaryUnit,
    pub radius: f64,
}

impl SphericalCap {
    pub fn contains(&self, u: ImaginaryUnit, tol: f64) -> bool {
        sphere::distance(self.center, u) <= self.radius + tol
    }
}

#[derive(Debug, Clone, Copy)]
struct Ball {
    center: [f64; 3],
    radius_sq: f64,
}

impl Ball {
    const EMPTY: Self = Self { center: [0.0; 3], radius_sq: -1.0 };

    fn contains(&self, p: [f64; 3]) -> bool {
        let d = sub(p, self.center);
        dot(d, d) <= self.radius_sq * (1.0 + 1e-12) + 1e-15
    }
}

fn ball_two(a: [f64; 3], b: [f64; 3]) -> Ball {
    let center = scale(sphere::add(a, b), 0.5);
    let d = sub(a, center);
    Ball { center, radius_sq: dot(d, d) }
}

fn ball_three(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> Ball {
    let (u, v) = (sub(b, a), sub(c, a));
    let w = cross(u, v);
    let w2 = dot(w, w);
    if w2 < 1e-30 {
        return widest_pair(&[a, b, c]);
    }
    let num = cross(sphere::sub(scale(v, dot(u, u)), scale(u, dot(v, v))), w);
    let offset = scale(num, 0.5 / w2);
    Ball { center: sphere::add(a, offset), radius_sq: dot(offset, offset) }
}

fn ball_four(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> Ball {
    let rows = [sub(b, a), sub(c, a), sub(d, a)];
    let m = Matrix3::from_fn(|i, j| rows[i][j]);
    let rhs = Vector3::from_fn(|i, _| 0.5 * dot(rows[i], rows[i]));
    match m.lu().solve(&rhs) {
        Some(x) if m.determinant().abs() > 1e-18 => {
            let offset = [x[0], x[1], x[2]];
            Ball { center: sphere::add(a, offset), radius_sq: dot(offset, offset) }
        }
        // Four cocircular points: any three of them pin the same circle.
        _ => [ball_three(a, b, c), ball_three(a, b, d), ball_three(a, c, d), ball_three(b, c, d)]
            .into_iter()
            .filter(|ball| [a, b, c, d].iter().all(|&p| ball.contains(p)))
            .min_by(|x, y| x.radius_sq.total_cmp(&y.radius_sq))
            .unwrap_or_else(|| widest_pair(&[a, b, c, d])),
    }
}

fn widest_pair(points: &[[f64; 3]]) -> Ball {
    let mut best = Ball::EMPTY;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            let ball = ball_two(a, b);
            if ball.radius_sq > best.radius_sq {
                best = ball;
            }
        }
    }
    best
}

fn ball_from(support: &[[f64; 3]]) -> Ball {
    match *support {
        [] => Ball::EMPTY,
        [a] => Ball { center: a, radius_sq: 0.0 },
        [a, b] => ball_two(a, b),
        [a, b, c] => ball_three(a, b, c),
        [a, b, c, d] => ball_four(a, b, c, d),
        _ => unreachable!("support sets have at most four points"),
    }
}

fn welzl(points: &[[f64; 3]], support: &mut Vec<[f64; 3]>) -> Ball {
    if points.is_empty() || support.len() == 4 {
        return ball_from(support);
    }
    let (&p, rest) = points.split_last().expect("nonempty");
    let ball = welzl(rest, support);
    if ball.contains(p) {
        return ball;
    }
    support.push(p);
    let ball = welzl(rest, support);
    support.pop();
    ball
}

/// Smallest cap containing the points, from the minimal enclosing ball of the
/// points in R³. Points must lie in an open hemisphere.
pub fn smallest_cap(points: &[ImaginaryUnit]) -> Result<SphericalCap> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("smallest cap of an empty point set".into()));
    }
    let mut coords: Vec<[f64; 3]> = points.iter().map(|u| u.vector()).collect();
    // Fixed shuffle: expected linear time without giving up determinism.
    coords.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    let ball = welzl(&coords, &mut Vec::with_capacity(4));
    // The ball reaches radius 1 exactly when the origin lies in the convex hull.
    if norm(ball.center) < 1e-9 || ball.radius_sq >= 1.0 - 1e-12 {
        return Err(Error::NoHemisphere);
    }
    let center = ImaginaryUnit::renormalized(ball.center);
    let radius = points.iter().map(|&u| sphere::distance(center, u)).fold(0.0, f64::max);
    Ok(SphericalCap { center, radius })
}

/// Enumerates every cap whose boundary passes through one, two or three of
/// the points and keeps the smallest that contains them all.
pub fn exhaustive_smallest_cap(points: &[ImaginaryUnit]) -> Result<SphericalCap> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("smallest cap of an empty point set".into()));
    }
    let n = points.len();
    let mut best: Option<SphericalCap> = None;
    let mut consider = |cap: SphericalCap| {
        if cap.radius < std::f64::consts::FRAC_PI_2
            && points.iter().all(|&u| cap.contains(u, 1e-12))
            && best.is_none_or(|b| cap.radius < b.radius)
        {
            best = Some(cap);
        }
    };
    for i in 0..n {
        consider(SphericalCap { center: points[i], radius: 0.0 });
        for j in i + 1..n {
            if let Ok(center) = ImaginaryUnit::from_vector(sphere::add(points[i].vector(), points[j].vector())) {
                consider(SphericalCap { center, radius: 0.5 * sphere::distance(points[i], points[j]) });
            }
            for k in j + 1..n {
                let (a, b, c) = (points[i].vector(), points[j].vector(), points[k].vector());
                let normal = cross(sub(b, a), sub(c, a));
                let Ok(mut center) = ImaginaryUnit::from_vector(normal) else { continue };
                if dot(center.vector(), a) < 0.0 {
                    center = -center;
                }
                consider(SphericalCap { center, radius: sphere::distance(center, points[i]) });
            }
        }
    }
    best.ok_or(Error::NoHemisphere)
}
