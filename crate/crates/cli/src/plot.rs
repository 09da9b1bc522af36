//! Stereographic pictures of fibres.
//!
//! SVG output uses the fixed `viewBox="-4 -4 8 8"`: an orthographic view of
//! the projected curves from azimuth 35° and elevation 25°, y pointing up.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use gcfib::sampling::s2_fibonacci;
use gcfib::{
    contains, from_grassmann, AxisAngle, BaseMap, Fibration, GrassmannPoint, GreatCircle, Handedness, ImaginaryUnit,
    Quaternion, UnitQuaternion,
};

use crate::CliError;

/// Fibres passing closer than this to the pole are avoided.
pub const POLE_CLEARANCE: f64 = 1e-3;
const MAX_RETRIES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub fibre_id: usize,
    pub vertices: Vec<[f64; 3]>,
}

/// `(x, y, z) / (1 + w)` after the isometry `v ↦ −conj(pole)·v` that sends the pole to −1.
pub fn stereographic(v: UnitQuaternion, pole: UnitQuaternion) -> [f64; 3] {
    let moved = -(pole.quat().conj() * v.quat());
    let d = 1.0 + moved.w;
    [moved.x / d, moved.y / d, moved.z / d]
}

/// Fibres over a Fibonacci set of base points, rotated by `twist` radians.
pub fn fibre_circles<M: BaseMap>(fib: &Fibration<M>, count: usize, twist: f64) -> Result<Vec<GreatCircle>, CliError> {
    let turn = AxisAngle::new(ImaginaryUnit::new(0.6, 0.0, 0.8).expect("nonzero"), twist);
    s2_fibonacci(count)
        .into_iter()
        .map(|u| {
            let u = turn.apply(u);
            let g = match fib.handedness {
                Handedness::Right => GrassmannPoint::new(u, fib.map.eval(u)),
                Handedness::Left => GrassmannPoint::new(fib.map.eval(u), u),
            };
            from_grassmann(&g).map_err(CliError::from)
        })
        .collect()
}

/// `count` closed polylines of `vertices` points each, `t_k = 2πk/(vertices − 1)`.
pub fn plot_fibres<M: BaseMap>(
    fib: &Fibration<M>,
    count: usize,
    vertices: usize,
    pole: UnitQuaternion,
) -> Result<(Vec<Polyline>, usize), CliError> {
    if count == 0 || vertices < 3 {
        return Err(CliError::Parse("plots need at least one fibre and three vertices per fibre".into()));
    }
    for attempt in 0..=MAX_RETRIES {
        let circles = fibre_circles(fib, count, 0.1 * attempt as f64)?;
        if circles.iter().any(|c| contains(c, pole) < POLE_CLEARANCE) {
            continue;
        }
        let lines = circles
            .iter()
            .enumerate()
            .map(|(fibre_id, c)| Polyline {
                fibre_id,
                vertices: (0..vertices)
                    .map(|k| stereographic(c.point(TAU * k as f64 / (vertices - 1) as f64), pole))
                    .collect(),
            })
            .collect();
        return Ok((lines, attempt));
    }
    Err(CliError::Solver(format!("every perturbed fibre set passes within {POLE_CLEARANCE} of the pole")))
}

pub fn parse_quaternion(text: &str) -> Result<UnitQuaternion, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Parse(format!("expected w,x,y,z: {e}")))?;
    let [w, x, y, z] = parts[..] else {
        return Err(CliError::Parse(format!("expected four components, got {}", parts.len())));
    };
    UnitQuaternion::new(Quaternion::new(w, x, y, z)).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn to_csv(lines: &[Polyline]) -> String {
    let mut out = String::from("fibre_id,vertex_index,px,py,pz\n");
    for line in lines {
        for (i, v) in line.vertices.iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{},{}", line.fibre_id, i, v[0], v[1], v[2]);
        }
    }
    out
}

fn view(v: [f64; 3]) -> (f64, f64) {
    let (sa, ca) = 35f64.to_radians().sin_cos();
    let (se, ce) = 25f64.to_radians().sin_cos();
    let u = ca * v[0] - sa * v[1];
    let depth_row = sa * v[0] + ca * v[1];
    (u, -(se * depth_row + ce * v[2]))
}

pub fn to_svg(lines: &[Polyline]) -> String {
    let mut out =
        String::from("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-4 -4 8 8\" width=\"800\" height=\"800\">\n");
    let n = lines.len().max(1);
    for line in lines {
        let hue = 360.0 * line.fibre_id as f64 / n as f64;
        let mut d = String::new();
        for (i, &v) in line.vertices.iter().enumerate() {
            let (x, y) = view(v);
            let _ = write!(d, "{}{:.6},{:.6} ", if i == 0 { 'M' } else { 'L' }, x, y);
        }
        let _ = writeln!(
            out,
            "  <path id=\"fibre-{}\" d=\"{}\" fill=\"none\" stroke=\"hsl({:.1},70%,45%)\" stroke-width=\"0.012\"/>",
            line.fibre_id,
            d.trim_end(),
            hue
        );
    }
    out.push_str("</svg>\n");
    out
}
