use crate::chart::{p_of, FiringJacobian, StandardChart, DEFAULT_FD_STEP};
use crate::error::Result;
use crate::fibration::BaseMap;
use crate::grassmann::GreatCircle;
use crate::quat::{Quaternion, UnitQuaternion};

/// A family of great circles indexed by a disk around the chart origin.
pub trait CircleFamily {
    fn circle(&self, x: f64, y: f64) -> Result<GreatCircle>;

    /// Firing jacobian at the origin.
    fn jacobian(&self) -> Result<FiringJacobian>;
}

/// Synthetic firing solutions given in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FiringFamily {
    HopfConstant,
    /// `(f, g, h) = normalize(cf_x·x + cf_y·y, cg_x·x + cg_y·y, 1)`.
    LinearTilt {
        cf_x: f64,
        cf_y: f64,
        cg_x: f64,
        cg_y: f64,
    },
}

impl FiringFamily {
    pub fn linear_tilt(cf_x: f64, cf_y: f64, cg_x: f64, cg_y: f64) -> Self {
        Self::LinearTilt { cf_x, cf_y, cg_x, cg_y }
    }

    pub fn firing(&self, x: f64, y: f64) -> [f64; 3] {
        match *self {
            Self::HopfConstant => [0.0, 0.0, 1.0],
            Self::LinearTilt { cf_x, cf_y, cg_x, cg_y } => {
                let (u, v) = (cf_x * x + cf_y * y, cg_x * x + cg_y * y);
                let n = (u * u + v * v + 1.0).sqrt();
                [u / n, v / n, 1.0 / n]
            }
        }
    }
}

impl CircleFamily for FiringFamily {
    fn circle(&self, x: f64, y: f64) -> Result<GreatCircle> {
        let p = p_of(x, y)?;
        let r = Quaternion::pure(self.firing(x, y));
        GreatCircle::new(p, UnitQuaternion::new(p.quat() * r)?)
    }

    fn jacobian(&self) -> Result<FiringJacobian> {
        Ok(match *self {
            Self::HopfConstant => FiringJacobian::HOPF,
            Self::LinearTilt { cf_x, cf_y, cg_x, cg_y } => FiringJacobian::new(cf_x, cf_y, cg_x, cg_y),
        })
    }
}

impl<M: BaseMap> CircleFamily for StandardChart<M> {
    fn circle(&self, x: f64, y: f64) -> Result<GreatCircle> {
        StandardChart::circle(self, x, y)
    }

    fn jacobian(&self) -> Result<FiringJacobian> {
        Ok(self.firing_jacobian(DEFAULT_FD_STEP)?.jacobian)
    }
}
