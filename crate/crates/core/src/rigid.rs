//! Worst-case target displacement under a constrained 2D rigid motion.
//!
//! A motion `q ↦ Rq + s` moves `q` by `TRE(q) = (R − I)q + s`. For `θ ≠ 0`
//! this is `(R − I)(q − c)` with `c` the motion's fixed point, so the
//! displacement magnitude is `2 sin(|θ|/2) ‖q − c‖`: concentric circular
//! contours about `c`. Maximizing the displacement of a target `p` while
//! every fiducial moves at most `C` then reduces to the weighted center
//! problem with the target as weight point.

use std::f64::consts::PI;

use serde::Serialize;

use crate::center::{CenterFunction, Solution};
use crate::error::{Error, Result};
use crate::fpvd::compute_mec;
use crate::geom::{Point, SiteSet, DISTANCE_TOL, PREDICATE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigidMotion {
    theta: f64,
    s: Point,
}

/// Wrap an angle to `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta - 2.0 * PI * ((theta + PI) / (2.0 * PI)).floor();
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

impl RigidMotion {
    pub fn new(theta: f64, s: Point) -> Self {
        Self { theta: wrap_angle(theta), s }
    }

    pub fn translation(s: Point) -> Self {
        Self { theta: 0.0, s }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn s(&self) -> Point {
        self.s
    }

    /// Row-major rotation matrix.
    pub fn rotation(&self) -> [[f64; 2]; 2] {
        let (sin, cos) = self.theta.sin_cos();
        [[cos, -sin], [sin, cos]]
    }

    pub fn apply(&self, q: Point) -> Point {
        q.rotated(self.theta) + self.s
    }

    /// Displacement contours; undefined for a pure translation.
    pub fn contour(&self) -> Result<TreContour> {
        if self.theta.abs() <= PREDICATE_TOL {
            return Err(Error::ZeroRotation);
        }
        let k = 1.0 / (0.5 * self.theta).tan();
        let (sx, sy) = (self.s.x, self.s.y);
        Ok(TreContour {
            center: Point::new(0.5 * (sx - sy * k), 0.5 * (sx * k + sy)),
            scale: 2.0 * (0.5 * self.theta.abs()).sin(),
        })
    }

    /// The motion rotating by `theta` about `center`.
    pub fn about(theta: f64, center: Point) -> Result<Self> {
        let theta = wrap_angle(theta);
        if theta.abs() <= PREDICATE_TOL {
            return Err(Error::ZeroRotation);
        }
        let k = 1.0 / (0.5 * theta).tan();
        let d = 1.0 + k * k;
        let s = Point::new(2.0 * (center.x + k * center.y) / d, 2.0 * (-k * center.x + center.y) / d);
        Ok(Self { theta, s })
    }
}

/// `Rq + s − q`, evaluated as `(R − I)q + s` so a pure translation moves
/// every point by exactly `s`.
pub fn tre(q: Point, motion: &RigidMotion) -> Point {
    let (sin, half) = (motion.theta.sin(), (0.5 * motion.theta).sin());
    let cos_m1 = -2.0 * half * half;
    Point::new(cos_m1 * q.x - sin * q.y, sin * q.x + cos_m1 * q.y) + motion.s
}

/// `‖TRE(q)‖ = scale · ‖q − center‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreContour {
    pub center: Point,
    pub scale: f64,
}

impl TreContour {
    pub fn magnitude(&self, q: Point) -> f64 {
        self.scale * q.dist(self.center)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisplacementBound {
    pub value: f64,
    pub witness: RigidMotion,
    pub solution: Solution,
}

/// Whether every site moves by at most `c` (plus [`DISTANCE_TOL`]).
pub fn rigid_constraint_check(sites: &SiteSet, motion: &RigidMotion, c: f64) -> bool {
    sites.original().iter().all(|&x| tre(x, motion).norm() <= c + DISTANCE_TOL)
}

pub fn max_displacement(sites: &SiteSet, p: Point, c: f64) -> Result<DisplacementBound> {
    max_displacement_with(&CenterFunction::new(sites)?, p, c)
}

/// Largest `‖TRE(p)‖` over rigid motions keeping every site within `c`.
pub fn max_displacement_with(cf: &CenterFunction, p: Point, c: f64) -> Result<DisplacementBound> {
    let sites = cf.sites();
    let limit = 2.0 * compute_mec(sites).radius;
    if !(c > 0.0 && c <= limit * (1.0 + 1e-12)) {
        return Err(Error::BudgetOutOfRange { budget: c, limit });
    }
    let solution = cf.solve(p)?;
    let witness = match solution.point {
        Some(x) => {
            let far = sites.original().iter().map(|&s| x.dist(s)).fold(0.0, f64::max);
            let theta = 2.0 * (c / (2.0 * far)).min(1.0).asin();
            RigidMotion::about(theta, x)?
        }
        None => {
            let hull = cf.tree().hull().points(sites.original());
            let centroid = hull.iter().fold(Point::ORIGIN, |a, &b| a + b) / hull.len() as f64;
            let d = p - centroid;
            let dir = if d.norm() > 0.0 { d.normalized() } else { Point::new(1.0, 0.0) };
            RigidMotion::translation(dir * c)
        }
    };
    Ok(DisplacementBound { value: c * solution.value, witness, solution })
}
