//! Chassis kinematics for a four-wheel independent steering drive.
//!
//! Wheels are indexed front-left, rear-left, rear-right, front-right. The body
//! frame has `x` forward and `y` to the left; wheel `i` sits at
//! `(l_i, -w_i)` with `w = [-w_l, -w_l, w_r, w_r]` and `l = [l_f, -l_r, -l_r, l_f]`,
//! so its contact-point velocity is `(v_x + w_i ψ̇, v_y + l_i ψ̇)`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const WHEEL_COUNT: usize = 4;

/// Wraps an angle into `(-π, π]`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a % (2.0 * PI);
    if r <= -PI {
        r += 2.0 * PI;
    } else if r > PI {
        r -= 2.0 * PI;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChassisGeometry {
    /// Half-track, left side (m).
    pub w_l: f64,
    /// Half-track, right side (m).
    pub w_r: f64,
    /// Front wheelbase (m).
    pub l_f: f64,
    /// Rear wheelbase (m).
    pub l_r: f64,
    /// Wheel radius (m).
    pub r_w: f64,
}

impl Default for ChassisGeometry {
    /// 0.2 m square wheel layout with 0.08 m hub wheels.
    fn default() -> Self {
        Self {
            w_l: 0.2,
            w_r: 0.2,
            l_f: 0.2,
            l_r: 0.2,
            r_w: 0.08,
        }
    }
}

impl ChassisGeometry {
    pub fn new(w_l: f64, w_r: f64, l_f: f64, l_r: f64, r_w: f64) -> Result<Self> {
        let g = Self {
            w_l,
            w_r,
            l_f,
            l_r,
            r_w,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("w_l", self.w_l),
            ("w_r", self.w_r),
            ("l_f", self.l_f),
            ("l_r", self.l_r),
            ("r_w", self.r_w),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidGeometry(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Lateral offsets `w_i` as they appear in the contact-velocity x term.
    pub fn lateral_terms(&self) -> [f64; WHEEL_COUNT] {
        [-self.w_l, -self.w_l, self.w_r, self.w_r]
    }

    /// Longitudinal offsets `l_i` as they appear in the contact-velocity y term.
    pub fn longitudinal_terms(&self) -> [f64; WHEEL_COUNT] {
        [self.l_f, -self.l_r, -self.l_r, self.l_f]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringLimits {
    pub delta_min: f64,
    pub delta_max: f64,
}

impl SteeringLimits {
    pub fn new(delta_min: f64, delta_max: f64) -> Result<Self> {
        if !(delta_min.is_finite() && delta_max.is_finite()) {
            return Err(Error::InvalidLimits("limits must be finite".into()));
        }
        if !(delta_min < 0.0 && 0.0 < delta_max) {
            return Err(Error::InvalidLimits(format!(
                "expected delta_min < 0 < delta_max, got [{delta_min}, {delta_max}]"
            )));
        }
        Ok(Self {
            delta_min,
            delta_max,
        })
    }

    /// Symmetric limits `[-max, max]` given in degrees.
    pub fn symmetric_deg(max_deg: f64) -> Result<Self> {
        let m = max_deg.to_radians();
        Self::new(-m, m)
    }

    pub fn contains(&self, delta: f64) -> bool {
        delta >= self.delta_min && delta <= self.delta_max
    }

    pub fn is_unconstrained(&self) -> bool {
        self.delta_min <= -PI && self.delta_max >= PI
    }
}

impl Default for SteeringLimits {
    /// ±130°.
    fn default() -> Self {
        let m = 130f64.to_radians();
        Self {
            delta_min: -m,
            delta_max: m,
        }
    }
}

/// Body velocity `[v_x, v_y, ψ̇]` in the chassis frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BodyVelocity {
    pub vx: f64,
    pub vy: f64,
    pub psi_dot: f64,
}

impl BodyVelocity {
    pub const ZERO: BodyVelocity = BodyVelocity {
        vx: 0.0,
        vy: 0.0,
        psi_dot: 0.0,
    };

    pub const fn new(vx: f64, vy: f64, psi_dot: f64) -> Self {
        Self { vx, vy, psi_dot }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.vx, self.vy, self.psi_dot]
    }

    /// Unweighted Euclidean norm over (m/s, m/s, rad/s).
    pub fn norm(self) -> f64 {
        (self.vx * self.vx + self.vy * self.vy + self.psi_dot * self.psi_dot).sqrt()
    }

    pub fn dot(self, row: &[f64; 3]) -> f64 {
        row[0] * self.vx + row[1] * self.vy + row[2] * self.psi_dot
    }

    pub fn is_finite(self) -> bool {
        self.vx.is_finite() && self.vy.is_finite() && self.psi_dot.is_finite()
    }
}

impl Add for BodyVelocity {
    type Output = BodyVelocity;
    fn add(self, o: BodyVelocity) -> BodyVelocity {
        BodyVelocity::new(self.vx + o.vx, self.vy + o.vy, self.psi_dot + o.psi_dot)
    }
}

impl Sub for BodyVelocity {
    type Output = BodyVelocity;
    fn sub(self, o: BodyVelocity) -> BodyVelocity {
        BodyVelocity::new(self.vx - o.vx, self.vy - o.vy, self.psi_dot - o.psi_dot)
    }
}

impl Mul<f64> for BodyVelocity {
    type Output = BodyVelocity;
    fn mul(self, k: f64) -> BodyVelocity {
        BodyVelocity::new(self.vx * k, self.vy * k, self.psi_dot * k)
    }
}

/// Planar robot pose in the world frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl Pose2 {
    pub const fn new(x: f64, y: f64, heading: f64) -> Self {
        Self { x, y, heading }
    }

    pub fn distance_to(&self, other: &Pose2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Absolute wrapped heading difference in `[0, π]`.
    pub fn heading_error(&self, other: &Pose2) -> f64 {
        normalize_angle(self.heading - other.heading).abs()
    }
}

/// Per-wheel steering angles and drive rates, ordered FL, RL, RR, FR.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WheelCommand {
    pub delta: [f64; WHEEL_COUNT],
    pub omega: [f64; WHEEL_COUNT],
}

impl WheelCommand {
    pub const ZERO: WheelCommand = WheelCommand {
        delta: [0.0; WHEEL_COUNT],
        omega: [0.0; WHEEL_COUNT],
    };

    /// Contact-point velocity `(v_i cos δ_i, v_i sin δ_i)` of wheel `i`.
    pub fn contact_velocity(&self, i: usize, r_w: f64) -> (f64, f64) {
        let speed = self.omega[i] * r_w;
        (speed * self.delta[i].cos(), speed * self.delta[i].sin())
    }
}

/// Contact-point velocity components `(x_i, y_i)` of every wheel; these are the
/// two arguments of each wheel's four-quadrant arctangent.
pub fn contact_velocities(v: BodyVelocity, geo: &ChassisGeometry) -> [(f64, f64); WHEEL_COUNT] {
    let w = geo.lateral_terms();
    let l = geo.longitudinal_terms();
    std::array::from_fn(|i| (v.vx + w[i] * v.psi_dot, v.vy + l[i] * v.psi_dot))
}

/// Steering angles and (non-negative) drive rates realizing `v`.
///
/// A stationary body returns the all-zero command; the controller interprets
/// that as "hold the current steering".
pub fn inverse_kinematics(v: BodyVelocity, geo: &ChassisGeometry) -> WheelCommand {
    if v == BodyVelocity::ZERO {
        return WheelCommand::ZERO;
    }
    let mut cmd = WheelCommand::ZERO;
    for (i, (x, y)) in contact_velocities(v, geo).into_iter().enumerate() {
        cmd.delta[i] = normalize_angle(y.atan2(x));
        cmd.omega[i] = x.hypot(y) / geo.r_w;
    }
    cmd
}

/// Replaces every out-of-range steering angle with its opposite orientation
/// and reverses that wheel's drive direction.
pub fn apply_flip_rule(cmd: &WheelCommand, lim: &SteeringLimits) -> WheelCommand {
    let mut out = *cmd;
    for i in 0..WHEEL_COUNT {
        let d = cmd.delta[i];
        if !lim.contains(d) {
            out.delta[i] = normalize_angle(d - PI * d.signum());
            out.omega[i] = -cmd.omega[i];
        }
    }
    out
}

pub fn within_limits(cmd: &WheelCommand, lim: &SteeringLimits) -> bool {
    cmd.delta.iter().all(|&d| lim.contains(d))
}

/// Least-squares body velocity from the four wheel states.
///
/// Stacks `[1, 0, w_i] v = v_i cos δ_i` and `[0, 1, l_i] v = v_i sin δ_i` for all
/// wheels and solves the normal equations. Inconsistent wheel states (scrubbing)
/// give the least-squares compromise.
pub fn forward_kinematics(cmd: &WheelCommand, geo: &ChassisGeometry) -> BodyVelocity {
    let w = geo.lateral_terms();
    let l = geo.longitudinal_terms();
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    for i in 0..WHEEL_COUNT {
        let (cx, cy) = cmd.contact_velocity(i, geo.r_w);
        let rx = Vector3::new(1.0, 0.0, w[i]);
        let ry = Vector3::new(0.0, 1.0, l[i]);
        ata += rx * rx.transpose() + ry * ry.transpose();
        atb += rx * cx + ry * cy;
    }
    let sol = match ata.cholesky() {
        Some(chol) => chol.solve(&atb),
        None => ata
            .full_piv_lu()
            .solve(&atb)
            .unwrap_or_else(Vector3::zeros),
    };
    BodyVelocity::new(sol[0], sol[1], sol[2])
}
