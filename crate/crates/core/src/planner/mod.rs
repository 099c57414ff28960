//! Dynamic-window local planner.
//!
//! Candidate body velocities are sampled from the window reachable within one
//! planning interval, forward-simulated, and scored by a chain of critics. The
//! swerve-constraint and smoothness critics sit alongside the usual path,
//! goal and obstacle critics.

mod critics;
mod window;

use serde::{Deserialize, Serialize};

use crate::geometry::ConstraintArrangement;
use crate::kinematics::{BodyVelocity, Pose2};
use crate::sim::grid::Costmap;

pub use critics::{
    goal_distance_critic, obstacle_critic, path_distance_critic, point_to_polyline,
    smoothness_critic, swerve_critic, swerve_distance_cost, Score,
};
pub use window::{rollout, sample_window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoringMode {
    /// Region membership only: zero / half / full cost or inadmissible.
    Simple,
    /// Same-region candidates decay exponentially with distance to the nearest plane.
    DistanceBased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreferredSet {
    ForwardOnly,
    ForwardBackward,
}

impl PreferredSet {
    pub fn contains(self, id: crate::geometry::RegionId) -> bool {
        match self {
            PreferredSet::ForwardOnly => id.0 == 0,
            PreferredSet::ForwardBackward => id.0 <= 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticWeights {
    pub path: f64,
    pub goal: f64,
    pub obstacle: f64,
    pub swerve: f64,
    pub smoothness: f64,
}

impl Default for CriticWeights {
    fn default() -> Self {
        Self {
            path: 3.0,
            goal: 3.0,
            obstacle: 2.0,
            swerve: 1.0,
            smoothness: 1.0,
        }
    }
}

impl CriticWeights {
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            path: self.path * k,
            goal: self.goal * k,
            obstacle: self.obstacle * k,
            swerve: self.swerve * k,
            smoothness: self.smoothness * k,
        }
    }
}

/// Acceleration limits and absolute velocity bounds, per axis `(v_x, v_y, ψ̇)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicWindow {
    pub accel: [f64; 3],
    pub min_velocity: [f64; 3],
    pub max_velocity: [f64; 3],
    /// Planning interval (s); the window half-width is `accel * plan_dt`.
    pub plan_dt: f64,
}

impl Default for DynamicWindow {
    fn default() -> Self {
        Self {
            accel: [1.0, 1.0, 2.0],
            min_velocity: [-0.5, -0.5, -1.0],
            max_velocity: [0.5, 0.5, 1.0],
            plan_dt: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    pub alpha_swerve: f64,
    pub alpha_smoothness: f64,
    /// Decay rate of the distance-based swerve cost (1 / velocity unit).
    pub gamma: f64,
    /// Velocity step that already earns the full smoothness cost.
    pub delta_v_max: f64,
    pub scoring_mode: ScoringMode,
    pub preferred_set: PreferredSet,
    pub swerve_critic: bool,
    pub smoothness_critic: bool,
    pub weights: CriticWeights,
    pub window: DynamicWindow,
    pub samples: [usize; 3],
    pub sim_time: f64,
    pub sim_dt: f64,
    pub stationary_threshold: f64,
    pub path_scale: f64,
    pub goal_scale: f64,
    pub heading_weight: f64,
    /// Arc length ahead of the robot's projection onto the path used as the active waypoint.
    pub lookahead: f64,
    pub alpha_obstacle: f64,
    pub clearance_scale: f64,
    pub footprint_radius: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            alpha_swerve: 5.0,
            alpha_smoothness: 2.0,
            gamma: 20.0,
            delta_v_max: 0.2,
            scoring_mode: ScoringMode::DistanceBased,
            preferred_set: PreferredSet::ForwardBackward,
            swerve_critic: true,
            smoothness_critic: true,
            weights: CriticWeights::default(),
            window: DynamicWindow::default(),
            samples: [7, 7, 7],
            sim_time: 1.5,
            sim_dt: 0.1,
            stationary_threshold: crate::geometry::STATIONARY_THRESHOLD,
            // Metric critics scaled so one window step of progress (~0.3 m)
            // outweighs a full smoothness penalty. The heading weight is high
            // enough that the smallest rotation step out of rest pays for its
            // smoothness cost, otherwise the robot parks short of the goal heading.
            path_scale: 0.2,
            goal_scale: 0.2,
            heading_weight: 4.0,
            lookahead: 1.0,
            alpha_obstacle: 1.0,
            clearance_scale: 0.2,
            footprint_radius: 0.32,
        }
    }
}

impl PlannerConfig {
    /// Stock planner: no swerve or smoothness critics.
    pub fn stock() -> Self {
        Self {
            swerve_critic: false,
            smoothness_critic: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let positive = [
            ("alpha_swerve", self.alpha_swerve),
            ("alpha_smoothness", self.alpha_smoothness),
            ("gamma", self.gamma),
            ("delta_v_max", self.delta_v_max),
            ("sim_time", self.sim_time),
            ("sim_dt", self.sim_dt),
            ("plan_dt", self.window.plan_dt),
            ("path_scale", self.path_scale),
            ("goal_scale", self.goal_scale),
            ("clearance_scale", self.clearance_scale),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(crate::Error::InvalidConfig(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if self.samples.iter().any(|&n| n == 0) {
            return Err(crate::Error::InvalidConfig(
                "sample counts must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Number of poses in a rollout, `floor(sim_time / sim_dt) + 1`.
    pub fn rollout_len(&self) -> usize {
        (self.sim_time / self.sim_dt + 1e-9).floor() as usize + 1
    }
}

/// Everything the critics need to know about the current planning cycle.
#[derive(Debug, Clone, Copy)]
pub struct PlanningContext<'a> {
    /// Velocity commanded in the previous cycle.
    pub current_velocity: BodyVelocity,
    pub pose: Pose2,
    /// Global-plan waypoints leading to `goal`; never empty.
    pub path: &'a [[f64; 2]],
    pub goal: Pose2,
    pub costmap: &'a Costmap,
}

impl PlanningContext<'_> {
    /// The path point `lookahead` metres past the robot's projection onto the
    /// path, and whether that point is the end of the path.
    pub fn active_waypoint(&self, lookahead: f64) -> ([f64; 2], bool) {
        let path = self.path;
        let last = *path.last().expect("waypoint path must not be empty");
        if path.len() == 1 {
            return (last, true);
        }
        let (_, seg, t) = point_to_polyline([self.pose.x, self.pose.y], path);
        let mut remaining = lookahead;
        let mut from = lerp(path[seg], path[seg + 1], t);
        for k in seg..path.len() - 1 {
            let to = path[k + 1];
            let len = (to[0] - from[0]).hypot(to[1] - from[1]);
            if len >= remaining {
                let f = if len > 0.0 { remaining / len } else { 0.0 };
                let p = lerp(from, to, f);
                let at_end = k + 1 == path.len() - 1 && (len - remaining) < 1e-9;
                return (p, at_end);
            }
            remaining -= len;
            from = to;
        }
        (last, true)
    }
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

/// Unweighted critic outputs for one admissible candidate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CostBreakdown {
    pub path: f64,
    pub goal: f64,
    pub obstacle: f64,
    pub swerve: f64,
    pub smoothness: f64,
    /// Weighted sum.
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateVelocity {
    pub v: BodyVelocity,
    pub rollout: Vec<Pose2>,
    /// `None` when some critic flagged the candidate inadmissible.
    pub cost: Option<CostBreakdown>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub velocity: BodyVelocity,
    pub cost: Option<CostBreakdown>,
    /// Every candidate was inadmissible; `velocity` is zero and the caller should stop.
    pub all_inadmissible: bool,
}

/// Runs every critic on one candidate.
pub fn evaluate_candidate(
    cfg: &PlannerConfig,
    arr: &ConstraintArrangement,
    ctx: &PlanningContext<'_>,
    v: BodyVelocity,
    active: ([f64; 2], bool),
) -> CandidateVelocity {
    let poses = rollout(v, ctx.pose, cfg);
    let cost = score_rollout(cfg, arr, ctx, v, &poses, active);
    CandidateVelocity {
        v,
        rollout: poses,
        cost,
    }
}

fn score_rollout(
    cfg: &PlannerConfig,
    arr: &ConstraintArrangement,
    ctx: &PlanningContext<'_>,
    v: BodyVelocity,
    poses: &[Pose2],
    active: ([f64; 2], bool),
) -> Option<CostBreakdown> {
    let end = *poses.last()?;
    let obstacle = obstacle_critic(cfg, ctx.costmap, poses).cost()?;
    let swerve = if cfg.swerve_critic {
        swerve_critic(cfg, arr, ctx, v).cost()?
    } else {
        0.0
    };
    let smoothness = if cfg.smoothness_critic {
        smoothness_critic(cfg, ctx, v)
    } else {
        0.0
    };
    let path = path_distance_critic(cfg, ctx, &end);
    let goal = goal_distance_critic(cfg, ctx, &end, active);
    let w = &cfg.weights;
    let total = w.path * path
        + w.goal * goal
        + w.obstacle * obstacle
        + w.swerve * swerve
        + w.smoothness * smoothness;
    Some(CostBreakdown {
        path,
        goal,
        obstacle,
        swerve,
        smoothness,
        total,
    })
}

/// Scores the whole window and returns every candidate in grid order.
pub fn evaluate_window(
    cfg: &PlannerConfig,
    arr: &ConstraintArrangement,
    ctx: &PlanningContext<'_>,
) -> Vec<CandidateVelocity> {
    let active = ctx.active_waypoint(cfg.lookahead);
    sample_window(cfg, ctx)
        .into_iter()
        .map(|v| evaluate_candidate(cfg, arr, ctx, v, active))
        .collect()
}

/// Lowest weighted-cost admissible candidate; ties go to the earlier grid entry.
pub fn select_velocity(
    cfg: &PlannerConfig,
    arr: &ConstraintArrangement,
    ctx: &PlanningContext<'_>,
) -> Selection {
    let active = ctx.active_waypoint(cfg.lookahead);
    let mut best: Option<(BodyVelocity, CostBreakdown)> = None;
    for v in sample_window(cfg, ctx) {
        let poses = rollout(v, ctx.pose, cfg);
        if let Some(c) = score_rollout(cfg, arr, ctx, v, &poses, active) {
            if best.map_or(true, |(_, b)| c.total < b.total) {
                best = Some((v, c));
            }
        }
    }
    match best {
        Some((velocity, cost)) => Selection {
            velocity,
            cost: Some(cost),
            all_inadmissible: false,
        },
        None => Selection {
            velocity: BodyVelocity::ZERO,
            cost: None,
            all_inadmissible: true,
        },
    }
}
