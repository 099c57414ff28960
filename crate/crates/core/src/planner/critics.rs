use super::{PlannerConfig, PlanningContext, ScoringMode};
use crate::geometry::{ConstraintArrangement, Region, SteeringRegime};
use crate::kinematics::{BodyVelocity, Pose2};
use crate::sim::grid::Costmap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Score {
    Cost(f64),
    Inadmissible,
}

impl Score {
    pub fn cost(self) -> Option<f64> {
        match self {
            Score::Cost(c) => Some(c),
            Score::Inadmissible => None,
        }
    }

    pub fn is_inadmissible(self) -> bool {
        matches!(self, Score::Inadmissible)
    }
}

/// Penalizes velocities in non-preferred regions and transitions across
/// discontinuity planes, relative to the previously commanded velocity.
pub fn swerve_critic(
    cfg: &PlannerConfig,
    arr: &ConstraintArrangement,
    ctx: &PlanningContext<'_>,
    candidate: BodyVelocity,
) -> Score {
    if arr.regime() == SteeringRegime::Unconstrained {
        return Score::Cost(0.0);
    }
    if ctx.current_velocity.norm() < cfg.stationary_threshold {
        // Starting from rest there is nothing to be discontinuous with.
        return Score::Cost(0.0);
    }
    let current = match arr.region_of(ctx.current_velocity) {
        Region::Id(id) => id,
        Region::Stationary => return Score::Cost(0.0),
    };
    let next = match arr.region_of(candidate) {
        Region::Id(id) => id,
        // Slowing to a stop never crosses a plane.
        Region::Stationary => return Score::Cost(0.0),
    };
    let preferred = cfg.preferred_set.contains(next);
    if next != current {
        return if preferred {
            Score::Cost(cfg.alpha_swerve)
        } else {
            Score::Inadmissible
        };
    }
    match cfg.scoring_mode {
        ScoringMode::Simple => {
            if preferred {
                Score::Cost(0.0)
            } else {
                Score::Cost(cfg.alpha_swerve / 2.0)
            }
        }
        ScoringMode::DistanceBased => {
            let d = arr.distance_to_nearest_plane(candidate).unwrap_or(f64::INFINITY);
            Score::Cost(swerve_distance_cost(cfg, d))
        }
    }
}

/// `α_swerve · exp(-γ d)`.
pub fn swerve_distance_cost(cfg: &PlannerConfig, d_min: f64) -> f64 {
    cfg.alpha_swerve * (-cfg.gamma * d_min).exp()
}

/// `α_smoothness · min(‖v_d - v_c‖ / Δv_max, 1)`.
pub fn smoothness_critic(
    cfg: &PlannerConfig,
    ctx: &PlanningContext<'_>,
    candidate: BodyVelocity,
) -> f64 {
    let step = (candidate - ctx.current_velocity).norm();
    cfg.alpha_smoothness * (step / cfg.delta_v_max).min(1.0)
}

/// Distance from `p` to the polyline: `(distance, segment index, parameter on segment)`.
/// Ties keep the earliest segment.
pub fn point_to_polyline(p: [f64; 2], path: &[[f64; 2]]) -> (f64, usize, f64) {
    if path.len() == 1 {
        return ((p[0] - path[0][0]).hypot(p[1] - path[0][1]), 0, 0.0);
    }
    let mut best = (f64::INFINITY, 0, 0.0);
    for (k, seg) in path.windows(2).enumerate() {
        let (a, b) = (seg[0], seg[1]);
        let d = [b[0] - a[0], b[1] - a[1]];
        let len2 = d[0] * d[0] + d[1] * d[1];
        let t = if len2 > 0.0 {
            (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let q = [a[0] + t * d[0], a[1] + t * d[1]];
        let dist = (p[0] - q[0]).hypot(p[1] - q[1]);
        if dist < best.0 {
            best = (dist, k, t);
        }
    }
    best
}

/// Rollout endpoint distance to the waypoint polyline, over `path_scale`.
pub fn path_distance_critic(cfg: &PlannerConfig, ctx: &PlanningContext<'_>, end: &Pose2) -> f64 {
    point_to_polyline([end.x, end.y], ctx.path).0 / cfg.path_scale
}

/// Rollout endpoint distance to the active waypoint, plus the weighted heading
/// error to the goal once the active waypoint is the end of the path.
pub fn goal_distance_critic(
    cfg: &PlannerConfig,
    ctx: &PlanningContext<'_>,
    end: &Pose2,
    active: ([f64; 2], bool),
) -> f64 {
    let (wp, is_final) = active;
    let mut cost = (end.x - wp[0]).hypot(end.y - wp[1]) / cfg.goal_scale;
    if is_final {
        cost += cfg.heading_weight * end.heading_error(&ctx.goal);
    }
    cost
}

/// Inadmissible when the footprint circle overlaps an occupied cell anywhere
/// along the rollout; otherwise decays with the smallest clearance.
pub fn obstacle_critic(cfg: &PlannerConfig, costmap: &Costmap, poses: &[Pose2]) -> Score {
    let mut min_clearance = f64::INFINITY;
    for p in poses {
        let c = costmap.clearance(p.x, p.y) - cfg.footprint_radius;
        if c < 0.0 {
            return Score::Inadmissible;
        }
        min_clearance = min_clearance.min(c);
    }
    Score::Cost(cfg.alpha_obstacle * (-min_clearance / cfg.clearance_scale).exp())
}
