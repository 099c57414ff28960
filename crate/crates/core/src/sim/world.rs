//! Closed-loop simulation: planner at 5 Hz, controller and kinematics at 100 Hz.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::astar::plan_waypoints;
use super::grid::Costmap;
use super::metrics::{RunMetrics, TrajectoryRow};
use super::scenario::Scenario;
use crate::controller::{ControllerConfig, MotionController};
use crate::error::{Error, Result};
use crate::geometry::{build_arrangement, ConstraintArrangement};
use crate::kinematics::{
    forward_kinematics, normalize_angle, BodyVelocity, ChassisGeometry, Pose2, SteeringLimits,
    WheelCommand,
};
use crate::planner::{select_velocity, PlannerConfig, PlanningContext};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    pub seed: u64,
    /// Standard deviation (m, and rad for heading) of the pose the planner sees.
    pub pose_noise_sigma: f64,
    /// Standard deviation added to each realized body-velocity component.
    pub velocity_noise_sigma: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            seed: 0,
            pose_noise_sigma: 0.01,
            velocity_noise_sigma: 0.01,
        }
    }
}

impl NoiseModel {
    pub fn zero(seed: u64) -> Self {
        Self {
            seed,
            pose_noise_sigma: 0.0,
            velocity_noise_sigma: 0.0,
        }
    }

    /// Independent ChaCha8 stream for one run of an experiment.
    pub fn stream(&self, run: usize) -> NoiseStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(run as u64);
        NoiseStream {
            rng,
            pose: Normal::new(0.0, self.pose_noise_sigma.max(0.0)).expect("finite sigma"),
            velocity: Normal::new(0.0, self.velocity_noise_sigma.max(0.0)).expect("finite sigma"),
        }
    }
}

pub struct NoiseStream {
    rng: ChaCha8Rng,
    pose: Normal<f64>,
    velocity: Normal<f64>,
}

impl NoiseStream {
    pub fn perturb_pose(&mut self, p: Pose2) -> Pose2 {
        Pose2::new(
            p.x + self.pose.sample(&mut self.rng),
            p.y + self.pose.sample(&mut self.rng),
            normalize_angle(p.heading + self.pose.sample(&mut self.rng)),
        )
    }

    pub fn velocity(&mut self) -> BodyVelocity {
        BodyVelocity::new(
            self.velocity.sample(&mut self.rng),
            self.velocity.sample(&mut self.rng),
            self.velocity.sample(&mut self.rng),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RobotState {
    pub pose: Pose2,
    pub body_velocity: BodyVelocity,
    pub wheels: WheelCommand,
}

/// Realizes the wheel state for `dt` seconds. Velocity noise only applies
/// while the wheels are turning, so a stopped robot stays put.
pub fn step_sim(
    state: &RobotState,
    wheels: &WheelCommand,
    geo: &ChassisGeometry,
    noise: &mut NoiseStream,
    dt: f64,
) -> RobotState {
    let mut v = forward_kinematics(wheels, geo);
    if wheels.omega.iter().any(|w| *w != 0.0) {
        v = v + noise.velocity();
    }
    let p = state.pose;
    let (s, c) = p.heading.sin_cos();
    RobotState {
        pose: Pose2::new(
            p.x + (v.vx * c - v.vy * s) * dt,
            p.y + (v.vx * s + v.vy * c) * dt,
            normalize_angle(p.heading + v.psi_dot * dt),
        ),
        body_velocity: v,
        wheels: *wheels,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub planner: PlannerConfig,
    pub controller: ControllerConfig,
    pub geometry: ChassisGeometry,
    pub limits: SteeringLimits,
    pub noise: NoiseModel,
    pub repeats: usize,
    /// Simulated seconds allowed per goal before it is abandoned.
    pub goal_timeout: f64,
    /// s between planner cycles.
    pub planner_period: f64,
    /// Obstacle inflation (m) for the waypoint planner.
    pub inflation_radius: f64,
    /// Keep every n-th cell of the A* path.
    pub waypoint_decimation: usize,
    /// The run fails when clearance at the robot center drops below this (m).
    pub collision_radius: f64,
    /// Record a trajectory row every n control steps (and on every event).
    pub trajectory_stride: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            planner: PlannerConfig::default(),
            controller: ControllerConfig::default(),
            geometry: ChassisGeometry::default(),
            limits: SteeringLimits::default(),
            noise: NoiseModel::default(),
            repeats: 10,
            goal_timeout: 120.0,
            planner_period: 0.2,
            inflation_radius: 0.45,
            waypoint_decimation: 5,
            collision_radius: 0.28,
            trajectory_stride: 10,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.planner.validate()?;
        self.controller.validate()?;
        self.geometry.validate()?;
        if self.repeats == 0 {
            return Err(Error::InvalidConfig("repeats must be at least 1".into()));
        }
        for (name, v) in [
            ("goal_timeout", self.goal_timeout),
            ("planner_period", self.planner_period),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if self.planner_period < self.controller.control_dt {
            return Err(Error::InvalidConfig(
                "planner_period must not be shorter than control_dt".into(),
            ));
        }
        Ok(())
    }

    fn planner_every(&self) -> usize {
        ((self.planner_period / self.controller.control_dt).round() as usize).max(1)
    }
}

/// Waypoint legs between consecutive goals, planned once on the inflated grid.
pub fn plan_legs(scenario: &Scenario, cfg: &ExperimentConfig) -> Result<Vec<Vec<[f64; 2]>>> {
    let inflated = scenario.grid.inflate(cfg.inflation_radius);
    let mut from = scenario.start;
    let mut legs = Vec::with_capacity(scenario.goals.len());
    for g in &scenario.goals {
        legs.push(plan_waypoints(
            &inflated,
            [from.x, from.y],
            [g.pose.x, g.pose.y],
            cfg.waypoint_decimation,
        )?);
        from = g.pose;
    }
    Ok(legs)
}

/// Runs `cfg.repeats` closed-loop simulations of the scenario. Runs are
/// independent and may execute in parallel; results are in run order.
pub fn run_experiment(scenario: &Scenario, cfg: &ExperimentConfig) -> Result<Vec<RunMetrics>> {
    let arr = build_arrangement(&cfg.geometry, &cfg.limits)?;
    run_experiment_with(scenario, cfg, &arr)
}

/// [`run_experiment`] with a prebuilt arrangement matching `cfg`.
pub fn run_experiment_with(
    scenario: &Scenario,
    cfg: &ExperimentConfig,
    arr: &ConstraintArrangement,
) -> Result<Vec<RunMetrics>> {
    cfg.validate()?;
    let legs = plan_legs(scenario, cfg)?;
    let costmap = Costmap::new(scenario.grid.clone());
    (0..cfg.repeats)
        .into_par_iter()
        .map(|run| simulate_run(scenario, cfg, arr, &legs, &costmap, run))
        .collect()
}

fn simulate_run(
    scenario: &Scenario,
    cfg: &ExperimentConfig,
    arr: &ConstraintArrangement,
    legs: &[Vec<[f64; 2]>],
    costmap: &Costmap,
    run: usize,
) -> Result<RunMetrics> {
    let dt = cfg.controller.control_dt;
    let every = cfg.planner_every();
    let mut noise = cfg.noise.stream(run);
    let mut controller = MotionController::new(cfg.controller, cfg.geometry, cfg.limits)?;
    let mut state = RobotState {
        pose: scenario.start,
        ..RobotState::default()
    };
    let mut v_cmd = BodyVelocity::ZERO;
    let mut goal_idx = 0;
    let mut goal_started = 0.0;
    let mut goals_reached = 0;
    let mut collided = false;
    let mut trajectory = Vec::new();
    let mut step = 0usize;
    let mut t = 0.0;
    // After each goal the robot is brought to rest before the next one is
    // planned, as a navigation stack does when a goal succeeds.
    let mut settling = false;

    while goal_idx < scenario.goals.len() {
        let goal = scenario.goals[goal_idx].pose;
        if step % every == 0 && !settling {
            let ctx = PlanningContext {
                current_velocity: v_cmd,
                pose: noise.perturb_pose(state.pose),
                path: &legs[goal_idx],
                goal,
                costmap,
            };
            v_cmd = select_velocity(&cfg.planner, arr, &ctx).velocity;
        }
        let (wheels, events) = controller.step(v_cmd, arr);
        if settling && wheels.omega.iter().all(|w| *w == 0.0) {
            settling = false;
        }
        state = step_sim(&state, &wheels, &cfg.geometry, &mut noise, dt);
        step += 1;
        t = step as f64 * dt;

        if cfg.trajectory_stride > 0 && (step % cfg.trajectory_stride == 0 || !events.is_empty()) {
            trajectory.push(TrajectoryRow {
                t,
                x: state.pose.x,
                y: state.pose.y,
                heading: state.pose.heading,
                region_id: arr.region_of(v_cmd).as_i32(),
                event: events.iter().map(|e| e.name()).collect::<Vec<_>>().join(" "),
            });
        }

        if costmap.clearance(state.pose.x, state.pose.y) < cfg.collision_radius {
            collided = true;
            break;
        }
        if state.pose.distance_to(&goal) <= scenario.position_tolerance
            && state.pose.heading_error(&goal) <= scenario.heading_tolerance
        {
            goals_reached += 1;
            goal_idx += 1;
            goal_started = t;
            v_cmd = BodyVelocity::ZERO;
            settling = true;
        } else if t - goal_started > cfg.goal_timeout {
            goal_idx += 1;
            goal_started = t;
        }
    }

    Ok(RunMetrics {
        run,
        discontinuity_count: controller.discontinuity_count(),
        travel_time: t,
        completed: !collided && goals_reached == scenario.goals.len(),
        goals_reached,
        collided,
        trajectory,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_wheels_advance_along_heading() {
        let geo = ChassisGeometry::default();
        let mut noise = NoiseModel::zero(1).stream(0);
        let s0 = RobotState {
            pose: Pose2::new(1.0, 2.0, std::f64::consts::FRAC_PI_2),
            ..RobotState::default()
        };
        let wheels = WheelCommand {
            delta: [0.0; 4],
            omega: [12.5; 4],
        };
        let s1 = step_sim(&s0, &wheels, &geo, &mut noise, 0.01);
        assert!((s1.pose.x - 1.0).abs() < 1e-12);
        assert!((s1.pose.y - 2.01).abs() < 1e-12);
        assert!((s1.pose.heading - s0.pose.heading).abs() < 1e-12);
    }

    #[test]
    fn zero_command_keeps_pose() {
        let geo = ChassisGeometry::default();
        let mut noise = NoiseModel::default().stream(3);
        let s0 = RobotState {
            pose: Pose2::new(0.5, -0.5, 0.3),
            ..RobotState::default()
        };
        let s1 = step_sim(&s0, &WheelCommand::ZERO, &geo, &mut noise, 0.01);
        assert_eq!(s1.pose, s0.pose);
    }

    #[test]
    fn noise_streams_are_reproducible_and_distinct() {
        let m = NoiseModel {
            seed: 9,
            ..NoiseModel::default()
        };
        let a: Vec<_> = (0..5).map({
            let mut s = m.stream(0);
            move |_| s.velocity()
        }).collect();
        let b: Vec<_> = (0..5).map({
            let mut s = m.stream(0);
            move |_| s.velocity()
        }).collect();
        let c: Vec<_> = (0..5).map({
            let mut s = m.stream(1);
            move |_| s.velocity()
        }).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn legs_connect_goals() {
        let s = Scenario::builtin("maze").unwrap();
        let legs = plan_legs(&s, &ExperimentConfig::default()).unwrap();
        assert_eq!(legs.len(), s.goals.len());
        for (leg, g) in legs.iter().zip(&s.goals) {
            assert_eq!(*leg.last().unwrap(), [g.pose.x, g.pose.y]);
        }
    }
}
