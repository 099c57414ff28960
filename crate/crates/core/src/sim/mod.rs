//! Seeded kinematic simulation: occupancy-grid worlds, scenarios, the closed
//! control loop and run metrics.

pub mod astar;
pub mod grid;
pub mod metrics;
pub mod scenario;
pub mod world;

pub use astar::plan_waypoints;
pub use grid::{Costmap, OccupancyGrid};
pub use metrics::{aggregate, RunMetrics, Summary};
pub use scenario::{Maneuver, Scenario};
pub use world::{run_experiment, run_experiment_with, step_sim, ExperimentConfig, NoiseModel, RobotState};
