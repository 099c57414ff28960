//! Scenario files: an occupancy grid, a start pose and an ordered goal list.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::grid::OccupancyGrid;
use crate::error::{Error, Result};
use crate::kinematics::Pose2;

/// What a goal is meant to exercise. Informational only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Maneuver {
    Forward,
    Turn,
    Rotation,
    Sideways,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Goal {
    pub pose: Pose2,
    pub maneuver: Maneuver,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub grid: OccupancyGrid,
    pub start: Pose2,
    pub goals: Vec<Goal>,
    /// m
    pub position_tolerance: f64,
    /// rad
    pub heading_tolerance: f64,
}

pub const BUILTIN_SCENARIOS: [&str; 4] = ["rectangle", "figure8", "figurex", "maze"];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    tolerance: ToleranceSpec,
    start: PoseSpec,
    grid: GridSpec,
    goals: Vec<GoalSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ToleranceSpec {
    position: f64,
    heading: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PoseSpec {
    x: f64,
    y: f64,
    heading_deg: f64,
}

impl PoseSpec {
    fn pose(&self) -> Pose2 {
        Pose2::new(self.x, self.y, crate::kinematics::normalize_angle(self.heading_deg.to_radians()))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    resolution: f64,
    origin: [f64; 2],
    width: usize,
    rows: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GoalSpec {
    x: f64,
    y: f64,
    heading_deg: f64,
    maneuver: Maneuver,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let grid = OccupancyGrid::from_rle_rows(
            file.grid.resolution,
            file.grid.origin,
            file.grid.width,
            &file.grid.rows,
        )?;
        let goals = file
            .goals
            .iter()
            .map(|g| Goal {
                pose: PoseSpec {
                    x: g.x,
                    y: g.y,
                    heading_deg: g.heading_deg,
                }
                .pose(),
                maneuver: g.maneuver,
            })
            .collect();
        let s = Self {
            name: file.name,
            grid,
            start: file.start.pose(),
            goals,
            position_tolerance: file.tolerance.position,
            heading_tolerance: file.tolerance.heading,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// One of [`BUILTIN_SCENARIOS`].
    pub fn builtin(name: &str) -> Result<Self> {
        let text = match name {
            "rectangle" => include_str!("../../scenarios/rectangle.toml"),
            "figure8" => include_str!("../../scenarios/figure8.toml"),
            "figurex" => include_str!("../../scenarios/figurex.toml"),
            "maze" => include_str!("../../scenarios/maze.toml"),
            other => {
                return Err(Error::Scenario(format!(
                    "unknown scenario {other:?}; expected one of {}",
                    BUILTIN_SCENARIOS.join(", ")
                )))
            }
        };
        Self::from_toml_str(text)
    }

    /// Built-in name, or a path to a scenario file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if BUILTIN_SCENARIOS.contains(&name_or_path) {
            Self::builtin(name_or_path)
        } else if Path::new(name_or_path).is_file() {
            Self::from_path(Path::new(name_or_path))
        } else {
            Self::builtin(name_or_path)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.goals.is_empty() {
            return Err(Error::Scenario(format!("scenario {} has no goals", self.name)));
        }
        if !(self.position_tolerance > 0.0 && self.heading_tolerance > 0.0) {
            return Err(Error::Scenario("goal tolerances must be positive".into()));
        }
        let check = |p: &Pose2, what: &str| {
            if self.grid.occupied_at(p.x, p.y) {
                Err(Error::Scenario(format!(
                    "{what} ({:.3}, {:.3}) is not in free space",
                    p.x, p.y
                )))
            } else {
                Ok(())
            }
        };
        check(&self.start, "start")?;
        for (k, g) in self.goals.iter().enumerate() {
            check(&g.pose, &format!("goal {k}"))?;
        }
        Ok(())
    }

    pub fn maneuvers(&self) -> Vec<Maneuver> {
        self.goals.iter().map(|g| g.maneuver).collect()
    }
}
