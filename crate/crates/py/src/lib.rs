//! Python bindings for the swervenav kinematics, region lookup, critics,
//! motion controller and benchmark runner.

use std::collections::HashMap;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use swervenav::cli::ConfigId;
use swervenav::controller::{ControllerConfig, MotionController};
use swervenav::geometry::{ConstraintArrangement, Region};
use swervenav::kinematics::{self, BodyVelocity, ChassisGeometry, SteeringLimits, WheelCommand};
use swervenav::planner::{self as dwa, PlanningContext};
use swervenav::sim::grid::{Costmap, OccupancyGrid};
use swervenav::sim::metrics::ExperimentSummary;
use swervenav::sim::{run_experiment_with, Scenario};
use swervenav::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        Error::TableConstruction(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn velocity(v: (f64, f64, f64)) -> BodyVelocity {
    BodyVelocity::new(v.0, v.1, v.2)
}

fn region_value(r: Region) -> Option<u8> {
    r.id().map(|id| id.0)
}

fn parse_config(id: &str) -> PyResult<ConfigId> {
    id.parse::<ConfigId>().map_err(PyValueError::new_err)
}

type Wheels = (Vec<f64>, Vec<f64>);

fn wheels(cmd: &WheelCommand) -> Wheels {
    (cmd.delta.to_vec(), cmd.omega.to_vec())
}

fn command(delta: Vec<f64>, omega: Vec<f64>) -> PyResult<WheelCommand> {
    let n = kinematics::WHEEL_COUNT;
    if delta.len() != n || omega.len() != n {
        return Err(PyValueError::new_err(format!("expected {n} steering angles and {n} drive rates")));
    }
    Ok(WheelCommand {
        delta: std::array::from_fn(|i| delta[i]),
        omega: std::array::from_fn(|i| omega[i]),
    })
}

/// Chassis dimensions (metres) and steering limits (degrees) with the
/// region table built for them.
#[pyclass(name = "Chassis", module = "swervenav_py", frozen)]
struct PyChassis {
    arr: ConstraintArrangement,
}

#[pymethods]
impl PyChassis {
    #[new]
    #[pyo3(signature = (delta_max_deg=130.0, delta_min_deg=None, w_l=0.2, w_r=0.2, l_f=0.2, l_r=0.2, wheel_radius=0.08))]
    fn new(
        delta_max_deg: f64,
        delta_min_deg: Option<f64>,
        w_l: f64,
        w_r: f64,
        l_f: f64,
        l_r: f64,
        wheel_radius: f64,
    ) -> PyResult<Self> {
        let geo = ChassisGeometry::new(w_l, w_r, l_f, l_r, wheel_radius).map_err(to_py)?;
        let lo = delta_min_deg.unwrap_or(-delta_max_deg);
        let lim = SteeringLimits::new(lo.to_radians(), delta_max_deg.to_radians()).map_err(to_py)?;
        let arr = ConstraintArrangement::with_options(&geo, &lim, &Default::default()).map_err(to_py)?;
        Ok(Self { arr })
    }

    /// "general", "right-angle" or "unconstrained".
    #[getter]
    fn regime(&self) -> &'static str {
        use swervenav::geometry::SteeringRegime::*;
        match self.arr.regime() {
            General => "general",
            RightAngle => "right-angle",
            Unconstrained => "unconstrained",
        }
    }

    #[getter]
    fn signature_count(&self) -> usize {
        self.arr.signature_count()
    }

    #[getter]
    fn region_count(&self) -> usize {
        self.arr.region_count()
    }

    /// Rows of the constraint matrix as `(v_x, v_y, ψ̇)` coefficients.
    fn b_matrix(&self) -> Vec<[f64; 3]> {
        self.arr.b_matrix()
    }

    /// Region id of a body velocity, or None when it is stationary.
    fn region_of(&self, v: (f64, f64, f64)) -> Option<u8> {
        region_value(self.arr.region_of(velocity(v)))
    }

    /// Sign pattern of the constraint rows as a bit string, row 1 first.
    fn signature(&self, v: (f64, f64, f64)) -> Option<String> {
        self.arr
            .region_signature(velocity(v))
            .map(|s| s.to_bit_string(self.arr.rows().len()))
    }

    fn distance_to_nearest_plane(&self, v: (f64, f64, f64)) -> Option<f64> {
        self.arr.distance_to_nearest_plane(velocity(v))
    }

    /// One dict per region: id, signatures, solid angle, bounding rows.
    fn regions(&self) -> Vec<HashMap<&'static str, Py<PyAny>>> {
        let n = self.arr.rows().len();
        Python::attach(|py| {
            self.arr
                .table()
                .regions()
                .iter()
                .map(|r| {
                    let sigs: Vec<String> = r.signatures.iter().map(|s| s.to_bit_string(n)).collect();
                    let mut d = HashMap::new();
                    d.insert("id", r.id.0.into_pyobject(py).unwrap().into_any().unbind());
                    d.insert("signatures", sigs.into_pyobject(py).unwrap().into_any().unbind());
                    d.insert("solid_angle", r.solid_angle.into_pyobject(py).unwrap().into_any().unbind());
                    d.insert(
                        "bounding_rows",
                        r.bounding_rows.clone().into_pyobject(py).unwrap().into_any().unbind(),
                    );
                    d
                })
                .collect()
        })
    }

    /// Raw steering angles and drive rates for a body velocity.
    fn inverse_kinematics(&self, v: (f64, f64, f64)) -> Wheels {
        wheels(&kinematics::inverse_kinematics(velocity(v), self.arr.geometry()))
    }

    /// Inverse kinematics followed by the flip rule.
    fn wheel_command(&self, v: (f64, f64, f64)) -> Wheels {
        let raw = kinematics::inverse_kinematics(velocity(v), self.arr.geometry());
        wheels(&kinematics::apply_flip_rule(&raw, self.arr.limits()))
    }

    fn apply_flip_rule(&self, delta: Vec<f64>, omega: Vec<f64>) -> PyResult<Wheels> {
        Ok(wheels(&kinematics::apply_flip_rule(&command(delta, omega)?, self.arr.limits())))
    }

    fn forward_kinematics(&self, delta: Vec<f64>, omega: Vec<f64>) -> PyResult<(f64, f64, f64)> {
        let v = kinematics::forward_kinematics(&command(delta, omega)?, self.arr.geometry());
        Ok((v.vx, v.vy, v.psi_dot))
    }

    /// Swerve-constraint cost of moving from `current` to `candidate` under a
    /// named configuration; None when the move is inadmissible.
    #[pyo3(signature = (current, candidate, config="aug-DWA-2"))]
    fn swerve_cost(&self, current: (f64, f64, f64), candidate: (f64, f64, f64), config: &str) -> PyResult<Option<f64>> {
        let cfg = parse_config(config)?.experiment_config().planner;
        let costmap = Costmap::new(OccupancyGrid::new(1.0, 1, 1, [-0.5, -0.5]).map_err(to_py)?);
        let path = [[0.0, 0.0]];
        let ctx = PlanningContext {
            current_velocity: velocity(current),
            pose: Default::default(),
            path: &path,
            goal: Default::default(),
            costmap: &costmap,
        };
        Ok(dwa::swerve_critic(&cfg, &self.arr, &ctx, velocity(candidate)).cost())
    }
}

/// Wheel-level motion controller that stops and re-steers before a flip.
#[pyclass(name = "Controller", module = "swervenav_py")]
struct PyController {
    inner: MotionController,
}

#[pymethods]
impl PyController {
    #[new]
    #[pyo3(signature = (chassis, shortest_transition=false, steering_rate_max=None, drive_accel_max=None))]
    fn new(
        chassis: &PyChassis,
        shortest_transition: bool,
        steering_rate_max: Option<f64>,
        drive_accel_max: Option<f64>,
    ) -> PyResult<Self> {
        let mut cfg = ControllerConfig {
            shortest_transition,
            ..ControllerConfig::default()
        };
        if let Some(r) = steering_rate_max {
            cfg.steering_rate_max = r;
        }
        if let Some(a) = drive_accel_max {
            cfg.drive_accel_max = a;
        }
        let inner = MotionController::new(cfg, *chassis.arr.geometry(), *chassis.arr.limits()).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Advances one control period; returns `(delta, omega, events)`.
    fn step(&mut self, chassis: &PyChassis, v: (f64, f64, f64)) -> (Vec<f64>, Vec<f64>, Vec<String>) {
        let (w, events) = self.inner.step(velocity(v), &chassis.arr);
        (w.delta.to_vec(), w.omega.to_vec(), events.iter().map(|e| e.to_string()).collect())
    }

    #[getter]
    fn discontinuity_count(&self) -> u32 {
        self.inner.discontinuity_count()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        match self.inner.state().mode {
            swervenav::controller::ControllerMode::Tracking => "tracking",
            swervenav::controller::ControllerMode::StopAndReposition => "stop-and-reposition",
        }
    }
}

/// The six benchmark configuration ids.
#[pyfunction]
fn config_ids() -> Vec<&'static str> {
    ConfigId::ALL.iter().map(|c| c.as_str()).collect()
}

#[pyfunction]
fn scenarios() -> Vec<&'static str> {
    swervenav::sim::scenario::BUILTIN_SCENARIOS.to_vec()
}

/// Runs a scenario under one configuration and returns per-run metrics plus
/// the summary, as plain dicts.
#[pyfunction]
#[pyo3(signature = (scenario, config, repeats=10, seed=0, noise_sigma=None))]
fn run_experiment(
    py: Python<'_>,
    scenario: &str,
    config: &str,
    repeats: usize,
    seed: u64,
    noise_sigma: Option<f64>,
) -> PyResult<(Vec<HashMap<&'static str, f64>>, HashMap<&'static str, f64>)> {
    let id = parse_config(config)?;
    let scen = Scenario::load(scenario).map_err(to_py)?;
    let mut cfg = id.experiment_config();
    cfg.repeats = repeats;
    cfg.noise.seed = seed;
    if let Some(s) = noise_sigma {
        cfg.noise.pose_noise_sigma = s;
        cfg.noise.velocity_noise_sigma = s;
    }
    let runs = py
        .detach(|| {
            let arr = ConstraintArrangement::with_options(&cfg.geometry, &cfg.limits, &Default::default())?;
            run_experiment_with(&scen, &cfg, &arr)
        })
        .map_err(to_py)?;
    let summary = ExperimentSummary::new(&scen.name, id.as_str(), &runs).map_err(to_py)?;
    let rows = runs
        .iter()
        .map(|r| {
            HashMap::from([
                ("run", r.run as f64),
                ("discontinuity_count", f64::from(r.discontinuity_count)),
                ("travel_time", r.travel_time),
                ("completed", f64::from(u8::from(r.completed))),
            ])
        })
        .collect();
    let s = HashMap::from([
        ("runs", summary.runs as f64),
        ("completed_runs", summary.completed_runs as f64),
        ("discontinuity_mean", summary.discontinuity_count.mean),
        ("discontinuity_median", summary.discontinuity_count.median),
        ("discontinuity_std", summary.discontinuity_count.std),
        ("travel_time_mean", summary.travel_time.mean),
        ("travel_time_median", summary.travel_time.median),
        ("travel_time_std", summary.travel_time.std),
    ]);
    Ok((rows, s))
}

#[pymodule]
fn swervenav_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyChassis>()?;
    m.add_class::<PyController>()?;
    m.add_function(wrap_pyfunction!(config_ids, m)?)?;
    m.add_function(wrap_pyfunction!(scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
