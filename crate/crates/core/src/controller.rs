//! Wheel-level motion controller.
//!
//! Turns body-velocity commands into steering and drive setpoints, slewing the
//! steering at a bounded rate. When a command would force a wheel flip the
//! controller stops the robot, repositions the wheels and then resumes.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConstraintArrangement, Region};
use crate::kinematics::{
    apply_flip_rule, inverse_kinematics, BodyVelocity, ChassisGeometry, SteeringLimits,
    WheelCommand, WHEEL_COUNT,
};

/// Contact speeds below this (m/s) leave the wheel's steering where it is.
const HOLD_SPEED: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerConfig {
    /// rad/s
    pub steering_rate_max: f64,
    /// rad/s²
    pub drive_accel_max: f64,
    /// rad
    pub reposition_tolerance: f64,
    /// Per wheel, prefer whichever valid orientation needs the smaller steering move.
    pub shortest_transition: bool,
    /// s
    pub control_dt: f64,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        Self {
            steering_rate_max: 2.0,
            drive_accel_max: 25.0,
            reposition_tolerance: 0.05,
            shortest_transition: false,
            control_dt: 0.01,
        }
    }
}

impl ControllerConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("steering_rate_max", self.steering_rate_max),
            ("drive_accel_max", self.drive_accel_max),
            ("reposition_tolerance", self.reposition_tolerance),
            ("control_dt", self.control_dt),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ControllerMode {
    Tracking,
    StopAndReposition,
}

/// Sub-phase of a stop: drives ramp down first, then the wheels turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RepositionPhase {
    Braking,
    Steering,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControllerEvent {
    RegionChanged { from: Region, to: Region },
    StopStarted,
    RepositionDone,
}

impl ControllerEvent {
    pub fn name(&self) -> &'static str {
        match self {
            ControllerEvent::RegionChanged { .. } => "region_changed",
            ControllerEvent::StopStarted => "stop_started",
            ControllerEvent::RepositionDone => "reposition_done",
        }
    }
}

impl fmt::Display for ControllerEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControllerEvent::RegionChanged { from, to } => {
                write!(f, "region_changed {from}->{to}")
            }
            other => f.write_str(other.name()),
        }
    }
}

/// One event-log line: time, event, then steering angles and drive rates.
pub fn format_event_line(t: f64, event: &ControllerEvent, wheels: &WheelCommand) -> String {
    let join = |a: &[f64; WHEEL_COUNT]| {
        a.iter()
            .map(|x| format!("{x:.4}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    format!(
        "t={t:.3} {event} delta=[{}] omega=[{}]",
        join(&wheels.delta),
        join(&wheels.omega)
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerState {
    pub mode: ControllerMode,
    pub phase: RepositionPhase,
    pub wheel_targets: WheelCommand,
    pub wheel_actual: WheelCommand,
    /// Region of the most recent command.
    pub last_region: Region,
    pub discontinuity_count: u32,
    last_command: Option<BodyVelocity>,
}

impl Default for ControllerState {
    fn default() -> Self {
        Self {
            mode: ControllerMode::Tracking,
            phase: RepositionPhase::Braking,
            wheel_targets: WheelCommand::ZERO,
            wheel_actual: WheelCommand::ZERO,
            last_region: Region::Stationary,
            discontinuity_count: 0,
            last_command: None,
        }
    }
}

/// Wheel setpoints for `v_cmd`. Wheels with no contact speed keep their
/// current steering angle. With `shortest_transition`, a wheel whose flipped
/// orientation is also valid takes whichever is closer to `actual`.
pub fn compute_targets(
    v_cmd: BodyVelocity,
    cfg: &ControllerConfig,
    lim: &SteeringLimits,
    geo: &ChassisGeometry,
    actual: &WheelCommand,
) -> WheelCommand {
    let mut cmd = apply_flip_rule(&inverse_kinematics(v_cmd, geo), lim);
    for i in 0..WHEEL_COUNT {
        if (cmd.omega[i] * geo.r_w).abs() < HOLD_SPEED {
            cmd.delta[i] = actual.delta[i];
            cmd.omega[i] = 0.0;
            continue;
        }
        if cfg.shortest_transition {
            let d = cmd.delta[i];
            let sign = if d >= 0.0 { 1.0 } else { -1.0 };
            let alt = d - std::f64::consts::PI * sign;
            if lim.contains(alt) && (alt - actual.delta[i]).abs() < (d - actual.delta[i]).abs() {
                cmd.delta[i] = alt;
                cmd.omega[i] = -cmd.omega[i];
            }
        }
    }
    cmd
}

#[derive(Debug, Clone)]
pub struct MotionController {
    cfg: ControllerConfig,
    geometry: ChassisGeometry,
    limits: SteeringLimits,
    state: ControllerState,
}

impl MotionController {
    pub fn new(cfg: ControllerConfig, geometry: ChassisGeometry, limits: SteeringLimits) -> Result<Self> {
        cfg.validate()?;
        geometry.validate()?;
        Ok(Self {
            cfg,
            geometry,
            limits,
            state: ControllerState::default(),
        })
    }

    pub fn config(&self) -> &ControllerConfig {
        &self.cfg
    }

    pub fn state(&self) -> &ControllerState {
        &self.state
    }

    pub fn wheels(&self) -> &WheelCommand {
        &self.state.wheel_actual
    }

    pub fn discontinuity_count(&self) -> u32 {
        self.state.discontinuity_count
    }

    /// Advances one control period under command `v_cmd` and returns the
    /// actual wheel state plus whatever events fired.
    pub fn step(
        &mut self,
        v_cmd: BodyVelocity,
        arr: &ConstraintArrangement,
    ) -> (WheelCommand, Vec<ControllerEvent>) {
        let mut events = Vec::new();
        if self.state.last_command != Some(v_cmd) {
            self.accept_command(v_cmd, arr, &mut events);
        }
        match self.state.mode {
            ControllerMode::Tracking => self.track(),
            ControllerMode::StopAndReposition => {
                if self.reposition() {
                    self.state.mode = ControllerMode::Tracking;
                    events.push(ControllerEvent::RepositionDone);
                }
            }
        }
        (self.state.wheel_actual, events)
    }

    fn accept_command(
        &mut self,
        v_cmd: BodyVelocity,
        arr: &ConstraintArrangement,
        events: &mut Vec<ControllerEvent>,
    ) {
        let s = &mut self.state;
        s.last_command = Some(v_cmd);
        let region = arr.region_of(v_cmd);
        let targets = if region.is_stationary() {
            // Below the stationary threshold the command is a stop: keep the
            // steering setpoints so near-zero jitter cannot swing the wheels.
            WheelCommand {
                delta: s.wheel_targets.delta,
                omega: [0.0; WHEEL_COUNT],
            }
        } else {
            compute_targets(v_cmd, &self.cfg, &self.limits, &self.geometry, &s.wheel_actual)
        };
        let previous = s.last_region;
        if region != previous {
            events.push(ControllerEvent::RegionChanged {
                from: previous,
                to: region,
            });
        }
        let moving = !previous.is_stationary() && !region.is_stationary();
        // The shortest-transition variant re-picks orientations on its own, so
        // only an actual large wheel move tells it a flip is coming.
        let region_trigger = !self.cfg.shortest_transition && moving && region != previous;
        // Compared against the previous setpoint rather than the actual angle,
        // so a wheel still slewing toward its last target does not count.
        let step_trigger = !previous.is_stationary()
            && (0..WHEEL_COUNT).any(|i| (targets.delta[i] - s.wheel_targets.delta[i]).abs() > FRAC_PI_2);
        s.wheel_targets = targets;
        s.last_region = region;
        if s.mode == ControllerMode::Tracking && (region_trigger || step_trigger) {
            s.mode = ControllerMode::StopAndReposition;
            s.phase = RepositionPhase::Braking;
            s.discontinuity_count += 1;
            events.push(ControllerEvent::StopStarted);
        }
    }

    fn slew_steering(&mut self) {
        let max_step = self.cfg.steering_rate_max * self.cfg.control_dt;
        let s = &mut self.state;
        for i in 0..WHEEL_COUNT {
            let err = s.wheel_targets.delta[i] - s.wheel_actual.delta[i];
            s.wheel_actual.delta[i] += err.clamp(-max_step, max_step);
        }
    }

    fn ramp_drive(&mut self, goal: [f64; WHEEL_COUNT]) {
        let max_step = self.cfg.drive_accel_max * self.cfg.control_dt;
        for (w, g) in self.state.wheel_actual.omega.iter_mut().zip(goal) {
            *w += (g - *w).clamp(-max_step, max_step);
        }
    }

    fn track(&mut self) {
        self.slew_steering();
        let s = &self.state;
        // Misaligned wheels wait until they point the right way.
        let goal: [f64; WHEEL_COUNT] = std::array::from_fn(|i| {
            let align = (s.wheel_targets.delta[i] - s.wheel_actual.delta[i]).cos().max(0.0);
            s.wheel_targets.omega[i] * align
        });
        self.ramp_drive(goal);
    }

    /// Returns true once the wheels are stopped and within tolerance.
    fn reposition(&mut self) -> bool {
        match self.state.phase {
            RepositionPhase::Braking => {
                self.ramp_drive([0.0; WHEEL_COUNT]);
                if self.state.wheel_actual.omega.iter().all(|w| *w == 0.0) {
                    self.state.phase = RepositionPhase::Steering;
                }
                false
            }
            RepositionPhase::Steering => {
                self.slew_steering();
                let s = &self.state;
                (0..WHEEL_COUNT).all(|i| {
                    (s.wheel_targets.delta[i] - s.wheel_actual.delta[i]).abs()
                        <= self.cfg.reposition_tolerance
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_arrangement;
    use std::sync::OnceLock;

    fn paper() -> &'static ConstraintArrangement {
        static ARR: OnceLock<ConstraintArrangement> = OnceLock::new();
        ARR.get_or_init(|| {
            build_arrangement(&ChassisGeometry::default(), &SteeringLimits::default()).unwrap()
        })
    }

    fn controller(shortest: bool) -> MotionController {
        MotionController::new(
            ControllerConfig {
                shortest_transition: shortest,
                ..ControllerConfig::default()
            },
            ChassisGeometry::default(),
            SteeringLimits::default(),
        )
        .unwrap()
    }

    fn run(c: &mut MotionController, v: BodyVelocity, steps: usize) -> Vec<ControllerEvent> {
        let mut all = Vec::new();
        for _ in 0..steps {
            all.extend(c.step(v, paper()).1);
        }
        all
    }

    #[test]
    fn forward_targets_are_straight() {
        let geo = ChassisGeometry::default();
        let t = compute_targets(
            BodyVelocity::new(1.0, 0.0, 0.0),
            &ControllerConfig::default(),
            &SteeringLimits::default(),
            &geo,
            &WheelCommand::ZERO,
        );
        assert_eq!(t.delta, [0.0; 4]);
        assert!(t.omega.iter().all(|w| (w - 12.5).abs() < 1e-12));
    }

    #[test]
    fn flip_in_targets() {
        // Lateral-left translation with a little backward motion: raw angle 170°.
        let a = 170f64.to_radians();
        let v = BodyVelocity::new(a.cos(), a.sin(), 0.0);
        let t = compute_targets(
            v,
            &ControllerConfig::default(),
            &SteeringLimits::default(),
            &ChassisGeometry::default(),
            &WheelCommand::ZERO,
        );
        for i in 0..4 {
            assert!((t.delta[i] - (-10f64).to_radians()).abs() < 1e-12);
            assert!(t.omega[i] < 0.0);
        }
    }

    #[test]
    fn shortest_transition_picks_nearer_orientation() {
        let a = 100f64.to_radians();
        let v = BodyVelocity::new(a.cos(), a.sin(), 0.0);
        let actual = WheelCommand {
            delta: [120f64.to_radians(); 4],
            omega: [0.0; 4],
        };
        let lim = SteeringLimits::default();
        let geo = ChassisGeometry::default();
        let on = ControllerConfig {
            shortest_transition: true,
            ..ControllerConfig::default()
        };
        let t = compute_targets(v, &on, &lim, &geo, &actual);
        assert!(t.delta.iter().all(|d| (d - a).abs() < 1e-12));
        // From the other side the flipped orientation (−80°) is closer.
        let actual = WheelCommand {
            delta: [(-90f64).to_radians(); 4],
            omega: [0.0; 4],
        };
        let t = compute_targets(v, &on, &lim, &geo, &actual);
        assert!(t.delta.iter().all(|d| (d - (-80f64).to_radians()).abs() < 1e-12));
        assert!(t.omega.iter().all(|w| *w < 0.0));
        let t = compute_targets(v, &ControllerConfig::default(), &lim, &geo, &actual);
        assert!(t.delta.iter().all(|d| (d - a).abs() < 1e-12));
    }

    #[test]
    fn zero_command_holds_steering() {
        let geo = ChassisGeometry::default();
        let actual = WheelCommand {
            delta: [0.3, -0.2, 1.0, 0.0],
            omega: [5.0; 4],
        };
        let t = compute_targets(
            BodyVelocity::ZERO,
            &ControllerConfig::default(),
            &SteeringLimits::default(),
            &geo,
            &actual,
        );
        assert_eq!(t.delta, actual.delta);
        assert_eq!(t.omega, [0.0; 4]);
    }

    #[test]
    fn constant_forward_never_stops() {
        let mut c = controller(false);
        let ev = run(&mut c, BodyVelocity::new(0.4, 0.05, 0.1), 500);
        assert_eq!(c.discontinuity_count(), 0);
        assert!(!ev.contains(&ControllerEvent::StopStarted));
        assert_eq!(c.state().mode, ControllerMode::Tracking);
    }

    #[test]
    fn reversal_triggers_exactly_one_stop() {
        let mut c = controller(false);
        run(&mut c, BodyVelocity::new(0.5, 0.0, 0.0), 100);
        let ev = run(&mut c, BodyVelocity::new(-0.5, 0.0, 0.0), 400);
        assert_eq!(c.discontinuity_count(), 1);
        assert_eq!(ev.iter().filter(|e| **e == ControllerEvent::StopStarted).count(), 1);
        assert!(ev.contains(&ControllerEvent::RepositionDone));
        assert_eq!(c.state().mode, ControllerMode::Tracking);
        assert!(c.wheels().omega.iter().all(|w| (w + 6.25).abs() < 1e-9));
    }

    #[test]
    fn sub_threshold_command_is_a_stop() {
        let mut c = controller(false);
        let a = 116f64.to_radians();
        run(&mut c, BodyVelocity::new(0.3 * a.cos(), 0.3 * a.sin(), 0.0), 200);
        let held = c.wheels().delta;
        // (−0.033, 0, 0) would point the wheels at 0° if driven.
        run(&mut c, BodyVelocity::new(-0.033, 0.0, 0.0), 100);
        assert_eq!(c.wheels().delta, held);
        assert_eq!(c.wheels().omega, [0.0; 4]);
        assert_eq!(c.discontinuity_count(), 0);
    }

    #[test]
    fn same_region_step_while_slewing_is_not_a_flip() {
        let mut c = controller(false);
        // Off rest toward 60°, then on to 120° before the wheels arrive.
        let dir = |deg: f64| {
            let a = deg.to_radians();
            BodyVelocity::new(0.3 * a.cos(), 0.3 * a.sin(), 0.0)
        };
        run(&mut c, dir(60.0), 20);
        assert!(c.wheels().delta[0] < 30f64.to_radians());
        run(&mut c, dir(120.0), 300);
        assert_eq!(c.discontinuity_count(), 0);
        assert!((c.wheels().delta[0] - 120f64.to_radians()).abs() < 1e-9);
    }

    #[test]
    fn stationary_start_is_free() {
        let mut c = controller(false);
        run(&mut c, BodyVelocity::new(-0.5, 0.3, 0.0), 300);
        assert_eq!(c.discontinuity_count(), 0);
    }

    #[test]
    fn large_wheel_step_triggers_with_shortest_transition() {
        let mut c = controller(true);
        run(&mut c, BodyVelocity::new(0.5, 0.0, 0.0), 100);
        assert_eq!(c.discontinuity_count(), 0);
        // Pure reversal needs no steering move, so this variant does not stop.
        run(&mut c, BodyVelocity::new(-0.5, 0.0, 0.0), 100);
        assert_eq!(c.discontinuity_count(), 0);
        // Sideways from straight ahead needs a 90° turn: not more than π/2.
        run(&mut c, BodyVelocity::new(0.0, 0.5, 0.0), 200);
        assert_eq!(c.discontinuity_count(), 0);
        // Wheels now at 90°. Heading −45° has no valid orientation within 90°
        // of that (its twin, 135°, is past the limit).
        let a = (-45f64).to_radians();
        run(&mut c, BodyVelocity::new(0.5 * a.cos(), 0.5 * a.sin(), 0.0), 10);
        assert_eq!(c.discontinuity_count(), 1);
    }

    #[test]
    fn event_line_format() {
        let w = WheelCommand {
            delta: [0.0, 0.1, -0.1, 1.0],
            omega: [1.0, 2.0, 3.0, 4.0],
        };
        assert_eq!(
            format_event_line(1.25, &ControllerEvent::StopStarted, &w),
            "t=1.250 stop_started delta=[0.0000,0.1000,-0.1000,1.0000] omega=[1.0000,2.0000,3.0000,4.0000]"
        );
        let e = ControllerEvent::RegionChanged {
            from: Region::Stationary,
            to: Region::Id(crate::geometry::RegionId(0)),
        };
        assert!(format_event_line(0.0, &e, &w).starts_with("t=0.000 region_changed"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn velocity() -> impl Strategy<Value = BodyVelocity> {
            (-0.5f64..0.5, -0.5f64..0.5, -1.0f64..1.0).prop_map(|(a, b, c)| BodyVelocity::new(a, b, c))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn controller_invariants(
                cmds in prop::collection::vec((velocity(), 1usize..60), 1..12),
                shortest in any::<bool>(),
            ) {
                let mut c = controller(shortest);
                let lim = SteeringLimits::default();
                let max_slew = c.config().steering_rate_max * c.config().control_dt + 1e-12;
                let tol = c.config().reposition_tolerance;
                let mut entries = 0u32;
                let mut prev = *c.wheels();
                let mut prev_mode = c.state().mode;
                let mut stop_origin: Option<[f64; 4]> = None;
                for (v, n) in cmds {
                    for _ in 0..n {
                        let (w, _) = c.step(v, paper());
                        let s = c.state();
                        for i in 0..4 {
                            prop_assert!((w.delta[i] - prev.delta[i]).abs() <= max_slew);
                            prop_assert!(lim.contains(w.delta[i]));
                        }
                        if prev_mode == ControllerMode::Tracking && s.mode == ControllerMode::StopAndReposition {
                            entries += 1;
                            stop_origin = Some(prev.delta);
                        }
                        if s.mode == ControllerMode::StopAndReposition {
                            let origin = stop_origin.unwrap_or(w.delta);
                            let moved = (0..4).any(|i| (w.delta[i] - origin[i]).abs() > tol);
                            if moved {
                                prop_assert!(w.omega.iter().all(|x| *x == 0.0));
                            }
                        }
                        prev = w;
                        prev_mode = s.mode;
                    }
                }
                prop_assert_eq!(entries, c.discontinuity_count());
            }
        }
    }
}
