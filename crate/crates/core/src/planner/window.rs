use super::{PlannerConfig, PlanningContext};
use crate::kinematics::{normalize_angle, BodyVelocity, Pose2};

fn axis_values(current: f64, half_width: f64, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut vals: Vec<f64> = if n <= 1 {
        vec![current]
    } else {
        (0..n)
            .map(|k| current - half_width + 2.0 * half_width * k as f64 / (n - 1) as f64)
            .collect()
    };
    // Odd counts put the current value exactly at the center; make it exact.
    if n % 2 == 1 {
        vals[n / 2] = current;
    } else {
        vals.push(current);
    }
    for v in &mut vals {
        *v = v.clamp(lo, hi);
        if v.abs() < 1e-12 {
            *v = 0.0;
        }
    }
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    vals
}

/// Grid of velocities reachable within one planning interval, clamped to the
/// absolute bounds. Ordered `v_x`-major, then `v_y`, then `ψ̇`; the zero velocity
/// is appended when the grid does not already contain it.
pub fn sample_window(cfg: &PlannerConfig, ctx: &PlanningContext<'_>) -> Vec<BodyVelocity> {
    let w = &cfg.window;
    let cur = ctx.current_velocity.to_array();
    let axes: [Vec<f64>; 3] = std::array::from_fn(|k| {
        axis_values(
            cur[k],
            w.accel[k] * w.plan_dt,
            cfg.samples[k],
            w.min_velocity[k],
            w.max_velocity[k],
        )
    });
    let mut out = Vec::with_capacity(axes.iter().map(Vec::len).product::<usize>() + 1);
    for &vx in &axes[0] {
        for &vy in &axes[1] {
            for &psi_dot in &axes[2] {
                out.push(BodyVelocity::new(vx, vy, psi_dot));
            }
        }
    }
    if !out.contains(&BodyVelocity::ZERO) {
        out.push(BodyVelocity::ZERO);
    }
    out
}

/// Constant-velocity Euler rollout in the world frame.
pub fn rollout(v: BodyVelocity, start: Pose2, cfg: &PlannerConfig) -> Vec<Pose2> {
    let n = cfg.rollout_len();
    let dt = cfg.sim_dt;
    let mut poses = Vec::with_capacity(n);
    let mut p = start;
    poses.push(p);
    for _ in 1..n {
        let (s, c) = p.heading.sin_cos();
        p.x += (v.vx * c - v.vy * s) * dt;
        p.y += (v.vx * s + v.vy * c) * dt;
        p.heading = normalize_angle(p.heading + v.psi_dot * dt);
        poses.push(p);
    }
    poses
}
