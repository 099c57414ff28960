use std::f64::consts::PI;
use std::io::Write;

use super::{ConstraintArrangement, Region};
use crate::kinematics::BodyVelocity;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSample {
    pub v: BodyVelocity,
    pub region: Region,
}

/// Regular `n × n` grid over `v_x, v_y ∈ [-extent, extent]` at a fixed yaw rate.
pub fn region_map_slice(
    arr: &ConstraintArrangement,
    psi_dot: f64,
    extent: f64,
    n: usize,
) -> Vec<RegionSample> {
    let coord = |k: usize| {
        if n <= 1 {
            0.0
        } else {
            -extent + 2.0 * extent * k as f64 / (n - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(n * n);
    for iy in 0..n {
        for ix in 0..n {
            let v = BodyVelocity::new(coord(ix), coord(iy), psi_dot);
            out.push(RegionSample {
                v,
                region: arr.region_of(v),
            });
        }
    }
    out
}

/// Latitude/longitude tessellation of the unit sphere (cell centers), with
/// `ψ̇` as the polar axis.
pub fn region_map_sphere(arr: &ConstraintArrangement, n_lat: usize, n_lon: usize) -> Vec<RegionSample> {
    let mut out = Vec::with_capacity(n_lat * n_lon);
    for i in 0..n_lat {
        let lat = -PI / 2.0 + PI * (i as f64 + 0.5) / n_lat as f64;
        for k in 0..n_lon {
            let lon = -PI + 2.0 * PI * (k as f64 + 0.5) / n_lon as f64;
            let v = BodyVelocity::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin());
            out.push(RegionSample {
                v,
                region: arr.region_of(v),
            });
        }
    }
    out
}

/// Writes `vx,vy,psi_dot,region` rows; stationary samples are written as `-1`.
pub fn write_region_csv<W: Write>(mut w: W, samples: &[RegionSample]) -> std::io::Result<()> {
    writeln!(w, "vx,vy,psi_dot,region")?;
    for s in samples {
        writeln!(
            w,
            "{:.6},{:.6},{:.6},{}",
            s.v.vx,
            s.v.vy,
            s.v.psi_dot,
            s.region.as_i32()
        )?;
    }
    Ok(())
}
