//! Discontinuity planes of the steering constraints in `(v_x, v_y, ψ̇)` space.
//!
//! Each wheel contributes two origin-crossing planes, one where its steering
//! angle reaches `δ_max` and one for `δ_min`. Only the half of each plane where
//! the wheel's contact velocity points backwards (`v_x + w_i ψ̇ < 0`) is an actual
//! discontinuity; the other half is crossed without a wheel flip. The resulting
//! partition of velocity space into regions is identified through 8-bit sign
//! signatures and a lookup table built once per arrangement.

mod export;
mod table;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{BodyVelocity, ChassisGeometry, SteeringLimits, WHEEL_COUNT};

pub use export::{region_map_slice, region_map_sphere, write_region_csv, RegionSample};
pub use table::{build_region_table, RegionInfo, RegionTable, TableOptions};

/// Velocities with a smaller Euclidean norm are classified as stationary.
pub const STATIONARY_THRESHOLD: f64 = 0.05;

const RIGHT_ANGLE_TOL: f64 = 1e-9;
const TAN_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SteeringRegime {
    /// Full swerve: every wheel angle is reachable, no discontinuities.
    Unconstrained,
    /// `δ_max = -δ_min = π/2`: eight constraints collapse into two planes.
    RightAngle,
    /// `δ_max = -δ_min ∈ (π/2, π)`: eight planes, twelve regions.
    General,
}

impl SteeringRegime {
    pub fn classify(lim: &SteeringLimits) -> Result<Self> {
        if lim.is_unconstrained() {
            return Ok(SteeringRegime::Unconstrained);
        }
        if (lim.delta_max + lim.delta_min).abs() > RIGHT_ANGLE_TOL {
            return Err(Error::AsymmetricLimits {
                min: lim.delta_min,
                max: lim.delta_max,
            });
        }
        let m = lim.delta_max;
        if (m - FRAC_PI_2).abs() < RIGHT_ANGLE_TOL {
            Ok(SteeringRegime::RightAngle)
        } else if m > FRAC_PI_2 + TAN_GUARD && m < PI {
            Ok(SteeringRegime::General)
        } else if m > FRAC_PI_2 && m < PI {
            Err(Error::InvalidLimits(format!(
                "delta_max {m} rad is too close to pi/2 to evaluate the plane slopes"
            )))
        } else {
            Err(Error::InvalidLimits(format!(
                "delta_max {m} rad is below pi/2; the wheel flip cannot reach every velocity"
            )))
        }
    }
}

/// Region signature: bit `j` is set iff the velocity is on or ahead of plane `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature(pub u8);

impl Signature {
    pub fn bit(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    /// Ordering key that compares signatures as bit strings `s_1 s_2 … s_8`.
    pub fn lexicographic_key(self) -> u8 {
        self.0.reverse_bits()
    }

    pub fn to_bit_string(self, len: usize) -> String {
        (0..len).map(|j| if self.bit(j) { '1' } else { '0' }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionId(pub u8);

impl RegionId {
    /// Generally-forward region, the largest one.
    pub const FORWARD: RegionId = RegionId(0);
    /// Generally-backward region, behind all planes.
    pub const BACKWARD: RegionId = RegionId(1);
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Stationary,
    Id(RegionId),
}

impl Region {
    pub fn id(self) -> Option<RegionId> {
        match self {
            Region::Stationary => None,
            Region::Id(id) => Some(id),
        }
    }

    pub fn is_stationary(self) -> bool {
        matches!(self, Region::Stationary)
    }

    /// Numeric form used in CSV output; stationary is `-1`.
    pub fn as_i32(self) -> i32 {
        match self {
            Region::Stationary => -1,
            Region::Id(id) => id.0 as i32,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Stationary => f.write_str("stationary"),
            Region::Id(id) => write!(f, "{id}"),
        }
    }
}

/// One discontinuity plane `normal · v = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintRow {
    pub normal: [f64; 3],
    /// Wheels whose steering limit produces this plane.
    pub wheels: &'static [usize],
    /// Linear functional of the auxiliary half-space; the plane is a
    /// discontinuity only where `side · v < 0`. `None` means the whole plane.
    pub side: Option<[f64; 3]>,
}

impl ConstraintRow {
    pub fn eval(&self, v: BodyVelocity) -> f64 {
        v.dot(&self.normal)
    }

    pub fn norm(&self) -> f64 {
        let n = self.normal;
        (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
    }

    /// Unsigned normal distance from `v` to the full plane.
    pub fn distance(&self, v: BodyVelocity) -> f64 {
        self.eval(v).abs() / self.norm()
    }

    pub fn is_discontinuity_at(&self, v: BodyVelocity) -> bool {
        match self.side {
            None => true,
            Some(s) => v.dot(&s) < 0.0,
        }
    }
}

static WHEEL_ROWS: [[usize; 1]; WHEEL_COUNT] = [[0], [1], [2], [3]];
static LEFT_PAIR: [usize; 2] = [0, 1];
static RIGHT_PAIR: [usize; 2] = [2, 3];

/// The B-matrix rows for the general regime, ordered so that rows `i` and
/// `i + 4` belong to wheel `i` (`δ_max` and `δ_min` respectively).
pub fn general_rows(geo: &ChassisGeometry, lim: &SteeringLimits) -> [ConstraintRow; 8] {
    let t_max = lim.delta_max.tan();
    let t_min = lim.delta_min.tan();
    let w = geo.lateral_terms();
    let l = geo.longitudinal_terms();
    std::array::from_fn(|j| {
        let i = j % WHEEL_COUNT;
        // b_i = [tan δ, -1, w_i tan δ - l_i]; δ_max rows are negated.
        let normal = if j < WHEEL_COUNT {
            [-t_max, 1.0, l[i] - w[i] * t_max]
        } else {
            [t_min, -1.0, w[i] * t_min - l[i]]
        };
        ConstraintRow {
            normal,
            wheels: &WHEEL_ROWS[i],
            side: Some([1.0, 0.0, w[i]]),
        }
    })
}

/// The two collapsed planes of the right-angle regime.
pub fn right_angle_rows(geo: &ChassisGeometry) -> [ConstraintRow; 2] {
    [
        ConstraintRow {
            normal: [1.0, 0.0, -geo.w_l],
            wheels: &LEFT_PAIR,
            side: None,
        },
        ConstraintRow {
            normal: [1.0, 0.0, geo.w_r],
            wheels: &RIGHT_PAIR,
            side: None,
        },
    ]
}

#[derive(Debug, Clone)]
pub struct ConstraintArrangement {
    geometry: ChassisGeometry,
    limits: SteeringLimits,
    regime: SteeringRegime,
    rows: Vec<ConstraintRow>,
    table: RegionTable,
    stationary_threshold: f64,
}

/// Builds the arrangement and its region table with the default sampling options.
pub fn build_arrangement(
    geo: &ChassisGeometry,
    lim: &SteeringLimits,
) -> Result<ConstraintArrangement> {
    ConstraintArrangement::with_options(geo, lim, &TableOptions::default())
}

impl ConstraintArrangement {
    pub fn with_options(
        geo: &ChassisGeometry,
        lim: &SteeringLimits,
        opts: &TableOptions,
    ) -> Result<Self> {
        geo.validate()?;
        let regime = SteeringRegime::classify(lim)?;
        let rows = match regime {
            SteeringRegime::Unconstrained => Vec::new(),
            SteeringRegime::RightAngle => right_angle_rows(geo).to_vec(),
            SteeringRegime::General => general_rows(geo, lim).to_vec(),
        };
        let mut arr = Self {
            geometry: *geo,
            limits: *lim,
            regime,
            rows,
            table: RegionTable::default(),
            stationary_threshold: STATIONARY_THRESHOLD,
        };
        arr.table = build_region_table(&arr, opts)?;
        Ok(arr)
    }

    pub fn geometry(&self) -> &ChassisGeometry {
        &self.geometry
    }

    pub fn limits(&self) -> &SteeringLimits {
        &self.limits
    }

    pub fn regime(&self) -> SteeringRegime {
        self.regime
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }

    /// The constraint matrix, one row per plane.
    pub fn b_matrix(&self) -> Vec<[f64; 3]> {
        self.rows.iter().map(|r| r.normal).collect()
    }

    pub fn table(&self) -> &RegionTable {
        &self.table
    }

    pub fn region_count(&self) -> usize {
        self.table.regions().len()
    }

    pub fn signature_count(&self) -> usize {
        self.table.signature_count()
    }

    pub fn stationary_threshold(&self) -> f64 {
        self.stationary_threshold
    }

    pub fn set_stationary_threshold(&mut self, threshold: f64) {
        self.stationary_threshold = threshold;
    }

    pub fn is_stationary(&self, v: BodyVelocity) -> bool {
        v.norm() < self.stationary_threshold
    }

    /// Sign pattern of `Bv` with `sign(0) = +1`, ignoring the stationary check.
    pub fn raw_signature(&self, v: BodyVelocity) -> Signature {
        let mut bits = 0u8;
        for (j, row) in self.rows.iter().enumerate() {
            if row.eval(v) >= 0.0 {
                bits |= 1 << j;
            }
        }
        Signature(bits)
    }

    /// `None` for stationary velocities.
    pub fn region_signature(&self, v: BodyVelocity) -> Option<Signature> {
        if self.is_stationary(v) {
            None
        } else {
            Some(self.raw_signature(v))
        }
    }

    pub fn region_of(&self, v: BodyVelocity) -> Region {
        match self.region_signature(v) {
            None => Region::Stationary,
            Some(sig) => Region::Id(self.table.lookup_or_nearest(sig)),
        }
    }

    /// Distance from `v` to the nearest discontinuity plane bounding its region.
    ///
    /// Region 0 is non-convex; when `v` is ahead of both auxiliary planes the
    /// distance is the two-hop metric (to the nearest auxiliary plane, then from
    /// that projection to the nearest constraint plane). Returns `None` for
    /// stationary velocities and `+∞` when there are no planes.
    pub fn distance_to_nearest_plane(&self, v: BodyVelocity) -> Option<f64> {
        let region = self.region_of(v).id()?;
        match self.regime {
            SteeringRegime::Unconstrained => Some(f64::INFINITY),
            SteeringRegime::RightAngle => Some(self.min_row_distance(v, 0..self.rows.len())),
            SteeringRegime::General => {
                let bounding = &self.table.region(region).bounding_rows;
                if region != RegionId::FORWARD {
                    return Some(self.min_row_distance(v, bounding.iter().copied()));
                }
                let aux = self.auxiliary_planes();
                let d_aux = aux.map(|n| v.dot(&n) / norm3(&n));
                if d_aux[0] < 0.0 || d_aux[1] < 0.0 {
                    return Some(self.min_row_distance(v, bounding.iter().copied()));
                }
                let k = if d_aux[1] < d_aux[0] { 1 } else { 0 };
                let n = aux[k];
                let s = d_aux[k] / norm3(&n);
                let p = BodyVelocity::new(v.vx - s * n[0], v.vy - s * n[1], v.psi_dot - s * n[2]);
                Some(d_aux[k] + self.min_row_distance(p, bounding.iter().copied()))
            }
        }
    }

    /// Normals of `v_x - w_l ψ̇ = 0` and `v_x + w_r ψ̇ = 0`.
    pub fn auxiliary_planes(&self) -> [[f64; 3]; 2] {
        [
            [1.0, 0.0, -self.geometry.w_l],
            [1.0, 0.0, self.geometry.w_r],
        ]
    }

    fn min_row_distance(&self, v: BodyVelocity, rows: impl Iterator<Item = usize>) -> f64 {
        rows.map(|j| self.rows[j].distance(v))
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn norm3(n: &[f64; 3]) -> f64 {
    (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::sync::OnceLock;

    fn paper_arrangement() -> &'static ConstraintArrangement {
        static ARR: OnceLock<ConstraintArrangement> = OnceLock::new();
        ARR.get_or_init(|| {
            build_arrangement(&ChassisGeometry::default(), &SteeringLimits::default()).unwrap()
        })
    }

    #[test]
    fn regime_classification() {
        let c = |d: f64| SteeringRegime::classify(&SteeringLimits::symmetric_deg(d).unwrap());
        assert_eq!(c(181.0).unwrap(), SteeringRegime::Unconstrained);
        assert_eq!(c(180.0).unwrap(), SteeringRegime::Unconstrained);
        assert_eq!(c(90.0).unwrap(), SteeringRegime::RightAngle);
        assert_eq!(c(130.0).unwrap(), SteeringRegime::General);
        assert!(c(60.0).is_err());
        let asym = SteeringLimits::new(-2.0, 2.2).unwrap();
        assert!(matches!(
            SteeringRegime::classify(&asym),
            Err(Error::AsymmetricLimits { .. })
        ));
        let near = SteeringLimits::new(-(FRAC_PI_2 + 1e-7), FRAC_PI_2 + 1e-7).unwrap();
        assert!(SteeringRegime::classify(&near).is_err());
    }

    #[test]
    fn first_row_matches_scalar_entries() {
        let arr = paper_arrangement();
        let t = 130f64.to_radians().tan();
        let b = arr.b_matrix();
        assert_eq!(b.len(), 8);
        assert_abs_diff_eq!(b[0][0], -t, epsilon = 1e-15);
        assert_abs_diff_eq!(b[0][0], 1.19175359259421, epsilon = 1e-12);
        assert_eq!(b[0][1], 1.0);
        assert_abs_diff_eq!(b[0][2], 0.2 + 0.2 * t, epsilon = 1e-15);
        assert_abs_diff_eq!(b[0][2], 0.2 - 0.238350718518842, epsilon = 1e-12);
    }

    #[test]
    fn rows_match_matrix_layout() {
        // Spot-check every entry against the printed form of the matrix.
        let geo = ChassisGeometry::new(0.21, 0.17, 0.33, 0.26, 0.08).unwrap();
        let lim = SteeringLimits::symmetric_deg(120.0).unwrap();
        let (tx, tn) = (lim.delta_max.tan(), lim.delta_min.tan());
        let (wl, wr, lf, lr) = (geo.w_l, geo.w_r, geo.l_f, geo.l_r);
        let expected = [
            [-tx, 1.0, lf + wl * tx],
            [-tx, 1.0, -(lr - wl * tx)],
            [-tx, 1.0, -(lr + wr * tx)],
            [-tx, 1.0, lf - wr * tx],
            [tn, -1.0, -(lf + wl * tn)],
            [tn, -1.0, lr - wl * tn],
            [tn, -1.0, lr + wr * tn],
            [tn, -1.0, -(lf - wr * tn)],
        ];
        for (row, exp) in general_rows(&geo, &lim).iter().zip(expected) {
            for k in 0..3 {
                assert_abs_diff_eq!(row.normal[k], exp[k], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn right_angle_planes() {
        let geo = ChassisGeometry::default();
        let arr = build_arrangement(&geo, &SteeringLimits::symmetric_deg(90.0).unwrap()).unwrap();
        assert_eq!(arr.regime(), SteeringRegime::RightAngle);
        assert_eq!(arr.b_matrix(), vec![[1.0, 0.0, -0.2], [1.0, 0.0, 0.2]]);
        assert_eq!(arr.region_count(), 4);
        assert_eq!(
            arr.region_of(BodyVelocity::new(1.0, 0.0, 0.0)),
            Region::Id(RegionId::FORWARD)
        );
        assert_eq!(
            arr.region_of(BodyVelocity::new(-1.0, 0.0, 0.0)),
            Region::Id(RegionId::BACKWARD)
        );
    }

    #[test]
    fn unconstrained_has_no_planes() {
        let arr = build_arrangement(
            &ChassisGeometry::default(),
            &SteeringLimits::symmetric_deg(181.0).unwrap(),
        )
        .unwrap();
        assert_eq!(arr.regime(), SteeringRegime::Unconstrained);
        assert!(arr.rows().is_empty());
        assert_eq!(arr.region_count(), 1);
        assert_eq!(
            arr.region_of(BodyVelocity::new(-0.3, 0.7, -2.0)),
            Region::Id(RegionId::FORWARD)
        );
    }

    #[test]
    fn signatures_of_axis_directions() {
        let arr = paper_arrangement();
        assert_eq!(
            arr.region_signature(BodyVelocity::new(1.0, 0.0, 0.0)),
            Some(Signature(0xff))
        );
        assert_eq!(
            arr.region_signature(BodyVelocity::new(-1.0, 0.0, 0.0)),
            Some(Signature(0x00))
        );
        assert_eq!(arr.region_signature(BodyVelocity::ZERO), None);
        assert_eq!(arr.region_of(BodyVelocity::ZERO), Region::Stationary);
    }

    #[test]
    fn region_lookup_examples() {
        let arr = paper_arrangement();
        assert_eq!(arr.signature_count(), 46);
        assert_eq!(arr.region_count(), 12);
        assert_eq!(
            arr.region_of(BodyVelocity::new(1.0, 0.1, 0.1)),
            Region::Id(RegionId(0))
        );
        assert_eq!(
            arr.region_of(BodyVelocity::new(-1.0, 0.0, 0.05)),
            Region::Id(RegionId(1))
        );
    }

    #[test]
    fn backward_region_is_bounded_by_one_plane_per_wheel() {
        let arr = paper_arrangement();
        let rows = &arr.table().region(RegionId::BACKWARD).bounding_rows;
        assert_eq!(rows.len(), 4);
        let mut wheels: Vec<usize> = rows.iter().map(|&j| j % 4).collect();
        wheels.sort();
        assert_eq!(wheels, vec![0, 1, 2, 3]);
    }

    #[test]
    fn distance_on_a_plane_patch_is_zero() {
        let arr = paper_arrangement();
        // Pure translation at exactly δ_max: all wheels sit on their δ_max plane,
        // on the discontinuity side.
        let d = arr.limits().delta_max;
        let v = BodyVelocity::new(0.5 * d.cos(), 0.5 * d.sin(), 0.0);
        let dist = arr.distance_to_nearest_plane(v).unwrap();
        assert!(dist < 1e-9, "{dist}");
    }

    #[test]
    fn backward_distance_matches_scalar_rows() {
        let arr = paper_arrangement();
        let v = BodyVelocity::new(-1.0, 0.0, 0.0);
        // Scalar evaluation of every row at (-1, 0, 0): |B[j,0]| / ‖B[j]‖.
        let t = 130f64.to_radians().tan();
        let rows = &arr.table().region(RegionId::BACKWARD).bounding_rows;
        let expected = rows
            .iter()
            .map(|&j| {
                let c = arr.b_matrix()[j][2];
                t.abs() / (t * t + 1.0 + c * c).sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        assert_abs_diff_eq!(
            arr.distance_to_nearest_plane(v).unwrap(),
            expected,
            epsilon = 1e-12
        );
    }

    #[test]
    fn scale_invariance() {
        let arr = paper_arrangement();
        for v in [
            BodyVelocity::new(0.3, -0.7, 0.2),
            BodyVelocity::new(-0.2, 0.9, 1.4),
            BodyVelocity::new(-0.6, -0.1, -0.8),
        ] {
            let r = arr.region_of(v);
            for k in [0.1, 2.0, 17.0] {
                assert_eq!(arr.region_of(v * k), r);
            }
        }
    }
}
