//! Signature → region lookup table, built by sampling velocity directions.
//!
//! Sampled directions give the set of realizable signatures (the cells of the
//! full-plane arrangement). Cells that share a face on the non-discontinuity
//! half of a plane are merged into one region; faces on the discontinuity half
//! are recorded as region boundaries.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{norm3, ConstraintArrangement, RegionId, Signature, SteeringRegime};
use crate::error::{Error, Result};
use crate::kinematics::{BodyVelocity, ChassisGeometry, SteeringLimits};

/// Cell and region counts of the reference chassis (0.2 m square, ±130°).
const REFERENCE_SIGNATURES: usize = 46;
const REFERENCE_REGIONS: usize = 12;
const FACE_STEP: f64 = 1e-7;
const CHUNK: usize = 16_384;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    /// Number of sampled directions on the unit sphere.
    pub samples: usize,
    pub seed: u64,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0x5eed_4d15,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionInfo {
    pub id: RegionId,
    /// Member signatures in ascending bit-string order.
    pub signatures: Vec<Signature>,
    /// Solid angle in steradians (estimated from sample counts in the general regime).
    pub solid_angle: f64,
    /// Rows whose discontinuity half-plane touches this region.
    pub bounding_rows: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RegionTable {
    lookup: Vec<Option<RegionId>>,
    regions: Vec<RegionInfo>,
}

impl Default for RegionTable {
    fn default() -> Self {
        Self {
            lookup: vec![None; 256],
            regions: Vec::new(),
        }
    }
}

impl RegionTable {
    pub fn regions(&self) -> &[RegionInfo] {
        &self.regions
    }

    pub fn region(&self, id: RegionId) -> &RegionInfo {
        &self.regions[id.0 as usize]
    }

    pub fn signature_count(&self) -> usize {
        self.lookup.iter().filter(|r| r.is_some()).count()
    }

    pub fn lookup(&self, sig: Signature) -> Option<RegionId> {
        self.lookup[sig.0 as usize]
    }

    /// Signatures that are not realizable (only produced by exact zeros on
    /// plane intersections) resolve to the nearest known signature by Hamming
    /// distance, lowest region id first.
    pub fn lookup_or_nearest(&self, sig: Signature) -> RegionId {
        if let Some(id) = self.lookup(sig) {
            return id;
        }
        let mut best: Option<(u32, RegionId)> = None;
        for (s, r) in self.lookup.iter().enumerate() {
            if let Some(r) = r {
                let d = (s as u8 ^ sig.0).count_ones();
                if best.map_or(true, |(bd, br)| (d, *r) < (bd, br)) {
                    best = Some((d, *r));
                }
            }
        }
        best.map(|b| b.1).unwrap_or(RegionId::FORWARD)
    }

    /// All realizable signatures with their region.
    pub fn entries(&self) -> Vec<(Signature, RegionId)> {
        self.lookup
            .iter()
            .enumerate()
            .filter_map(|(s, r)| r.map(|r| (Signature(s as u8), r)))
            .collect()
    }
}

/// Builds the lookup table for the arrangement's regime.
pub fn build_region_table(arr: &ConstraintArrangement, opts: &TableOptions) -> Result<RegionTable> {
    match arr.regime() {
        SteeringRegime::Unconstrained => Ok(unconstrained_table()),
        SteeringRegime::RightAngle => Ok(right_angle_table(arr)),
        SteeringRegime::General => sampled_table(arr, opts),
    }
}

fn unconstrained_table() -> RegionTable {
    let mut t = RegionTable::default();
    t.lookup[0] = Some(RegionId::FORWARD);
    t.regions.push(RegionInfo {
        id: RegionId::FORWARD,
        signatures: vec![Signature(0)],
        solid_angle: 4.0 * PI,
        bounding_rows: Vec::new(),
    });
    t
}

/// Quadrants of the two collapsed planes: both ahead → 0, both behind → 1,
/// only the left-wheel plane ahead → 2, only the right-wheel plane ahead → 3.
fn right_angle_table(arr: &ConstraintArrangement) -> RegionTable {
    let rows = arr.rows();
    let (a, b) = (rows[0].normal, rows[1].normal);
    let cos = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / (norm3(&a) * norm3(&b));
    let normal_angle = cos.clamp(-1.0, 1.0).acos();
    // A wedge with dihedral angle θ covers 2θ steradians.
    let layout = [
        (0b11u8, 0u8, 2.0 * (PI - normal_angle)),
        (0b00, 1, 2.0 * (PI - normal_angle)),
        (0b01, 2, 2.0 * normal_angle),
        (0b10, 3, 2.0 * normal_angle),
    ];
    let mut t = RegionTable::default();
    let mut regions: Vec<RegionInfo> = layout
        .iter()
        .map(|&(sig, id, solid)| {
            t.lookup[sig as usize] = Some(RegionId(id));
            RegionInfo {
                id: RegionId(id),
                signatures: vec![Signature(sig)],
                solid_angle: solid,
                bounding_rows: vec![0, 1],
            }
        })
        .collect();
    regions.sort_by_key(|r| r.id);
    t.regions = regions;
    t
}

struct FaceObservations {
    /// `merge[a]` has bit `b` set when cells `a`, `b` share a non-discontinuity face.
    merge: Vec<[u64; 4]>,
    /// Discontinuity faces as `(a, b, row)`.
    walls: Vec<(u8, u8, u8)>,
}

fn is_reference_configuration(arr: &ConstraintArrangement) -> bool {
    let reference = ChassisGeometry::default();
    let g = arr.geometry();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
    close(g.w_l, reference.w_l)
        && close(g.w_r, reference.w_r)
        && close(g.l_f, reference.l_f)
        && close(g.l_r, reference.l_r)
        && close(arr.limits().delta_max, SteeringLimits::default().delta_max)
        && close(arr.limits().delta_min, SteeringLimits::default().delta_min)
}

fn sampled_table(arr: &ConstraintArrangement, opts: &TableOptions) -> Result<RegionTable> {
    if opts.samples < 2 {
        return Err(Error::TableConstruction("need at least two samples".into()));
    }
    let samples = sample_directions(opts);
    let total = samples.len();

    let mut counts = vec![0usize; 256];
    for v in &samples {
        counts[arr.raw_signature(*v).0 as usize] += 1;
    }
    let known: Vec<bool> = counts.iter().map(|&c| c > 0).collect();
    let signature_count = known.iter().filter(|&&k| k).count();

    let faces = samples
        .par_chunks(CHUNK)
        .map(|chunk| observe_faces(arr, chunk, &known))
        .reduce(
            || FaceObservations {
                merge: vec![[0; 4]; 256],
                walls: Vec::new(),
            },
            |mut acc, other| {
                for (a, b) in acc.merge.iter_mut().zip(&other.merge) {
                    for k in 0..4 {
                        a[k] |= b[k];
                    }
                }
                acc.walls.extend(other.walls);
                acc.walls.sort_unstable();
                acc.walls.dedup();
                acc
            },
        );

    let mut uf = UnionFind::new(256);
    for a in 0..256 {
        for b in 0..256 {
            if faces.merge[a][b / 64] >> (b % 64) & 1 == 1 {
                uf.union(a, b);
            }
        }
    }

    // Group signatures by component root.
    let mut components: Vec<(usize, Vec<Signature>, usize)> = Vec::new();
    for s in 0..256 {
        if !known[s] {
            continue;
        }
        let root = uf.find(s);
        match components.iter_mut().find(|c| c.0 == root) {
            Some(c) => {
                c.1.push(Signature(s as u8));
                c.2 += counts[s];
            }
            None => components.push((root, vec![Signature(s as u8)], counts[s])),
        }
    }
    for c in &mut components {
        c.1.sort_by_key(|s| s.lexicographic_key());
    }

    // Other geometries have their own counts (coincident planes at 135° on a
    // square chassis, extra regions near 180°), so only the reference is pinned.
    if is_reference_configuration(arr)
        && (signature_count != REFERENCE_SIGNATURES || components.len() != REFERENCE_REGIONS)
    {
        return Err(Error::TableConstruction(format!(
            "expected {REFERENCE_SIGNATURES} signatures in {REFERENCE_REGIONS} regions, \
             sampled {signature_count} signatures in {} regions",
            components.len()
        )));
    }

    let root_of = |v: BodyVelocity| uf.find_immutable(arr.raw_signature(v).0 as usize);
    let forward_root = root_of(BodyVelocity::new(1.0, 0.0, 0.0));
    let backward_root = root_of(BodyVelocity::new(-1.0, 0.0, 0.0));
    if forward_root == backward_root {
        return Err(Error::TableConstruction(
            "forward and backward directions share a region".into(),
        ));
    }
    let largest = components.iter().map(|c| c.2).max().unwrap_or(0);
    let forward_count = components
        .iter()
        .find(|c| c.0 == forward_root)
        .map(|c| c.2)
        .unwrap_or(0);
    if forward_count != largest {
        return Err(Error::TableConstruction(
            "region containing (1, 0, 0) is not the largest".into(),
        ));
    }

    components.sort_by(|a, b| {
        let rank = |c: &(usize, Vec<Signature>, usize)| {
            if c.0 == forward_root {
                0
            } else if c.0 == backward_root {
                1
            } else {
                2
            }
        };
        rank(a)
            .cmp(&rank(b))
            .then(b.2.cmp(&a.2))
            .then(a.1[0].lexicographic_key().cmp(&b.1[0].lexicographic_key()))
    });

    let mut table = RegionTable::default();
    let mut region_of_root = vec![None; 256];
    for (idx, (root, sigs, count)) in components.iter().enumerate() {
        let id = RegionId(idx as u8);
        region_of_root[*root] = Some(id);
        for s in sigs {
            table.lookup[s.0 as usize] = Some(id);
        }
        table.regions.push(RegionInfo {
            id,
            signatures: sigs.clone(),
            solid_angle: 4.0 * PI * *count as f64 / total as f64,
            bounding_rows: Vec::new(),
        });
    }
    for &(a, b, row) in &faces.walls {
        for s in [a, b] {
            if let Some(id) = region_of_root[uf.find(s as usize)] {
                let rows = &mut table.regions[id.0 as usize].bounding_rows;
                if !rows.contains(&(row as usize)) {
                    rows.push(row as usize);
                }
            }
        }
    }
    for r in &mut table.regions {
        r.bounding_rows.sort_unstable();
    }
    Ok(table)
}

/// Uniform unit directions, each paired with its mirror image `(v_x, -v_y, -ψ̇)`
/// so that left/right symmetric chassis get exactly tied solid angles.
fn sample_directions(opts: &TableOptions) -> Vec<BodyVelocity> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pairs = opts.samples / 2;
    let mut out = Vec::with_capacity(pairs * 2);
    while out.len() < pairs * 2 {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        let n = (x * x + y * y + z * z).sqrt();
        if n < 1e-12 {
            continue;
        }
        let v = BodyVelocity::new(x / n, y / n, z / n);
        out.push(v);
        out.push(BodyVelocity::new(v.vx, -v.vy, -v.psi_dot));
    }
    out
}

fn observe_faces(
    arr: &ConstraintArrangement,
    chunk: &[BodyVelocity],
    known: &[bool],
) -> FaceObservations {
    let mut obs = FaceObservations {
        merge: vec![[0; 4]; 256],
        walls: Vec::new(),
    };
    for &v in chunk {
        for (j, row) in arr.rows().iter().enumerate() {
            let n = row.normal;
            let nn = norm3(&n);
            let s = row.eval(v) / (nn * nn);
            let p = BodyVelocity::new(v.vx - s * n[0], v.vy - s * n[1], v.psi_dot - s * n[2]);
            let side = row.side.map_or(-1.0, |sd| p.dot(&sd));
            if side.abs() < FACE_STEP {
                continue;
            }
            let step = FACE_STEP / nn;
            let ahead = arr.raw_signature(BodyVelocity::new(
                p.vx + step * n[0],
                p.vy + step * n[1],
                p.psi_dot + step * n[2],
            ));
            let behind = arr.raw_signature(BodyVelocity::new(
                p.vx - step * n[0],
                p.vy - step * n[1],
                p.psi_dot - step * n[2],
            ));
            if ahead.0 ^ behind.0 != 1 << j
                || !known[ahead.0 as usize]
                || !known[behind.0 as usize]
            {
                continue;
            }
            let (a, b) = (ahead.0 as usize, behind.0 as usize);
            if side > 0.0 {
                obs.merge[a][b / 64] |= 1 << (b % 64);
            } else {
                let (lo, hi) = (a.min(b) as u8, a.max(b) as u8);
                obs.walls.push((lo, hi, j as u8));
            }
        }
    }
    obs.walls.sort_unstable();
    obs.walls.dedup();
    obs
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn find_immutable(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so the structure is independent of merge order.
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}
