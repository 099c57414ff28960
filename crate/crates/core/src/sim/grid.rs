//! Occupancy grids and the clearance field the obstacle critic reads.

use crate::error::{Error, Result};

const FAR: f64 = 1e20;

/// Binary occupancy grid. Cell `(col, row)` covers
/// `[origin + col·res, origin + (col+1)·res) × [origin + row·res, …)`; row 0 is the
/// lowest `y`. Anything outside the grid counts as occupied.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    resolution: f64,
    width: usize,
    height: usize,
    origin: [f64; 2],
    cells: Vec<bool>,
}

impl OccupancyGrid {
    pub fn new(resolution: f64, width: usize, height: usize, origin: [f64; 2]) -> Result<Self> {
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "grid resolution must be positive, got {resolution}"
            )));
        }
        Ok(Self {
            resolution,
            width,
            height,
            origin,
            cells: vec![false; width * height],
        })
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn is_occupied(&self, col: i64, row: i64) -> bool {
        if col < 0 || row < 0 || col >= self.width as i64 || row >= self.height as i64 {
            return true;
        }
        self.cells[row as usize * self.width + col as usize]
    }

    pub fn set(&mut self, col: usize, row: usize, occupied: bool) {
        self.cells[row * self.width + col] = occupied;
    }

    /// Marks every cell whose center lies inside the axis-aligned rectangle.
    pub fn fill_rect(&mut self, min: [f64; 2], max: [f64; 2], occupied: bool) {
        for row in 0..self.height {
            for col in 0..self.width {
                let c = self.cell_center(col, row);
                if c[0] >= min[0] && c[0] <= max[0] && c[1] >= min[1] && c[1] <= max[1] {
                    self.set(col, row, occupied);
                }
            }
        }
    }

    pub fn cell_of(&self, x: f64, y: f64) -> (i64, i64) {
        (
            ((x - self.origin[0]) / self.resolution).floor() as i64,
            ((y - self.origin[1]) / self.resolution).floor() as i64,
        )
    }

    pub fn cell_center(&self, col: usize, row: usize) -> [f64; 2] {
        [
            self.origin[0] + (col as f64 + 0.5) * self.resolution,
            self.origin[1] + (row as f64 + 0.5) * self.resolution,
        ]
    }

    pub fn occupied_at(&self, x: f64, y: f64) -> bool {
        let (c, r) = self.cell_of(x, y);
        self.is_occupied(c, r)
    }

    /// Copy with every cell within `radius` of an occupied cell center marked occupied.
    pub fn inflate(&self, radius: f64) -> OccupancyGrid {
        let dist = self.center_distances();
        let mut out = self.clone();
        for (cell, d) in out.cells.iter_mut().zip(&dist) {
            if *d <= radius {
                *cell = true;
            }
        }
        out
    }

    /// Euclidean distance (m) from each cell center to the nearest occupied
    /// cell center, with the ring just outside the grid counted as occupied.
    pub fn center_distances(&self) -> Vec<f64> {
        // Pad by one cell on every side so the boundary acts as a wall.
        let (w, h) = (self.width + 2, self.height + 2);
        let mut f = vec![FAR; w * h];
        for row in 0..h {
            for col in 0..w {
                let inside = row >= 1 && row <= self.height && col >= 1 && col <= self.width;
                if !inside || self.cells[(row - 1) * self.width + (col - 1)] {
                    f[row * w + col] = 0.0;
                }
            }
        }
        let sq = squared_edt_2d(&f, w, h);
        let mut out = vec![0.0; self.width * self.height];
        for row in 0..self.height {
            for col in 0..self.width {
                out[row * self.width + col] =
                    sq[(row + 1) * w + col + 1].sqrt() * self.resolution;
            }
        }
        out
    }

    /// Parses run-length-encoded rows (`<count><char>` runs, `.` free and `#`
    /// occupied, count defaults to 1). The first string is the top row.
    pub fn from_rle_rows(
        resolution: f64,
        origin: [f64; 2],
        width: usize,
        rows: &[String],
    ) -> Result<Self> {
        let height = rows.len();
        let mut g = Self::new(resolution, width, height, origin)?;
        for (k, text) in rows.iter().enumerate() {
            let row = height - 1 - k;
            let decoded = decode_rle(text)?;
            if decoded.len() != width {
                return Err(Error::Parse(format!(
                    "grid row {k} decodes to {} cells, expected {width}",
                    decoded.len()
                )));
            }
            for (col, occ) in decoded.into_iter().enumerate() {
                g.set(col, row, occ);
            }
        }
        Ok(g)
    }

    /// Inverse of [`OccupancyGrid::from_rle_rows`].
    pub fn to_rle_rows(&self) -> Vec<String> {
        (0..self.height)
            .rev()
            .map(|row| {
                let mut s = String::new();
                let mut col = 0;
                while col < self.width {
                    let occ = self.cells[row * self.width + col];
                    let mut run = 1;
                    while col + run < self.width && self.cells[row * self.width + col + run] == occ
                    {
                        run += 1;
                    }
                    if run > 1 {
                        s.push_str(&run.to_string());
                    }
                    s.push(if occ { '#' } else { '.' });
                    col += run;
                }
                s
            })
            .collect()
    }
}

fn decode_rle(text: &str) -> Result<Vec<bool>> {
    let mut out = Vec::new();
    let mut count = String::new();
    for ch in text.chars() {
        match ch {
            '0'..='9' => count.push(ch),
            '.' | '#' => {
                let n = if count.is_empty() {
                    1
                } else {
                    count
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(e.to_string()))?
                };
                out.extend(std::iter::repeat(ch == '#').take(n));
                count.clear();
            }
            c if c.is_whitespace() => {}
            c => return Err(Error::Parse(format!("unexpected character {c:?} in grid row"))),
        }
    }
    if !count.is_empty() {
        return Err(Error::Parse("grid row ends with a dangling count".into()));
    }
    Ok(out)
}

/// One-dimensional squared distance transform (lower envelope of parabolas).
fn squared_edt_1d(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut d = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
                continue;
            }
            if s <= z[k] {
                // k == 0: replace the first parabola.
                v[0] = q;
                z[0] = f64::NEG_INFINITY;
                z[1] = f64::INFINITY;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
            }
            break;
        }
    }
    k = 0;
    for (q, out) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        *out = dq * dq + f[p];
    }
    d
}

fn squared_edt_2d(f: &[f64], w: usize, h: usize) -> Vec<f64> {
    let mut tmp = vec![0.0; w * h];
    for col in 0..w {
        let column: Vec<f64> = (0..h).map(|row| f[row * w + col]).collect();
        for (row, val) in squared_edt_1d(&column).into_iter().enumerate() {
            tmp[row * w + col] = val;
        }
    }
    let mut out = vec![0.0; w * h];
    for row in 0..h {
        let line = &tmp[row * w..(row + 1) * w];
        out[row * w..(row + 1) * w].copy_from_slice(&squared_edt_1d(line));
    }
    out
}

/// Occupancy grid plus a precomputed clearance field.
#[derive(Debug, Clone)]
pub struct Costmap {
    grid: OccupancyGrid,
    center_distance: Vec<f64>,
}

impl Costmap {
    pub fn new(grid: OccupancyGrid) -> Self {
        let center_distance = grid.center_distances();
        Self {
            grid,
            center_distance,
        }
    }

    pub fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }

    /// Approximate distance (m) from a world point to the nearest occupied
    /// cell boundary: bilinear interpolation of center distances minus half a
    /// cell, floored at zero. Points outside the grid have zero clearance.
    pub fn clearance(&self, x: f64, y: f64) -> f64 {
        let g = &self.grid;
        let res = g.resolution;
        let fx = (x - g.origin[0]) / res - 0.5;
        let fy = (y - g.origin[1]) / res - 0.5;
        if !(fx > -0.5 && fy > -0.5 && fx < g.width as f64 - 0.5 && fy < g.height as f64 - 0.5) {
            return 0.0;
        }
        let c0 = fx.floor().clamp(0.0, (g.width.max(2) - 2) as f64) as usize;
        let r0 = fy.floor().clamp(0.0, (g.height.max(2) - 2) as f64) as usize;
        let c1 = (c0 + 1).min(g.width - 1);
        let r1 = (r0 + 1).min(g.height - 1);
        let tx = (fx - c0 as f64).clamp(0.0, 1.0);
        let ty = (fy - r0 as f64).clamp(0.0, 1.0);
        let at = |c: usize, r: usize| self.center_distance[r * g.width + c];
        let d = at(c0, r0) * (1.0 - tx) * (1.0 - ty)
            + at(c1, r0) * tx * (1.0 - ty)
            + at(c0, r1) * (1.0 - tx) * ty
            + at(c1, r1) * tx * ty;
        if g.occupied_at(x, y) {
            return 0.0;
        }
        (d - 0.5 * res).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_distances(g: &OccupancyGrid) -> Vec<f64> {
        let mut occ = Vec::new();
        for row in -1..=g.height() as i64 {
            for col in -1..=g.width() as i64 {
                if g.is_occupied(col, row) {
                    occ.push((col, row));
                }
            }
        }
        let mut out = Vec::new();
        for row in 0..g.height() as i64 {
            for col in 0..g.width() as i64 {
                let d = occ
                    .iter()
                    .map(|&(c, r)| (((c - col).pow(2) + (r - row).pow(2)) as f64).sqrt())
                    .fold(f64::INFINITY, f64::min);
                out.push(d * g.resolution());
            }
        }
        out
    }

    #[test]
    fn distance_transform_matches_brute_force() {
        let mut g = OccupancyGrid::new(0.1, 23, 17, [0.0, 0.0]).unwrap();
        for (c, r) in [(5, 5), (6, 5), (15, 12), (10, 2), (20, 16)] {
            g.set(c, r, true);
        }
        let fast = g.center_distances();
        let slow = brute_force_distances(&g);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn rle_round_trip() {
        let mut g = OccupancyGrid::new(0.5, 7, 3, [-1.0, 2.0]).unwrap();
        g.set(0, 0, true);
        g.set(3, 1, true);
        g.set(4, 1, true);
        g.set(6, 2, true);
        let rows = g.to_rle_rows();
        assert_eq!(rows, vec!["6.#", "3.2#2.", "#6."]);
        let back = OccupancyGrid::from_rle_rows(0.5, [-1.0, 2.0], 7, &rows).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn rle_rejects_bad_rows() {
        let rows = vec!["3.x".to_string()];
        assert!(OccupancyGrid::from_rle_rows(0.1, [0.0, 0.0], 3, &rows).is_err());
        let rows = vec!["4.".to_string()];
        assert!(OccupancyGrid::from_rle_rows(0.1, [0.0, 0.0], 3, &rows).is_err());
    }

    #[test]
    fn clearance_near_a_wall() {
        let mut g = OccupancyGrid::new(0.1, 40, 40, [0.0, 0.0]).unwrap();
        g.fill_rect([2.0, 0.0], [4.0, 4.0], true);
        let cm = Costmap::new(g);
        // Wall cells start at x = 2.0; the point (1.45, 2.05) is a cell center.
        let c = cm.clearance(1.45, 2.05);
        assert!((c - 0.55).abs() < 1e-9, "{c}");
        assert_eq!(cm.clearance(3.0, 2.0), 0.0);
        assert_eq!(cm.clearance(-1.0, 2.0), 0.0);
    }
}
