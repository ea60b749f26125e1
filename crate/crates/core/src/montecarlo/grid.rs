//! Flat uniform grid for exact nearest-point queries over one realization.
//!
//! Points are binned into square cells over the window's bounding square;
//! a query expands outward ring by ring and stops once no farther ring
//! can beat the best distance found. With cell size near the mean
//! point spacing the expected work per query is a handful of distance
//! evaluations, and the result is exact regardless of cell size.

use super::Point;

#[derive(Default)]
pub(crate) struct PointGrid {
    /// Cells per side.
    n: usize,
    /// Cell edge length.
    cell: f64,
    /// Left/bottom edge of the binned square (the square is centered on
    /// the origin).
    origin: f64,
    /// CSR layout: `items[starts[c]..starts[c+1]]` are the point indices
    /// in cell `c`, in ascending index order.
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl PointGrid {
    fn axis_cell(&self, v: f64) -> usize {
        // Clamp: queries and points may sit exactly on the +edge.
        (((v - self.origin) / self.cell) as usize).min(self.n - 1)
    }

    /// Rebuilds the grid over `pts`, all within the square of half-extent
    /// `half`, aiming for cells of edge `target_cell`. Buffers are reused.
    pub(crate) fn build(&mut self, pts: &[Point], half: f64, target_cell: f64) {
        debug_assert!(!pts.is_empty());
        self.n = ((2.0 * half / target_cell).ceil() as usize).clamp(1, 4096);
        self.cell = 2.0 * half / self.n as f64;
        self.origin = -half;

        let ncells = self.n * self.n;
        self.starts.clear();
        self.starts.resize(ncells + 1, 0);
        for p in pts {
            let c = self.axis_cell(p.y) * self.n + self.axis_cell(p.x);
            self.starts[c + 1] += 1;
        }
        for c in 0..ncells {
            self.starts[c + 1] += self.starts[c];
        }
        self.items.clear();
        self.items.resize(pts.len(), 0);
        let mut cursor = self.starts.clone();
        for (i, p) in pts.iter().enumerate() {
            let c = self.axis_cell(p.y) * self.n + self.axis_cell(p.x);
            self.items[cursor[c] as usize] = i as u32;
            cursor[c] += 1;
        }
    }

    /// Index and squared distance of the point nearest to `(qx, qy)`.
    /// Exact ties (possible only through floating-point coincidence) go to
    /// the smaller index, making the result scan-order independent.
    pub(crate) fn nearest(&self, pts: &[Point], qx: f64, qy: f64) -> (u32, f64) {
        let cx = self.axis_cell(qx) as isize;
        let cy = self.axis_cell(qy) as isize;
        let n = self.n as isize;
        let mut best = u32::MAX;
        let mut best_d2 = f64::INFINITY;

        let scan_cell = |gx: isize, gy: isize, best: &mut u32, best_d2: &mut f64| {
            if gx < 0 || gy < 0 || gx >= n || gy >= n {
                return;
            }
            let c = (gy as usize) * self.n + gx as usize;
            let (lo, hi) = (self.starts[c] as usize, self.starts[c + 1] as usize);
            for &i in &self.items[lo..hi] {
                let p = pts[i as usize];
                let (dx, dy) = (p.x - qx, p.y - qy);
                let d2 = dx * dx + dy * dy;
                if d2 < *best_d2 || (d2 == *best_d2 && i < *best) {
                    *best_d2 = d2;
                    *best = i;
                }
            }
        };

        for ring in 0.. {
            if ring == 0 {
                scan_cell(cx, cy, &mut best, &mut best_d2);
            } else {
                for gx in (cx - ring)..=(cx + ring) {
                    scan_cell(gx, cy - ring, &mut best, &mut best_d2);
                    scan_cell(gx, cy + ring, &mut best, &mut best_d2);
                }
                for gy in (cy - ring + 1)..=(cy + ring - 1) {
                    scan_cell(cx - ring, gy, &mut best, &mut best_d2);
                    scan_cell(cx + ring, gy, &mut best, &mut best_d2);
                }
            }
            // Any point in a ring at Chebyshev cell-distance k is at least
            // (k-1) whole cells away, so once the best distance is within
            // `ring` cells no later ring can improve on it.
            if best != u32::MAX {
                let reach = ring as f64 * self.cell;
                if reach * reach >= best_d2 {
                    break;
                }
            }
            if ring > 2 * n {
                break; // every cell scanned (grid exhausted)
            }
        }
        debug_assert!(best != u32::MAX);
        (best, best_d2)
    }
}
