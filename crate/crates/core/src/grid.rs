//! Uniform-grid index answering "nearest among the points inserted so far".
//!
//! All points and their insertion order are known up front, so the grid is
//! laid out once in compressed buckets: each cell lists its points in
//! insertion order. A query for the point of rank `r` scans each visited
//! bucket only up to the first entry of rank `>= r`, which is exactly the set
//! of points inserted before it. Cells are visited in Chebyshev shells of
//! growing radius around the query cell.

use crate::geometry::{dist2, PointSet};

const MIN_SIDE: f64 = 1e-6;

pub(crate) struct PrefixGrid {
    dim: usize,
    side: f64,
    lo: Vec<f64>,
    shape: Vec<usize>,
    strides: Vec<usize>,
    /// `bucket_start[c]..bucket_start[c + 1]` indexes the entries of cell `c`.
    bucket_start: Vec<u32>,
    entry_rank: Vec<u32>,
    entry_point: Vec<u32>,
    entry_coords: Vec<f64>,
    rank_cell: Vec<Vec<usize>>,
    // scratch for shell enumeration
    cursor: Vec<isize>,
    from: Vec<isize>,
    to: Vec<isize>,
}

/// Best candidate so far: squared distance, then lowest original index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Neighbour {
    pub point: usize,
    pub dist2: f64,
}

#[inline]
fn improves(d2: f64, point: usize, best: &Option<Neighbour>) -> bool {
    match best {
        None => true,
        Some(b) => d2 < b.dist2 || (d2 == b.dist2 && point < b.point),
    }
}

impl PrefixGrid {
    /// `order[r]` is the index (into `points`) of the point inserted at rank `r`.
    pub(crate) fn new(points: &PointSet, order: &[usize]) -> Self {
        let dim = points.dim();
        let n = order.len();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &i in order {
            for (k, &c) in points.get(i).iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        if n == 0 {
            lo.iter_mut().for_each(|v| *v = 0.0);
            hi.iter_mut().for_each(|v| *v = 0.0);
        }
        let extents: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| h - l).collect();
        let spread: Vec<f64> = extents.iter().copied().filter(|&e| e > 0.0).collect();
        let mut side = if spread.is_empty() {
            1.0
        } else {
            let volume: f64 = spread.iter().product();
            (volume / n.max(1) as f64).powf(1.0 / spread.len() as f64)
        };
        side = side.max(MIN_SIDE);
        let cell_budget = 4 * n + 16;
        let shape = loop {
            let shape: Vec<usize> = extents.iter().map(|&e| ((e / side).ceil() as usize).max(1)).collect();
            let total = shape.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
            match total {
                Some(t) if t <= cell_budget => break shape,
                _ => side *= 1.25,
            }
        };
        let mut strides = vec![1usize; dim];
        for k in 1..dim {
            strides[k] = strides[k - 1] * shape[k - 1];
        }
        let cells: usize = shape.iter().product();

        let mut grid = PrefixGrid {
            dim,
            side,
            lo,
            shape,
            strides,
            bucket_start: Vec::new(),
            entry_rank: Vec::new(),
            entry_point: Vec::new(),
            entry_coords: Vec::new(),
            rank_cell: Vec::new(),
            cursor: vec![0; dim],
            from: vec![0; dim],
            to: vec![0; dim],
        };

        let cell_of_rank: Vec<usize> = order
            .iter()
            .map(|&i| grid.flat_cell(&grid.cell_coords(points.get(i))))
            .collect();
        let mut counts = vec![0u32; cells + 1];
        for &c in &cell_of_rank {
            counts[c + 1] += 1;
        }
        for c in 0..cells {
            counts[c + 1] += counts[c];
        }
        let mut fill = counts.clone();
        grid.entry_rank = vec![0; n];
        grid.entry_point = vec![0; n];
        grid.entry_coords = vec![0.0; n * dim];
        // ranks visited in increasing order keep each bucket sorted by rank
        for (r, &c) in cell_of_rank.iter().enumerate() {
            let slot = fill[c] as usize;
            fill[c] += 1;
            grid.entry_rank[slot] = r as u32;
            grid.entry_point[slot] = order[r] as u32;
            grid.entry_coords[slot * dim..(slot + 1) * dim].copy_from_slice(points.get(order[r]));
        }
        grid.bucket_start = counts;
        grid.rank_cell = cell_of_rank.iter().map(|&c| grid.unflatten(c)).collect();
        grid
    }

    fn cell_coords(&self, p: &[f64]) -> Vec<usize> {
        p.iter()
            .enumerate()
            .map(|(k, &c)| {
                let raw = ((c - self.lo[k]) / self.side).floor();
                if raw <= 0.0 {
                    0
                } else {
                    (raw as usize).min(self.shape[k] - 1)
                }
            })
            .collect()
    }

    fn flat_cell(&self, cell: &[usize]) -> usize {
        cell.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut cell = vec![0; self.dim];
        for k in (0..self.dim).rev() {
            cell[k] = flat / self.strides[k];
            flat %= self.strides[k];
        }
        cell
    }

    fn scan_bucket(&self, flat: usize, rank: u32, query: &[f64], best: &mut Option<Neighbour>) {
        let (start, end) = (self.bucket_start[flat] as usize, self.bucket_start[flat + 1] as usize);
        let d = self.dim;
        for slot in start..end {
            if self.entry_rank[slot] >= rank {
                break;
            }
            let d2 = dist2(query, &self.entry_coords[slot * d..(slot + 1) * d]);
            let point = self.entry_point[slot] as usize;
            if improves(d2, point, best) {
                *best = Some(Neighbour { point, dist2: d2 });
            }
        }
    }

    /// Visits every cell at Chebyshev distance exactly `layer` from `centre`.
    fn scan_shell(&mut self, centre: &[usize], layer: usize, rank: u32, query: &[f64], best: &mut Option<Neighbour>) {
        let d = self.dim;
        let l = layer as isize;
        if layer == 0 {
            let flat = self.flat_cell(centre);
            self.scan_bucket(flat, rank, query, best);
            return;
        }
        for axis in 0..d {
            for sign in [-1isize, 1] {
                let fixed = centre[axis] as isize + sign * l;
                if fixed < 0 || fixed >= self.shape[axis] as isize {
                    continue;
                }
                let mut empty = false;
                for k in 0..d {
                    let c = centre[k] as isize;
                    let reach = if k < axis { l - 1 } else { l };
                    let (f, t) = if k == axis {
                        (fixed, fixed)
                    } else {
                        ((c - reach).max(0), (c + reach).min(self.shape[k] as isize - 1))
                    };
                    if f > t {
                        empty = true;
                    }
                    self.from[k] = f;
                    self.to[k] = t;
                }
                if empty {
                    continue;
                }
                self.cursor.copy_from_slice(&self.from);
                'odometer: loop {
                    let flat: usize = self
                        .cursor
                        .iter()
                        .zip(&self.strides)
                        .map(|(&c, &s)| c as usize * s)
                        .sum();
                    self.scan_bucket(flat, rank, query, best);
                    for k in 0..d {
                        if self.cursor[k] < self.to[k] {
                            self.cursor[k] += 1;
                            continue 'odometer;
                        }
                        self.cursor[k] = self.from[k];
                    }
                    break;
                }
            }
        }
    }

    /// Nearest point among ranks `< rank` to the point of rank `rank`.
    pub(crate) fn nearest_before(&mut self, rank: usize, query: &[f64]) -> Option<Neighbour> {
        if rank == 0 {
            return None;
        }
        let centre = self.rank_cell[rank].clone();
        let max_layer = centre
            .iter()
            .zip(&self.shape)
            .map(|(&c, &s)| c.max(s - 1 - c))
            .max()
            .unwrap_or(0);
        let mut best = None;
        for layer in 0..=max_layer {
            self.scan_shell(&centre, layer, rank as u32, query, &mut best);
            if let Some(b) = best {
                // unvisited cells lie at least `layer * side` away along some axis
                let reach = layer as f64 * self.side * (1.0 - 1e-9);
                if b.dist2 < reach * reach {
                    break;
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_binomial_cloud;

    fn brute(points: &PointSet, order: &[usize], rank: usize) -> Option<Neighbour> {
        let q = points.get(order[rank]);
        let mut best = None;
        for &j in &order[..rank] {
            let d2 = dist2(q, points.get(j));
            if improves(d2, j, &best) {
                best = Some(Neighbour { point: j, dist2: d2 });
            }
        }
        best
    }

    #[test]
    fn matches_brute_force_in_several_dimensions() {
        for dim in 1..=4 {
            let cloud = sample_binomial_cloud(300, dim, 40 + dim as u64).unwrap();
            let order: Vec<usize> = (0..300).rev().collect();
            let mut grid = PrefixGrid::new(&cloud.points, &order);
            for r in 0..300 {
                let got = grid.nearest_before(r, cloud.points.get(order[r]));
                assert_eq!(got, brute(&cloud.points, &order, r), "dim {dim} rank {r}");
            }
        }
    }

    #[test]
    fn lattice_ties_go_to_lowest_index() {
        let mut rows = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                rows.push([i as f64 * 0.25, j as f64 * 0.25]);
            }
        }
        let points = PointSet::from_rows(2, &rows).unwrap();
        let order: Vec<usize> = (0..rows.len()).collect();
        let mut grid = PrefixGrid::new(&points, &order);
        for r in 0..rows.len() {
            assert_eq!(grid.nearest_before(r, points.get(r)), brute(&points, &order, r));
        }
    }

    #[test]
    fn degenerate_extents() {
        let points = PointSet::from_rows(2, &[[0.5, 0.1], [0.5, 0.7], [0.5, 0.3]]).unwrap();
        let order = vec![0, 1, 2];
        let mut grid = PrefixGrid::new(&points, &order);
        assert_eq!(grid.nearest_before(2, points.get(2)).unwrap().point, 0);
        let same = PointSet::from_rows(3, &[[0.2, 0.2, 0.2], [0.2, 0.2, 0.2]]).unwrap();
        let mut grid = PrefixGrid::new(&same, &[0, 1]);
        assert_eq!(
            grid.nearest_before(1, same.get(1)),
            Some(Neighbour { point: 0, dist2: 0.0 })
        );
    }
}
