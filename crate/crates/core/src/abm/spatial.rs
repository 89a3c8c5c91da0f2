//! Uniform-bin spatial index for fixed-radius neighbor queries.

/// Points bucketed into square cells, stored in CSR form (cell → point indices).
#[derive(Debug, Clone)]
pub struct BinnedIndex {
    points: Vec<(f64, f64)>,
    origin: (f64, f64),
    cell: f64,
    nx: usize,
    ny: usize,
    cell_start: Vec<usize>,
    entries: Vec<usize>,
}

impl BinnedIndex {
    /// `cell_size` must be positive and finite; queries with any radius are
    /// answered exactly, but a radius close to the cell size is the sweet spot.
    pub fn build(points: &[(f64, f64)], cell_size: f64) -> Self {
        assert!(
            cell_size > 0.0 && cell_size.is_finite(),
            "cell size must be positive"
        );
        let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
        let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            min_x = min_x.min(x);
            min_y = min_y.min(y);
            max_x = max_x.max(x);
            max_y = max_y.max(y);
        }
        if points.is_empty() {
            (min_x, min_y, max_x, max_y) = (0.0, 0.0, 0.0, 0.0);
        }
        let nx = ((max_x - min_x) / cell_size).floor() as usize + 1;
        let ny = ((max_y - min_y) / cell_size).floor() as usize + 1;
        let mut index = Self {
            points: points.to_vec(),
            origin: (min_x, min_y),
            cell: cell_size,
            nx,
            ny,
            cell_start: vec![0; nx * ny + 1],
            entries: vec![0; points.len()],
        };

        let keys: Vec<usize> = points.iter().map(|&p| index.cell_of(p)).collect();
        for &k in &keys {
            index.cell_start[k + 1] += 1;
        }
        for c in 0..nx * ny {
            index.cell_start[c + 1] += index.cell_start[c];
        }
        let mut fill = index.cell_start.clone();
        for (i, &k) in keys.iter().enumerate() {
            index.entries[fill[k]] = i;
            fill[k] += 1;
        }
        index
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn axis_cell(&self, v: f64, origin: f64, n: usize) -> isize {
        let c = ((v - origin) / self.cell).floor();
        c.clamp(-1.0, n as f64) as isize
    }

    fn cell_of(&self, (x, y): (f64, f64)) -> usize {
        let cx = self
            .axis_cell(x, self.origin.0, self.nx)
            .clamp(0, self.nx as isize - 1) as usize;
        let cy = self
            .axis_cell(y, self.origin.1, self.ny)
            .clamp(0, self.ny as isize - 1) as usize;
        cy * self.nx + cx
    }

    /// Indices (into the build slice) of points with `dx² + dy² <= radius²`, ascending.
    pub fn within(&self, (qx, qy): (f64, f64), radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if self.points.is_empty() || radius < 0.0 {
            return out;
        }
        // One extra cell of slack absorbs rounding in the floor computations.
        let x_lo = (self.axis_cell(qx - radius, self.origin.0, self.nx) - 1).max(0);
        let x_hi =
            (self.axis_cell(qx + radius, self.origin.0, self.nx) + 1).min(self.nx as isize - 1);
        let y_lo = (self.axis_cell(qy - radius, self.origin.1, self.ny) - 1).max(0);
        let y_hi =
            (self.axis_cell(qy + radius, self.origin.1, self.ny) + 1).min(self.ny as isize - 1);
        let r2 = radius * radius;
        for cy in y_lo..=y_hi {
            for cx in x_lo..=x_hi {
                let c = cy as usize * self.nx + cx as usize;
                for &i in &self.entries[self.cell_start[c]..self.cell_start[c + 1]] {
                    let (px, py) = self.points[i];
                    let (dx, dy) = (px - qx, py - qy);
                    if dx * dx + dy * dy <= r2 {
                        out.push(i);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(points: &[(f64, f64)], q: (f64, f64), r: f64) -> Vec<usize> {
        (0..points.len())
            .filter(|&i| {
                let (dx, dy) = (points[i].0 - q.0, points[i].1 - q.1);
                dx * dx + dy * dy <= r * r
            })
            .collect()
    }

    #[test]
    fn empty_index() {
        let idx = BinnedIndex::build(&[], 1.0);
        assert!(idx.within((0.0, 0.0), 5.0).is_empty());
    }

    #[test]
    fn boundary_is_inclusive() {
        let pts = [(0.0, 0.0), (3.0, 0.0), (3.0, 4.0)];
        let idx = BinnedIndex::build(&pts, 3.0);
        assert_eq!(idx.within((0.0, 0.0), 3.0), vec![0, 1]);
        assert_eq!(idx.within((0.0, 0.0), 5.0), vec![0, 1, 2]);
    }

    #[test]
    fn query_outside_the_cloud() {
        let pts = [(0.0, 0.0), (1.0, 1.0)];
        let idx = BinnedIndex::build(&pts, 0.5);
        assert_eq!(idx.within((-10.0, -10.0), 1.0), Vec::<usize>::new());
        assert_eq!(idx.within((2.0, 2.0), 1.5), vec![1]);
    }

    #[test]
    fn random_worlds_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = rng.random_range(1..300);
            let pts: Vec<_> = (0..n)
                .map(|_| (rng.random_range(-13.0..13.0), rng.random_range(-12.0..12.0)))
                .collect();
            let r = rng.random_range(0.2..6.0);
            let cell = if rng.random_bool(0.5) {
                r
            } else {
                rng.random_range(0.3..5.0)
            };
            let idx = BinnedIndex::build(&pts, cell);
            for q in pts.iter().take(40) {
                assert_eq!(idx.within(*q, r), brute(&pts, *q, r));
            }
        }
    }
}
