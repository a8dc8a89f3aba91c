use crate::maps::PlanePoint;

/// Boolean occupancy of a rectangle divided into `nx * ny` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
    cells: Vec<bool>,
}

impl OccupancyGrid {
    /// Grid over the bounding box of `points`, enlarged by `pad` cells on
    /// every side. A flat box (all points on a line) gets a tiny thickness.
    pub fn covering(points: &[PlanePoint], n: usize, pad: usize) -> Self {
        let (mut xl, mut xh, mut yl, mut yh) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            xl = xl.min(p.x);
            xh = xh.max(p.x);
            yl = yl.min(p.y);
            yh = yh.max(p.y);
        }
        let scale = 1.0 + xl.abs().max(xh.abs()).max(yl.abs()).max(yh.abs());
        let min_span = 1e-9 * scale;
        let widen = |lo: f64, hi: f64| {
            if hi - lo < min_span {
                let c = 0.5 * (lo + hi);
                (c - min_span / 2.0, c + min_span / 2.0)
            } else {
                (lo, hi)
            }
        };
        let (xl, xh) = widen(xl, xh);
        let (yl, yh) = widen(yl, yh);
        let inner = n.saturating_sub(2 * pad).max(1) as f64;
        let dx = (xh - xl) / inner;
        let dy = (yh - yl) / inner;
        let mut g = Self {
            x0: xl - pad as f64 * dx,
            y0: yl - pad as f64 * dy,
            dx,
            dy,
            nx: n,
            ny: n,
            cells: vec![false; n * n],
        };
        for p in points {
            g.mark(*p);
        }
        g
    }

    pub fn cell_of(&self, p: PlanePoint) -> Option<(usize, usize)> {
        let i = ((p.x - self.x0) / self.dx).floor();
        let j = ((p.y - self.y0) / self.dy).floor();
        // The top edge of the box belongs to the last cell.
        let i = if i == self.nx as f64 { i - 1.0 } else { i };
        let j = if j == self.ny as f64 { j - 1.0 } else { j };
        if i >= 0.0 && j >= 0.0 && (i as usize) < self.nx && (j as usize) < self.ny {
            Some((i as usize, j as usize))
        } else {
            None
        }
    }

    pub fn mark(&mut self, p: PlanePoint) {
        if let Some((i, j)) = self.cell_of(p) {
            self.cells[j * self.nx + i] = true;
        }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[j * self.nx + i]
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Marks every cell within Chebyshev distance `r` of an occupied cell.
    pub fn dilate(&self, r: usize) -> Self {
        if r == 0 {
            return self.clone();
        }
        let (nx, ny) = (self.nx, self.ny);
        // Separable max filter: rows then columns.
        let mut tmp = vec![false; nx * ny];
        for j in 0..ny {
            let row = &self.cells[j * nx..(j + 1) * nx];
            let mut last: Option<usize> = None;
            let mut next_on = vec![usize::MAX; nx];
            let mut nxt = usize::MAX;
            for i in (0..nx).rev() {
                if row[i] {
                    nxt = i;
                }
                next_on[i] = nxt;
            }
            for i in 0..nx {
                if row[i] {
                    last = Some(i);
                }
                let near_left = last.is_some_and(|l| i - l <= r);
                let near_right = next_on[i] != usize::MAX && next_on[i] - i <= r;
                tmp[j * nx + i] = near_left || near_right;
            }
        }
        let mut out = vec![false; nx * ny];
        for i in 0..nx {
            let mut last: Option<usize> = None;
            let mut next_on = vec![usize::MAX; ny];
            let mut nxt = usize::MAX;
            for j in (0..ny).rev() {
                if tmp[j * nx + i] {
                    nxt = j;
                }
                next_on[j] = nxt;
            }
            for j in 0..ny {
                if tmp[j * nx + i] {
                    last = Some(j);
                }
                let near_low = last.is_some_and(|l| j - l <= r);
                let near_high = next_on[j] != usize::MAX && next_on[j] - j <= r;
                out[j * nx + i] = near_low || near_high;
            }
        }
        Self {
            cells: out,
            ..self.clone()
        }
    }

    /// Number of 8-connected components of occupied cells.
    pub fn components(&self) -> usize {
        let (nx, ny) = (self.nx, self.ny);
        let mut seen = vec![false; nx * ny];
        let mut stack = Vec::new();
        let mut count = 0;
        for start in 0..nx * ny {
            if !self.cells[start] || seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(k) = stack.pop() {
                let (i, j) = ((k % nx) as isize, (k / nx) as isize);
                for dj in -1..=1 {
                    for di in -1..=1 {
                        let (a, b) = (i + di, j + dj);
                        if a < 0 || b < 0 || a >= nx as isize || b >= ny as isize {
                            continue;
                        }
                        let kk = b as usize * nx + a as usize;
                        if self.cells[kk] && !seen[kk] {
                            seen[kk] = true;
                            stack.push(kk);
                        }
                    }
                }
            }
        }
        count
    }

    pub fn contains(&self, p: PlanePoint) -> bool {
        self.cell_of(p).is_some_and(|(i, j)| self.get(i, j))
    }
}
