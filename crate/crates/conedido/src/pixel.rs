//! Pixel-grid sets in the weighted half-plane: brute-force measure and
//! perimeter oracles, and the two weighted Steiner symmetrizations.

use crate::density::Density;
use crate::error::{Error, Result};
use rand::Rng;
use std::io::{BufRead, Write};

/// A boolean occupancy grid over the rectangle
/// [x0, x0 + w·h) × [y0, y0 + ht·h) in the open half-plane {y > 0}.
#[derive(Debug, Clone)]
pub struct PixelSet {
    pub width: usize,
    pub height: usize,
    pub cell: f64,
    pub x0: f64,
    pub y0: f64,
    pub occupied: Vec<bool>,
}

impl PixelSet {
    pub fn new(width: usize, height: usize, cell: f64, x0: f64, y0: f64) -> Result<Self> {
        if width == 0 || height == 0 || !(cell > 0.0) {
            return Err(Error::Precondition("pixel grid must be non-empty with positive cell size".into()));
        }
        if y0 < 0.0 {
            return Err(Error::Precondition("pixel grid must lie in {y >= 0}".into()));
        }
        Ok(PixelSet {
            width,
            height,
            cell,
            x0,
            y0,
            occupied: vec![false; width * height],
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.occupied[j * self.width + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.occupied[j * self.width + i] = v;
    }

    /// Cell center of column i, row j.
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.x0 + (i as f64 + 0.5) * self.cell,
            self.y0 + (j as f64 + 0.5) * self.cell,
        )
    }

    pub fn count(&self) -> usize {
        self.occupied.iter().filter(|&&b| b).count()
    }

    /// Fills the cells whose centers satisfy the predicate.
    pub fn fill<F: Fn(f64, f64) -> bool>(&mut self, pred: F) {
        for j in 0..self.height {
            for i in 0..self.width {
                let (x, y) = self.center(i, j);
                if pred(x, y) {
                    self.set(i, j, true);
                }
            }
        }
    }

    /// Half-disk of radius `r` on a symmetric grid with the given cell size.
    pub fn half_disk(r: f64, cell: f64) -> Result<Self> {
        let half_cols = (r / cell).ceil() as usize + 1;
        let rows = (r / cell).ceil() as usize + 1;
        let mut g = PixelSet::new(2 * half_cols, rows, cell, -(half_cols as f64) * cell, 0.0)?;
        g.fill(|x, y| x * x + y * y < r * r);
        Ok(g)
    }

    /// Random union of axis-aligned rectangles and disks, for property suites.
    pub fn random_blob<R: Rng>(cell: f64, rng: &mut R) -> Result<Self> {
        let half_cols = (1.0 / cell).ceil() as usize;
        let rows = (1.0 / cell).ceil() as usize;
        let mut g = PixelSet::new(2 * half_cols, rows, cell, -(half_cols as f64) * cell, 0.0)?;
        let pieces = rng.gen_range(2..6);
        for _ in 0..pieces {
            if rng.gen_bool(0.5) {
                let cx = rng.gen_range(-0.6..0.6);
                let cy = rng.gen_range(0.1..0.8);
                let r = rng.gen_range(0.1..0.3);
                g.fill(|x, y| (x - cx).powi(2) + (y - cy).powi(2) < r * r);
            } else {
                let x0 = rng.gen_range(-0.8..0.4);
                let y0 = rng.gen_range(0.0..0.6);
                let w = rng.gen_range(0.1..0.5);
                let h = rng.gen_range(0.1..0.4);
                g.fill(|x, y| x >= x0 && x < x0 + w && y >= y0 && y < y0 + h);
            }
        }
        Ok(g)
    }

    /// Plain-text export: `width height h x0 y0`, then rows of 0/1
    /// (row 0 first).
    pub fn to_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {} {} {} {}", self.width, self.height, self.cell, self.x0, self.y0)?;
        for j in 0..self.height {
            let line: String = (0..self.width)
                .map(|i| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn from_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Input("empty pixel file".into()))?
            .map_err(|e| Error::Input(e.to_string()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(Error::Input("header must be: width height h x0 y0".into()));
        }
        let width: usize = parts[0].parse().map_err(|_| Error::Input("bad width".into()))?;
        let height: usize = parts[1].parse().map_err(|_| Error::Input("bad height".into()))?;
        let cell: f64 = parts[2].parse().map_err(|_| Error::Input("bad cell size".into()))?;
        let x0: f64 = parts[3].parse().map_err(|_| Error::Input("bad x0".into()))?;
        let y0: f64 = parts[4].parse().map_err(|_| Error::Input("bad y0".into()))?;
        let mut g = PixelSet::new(width, height, cell, x0, y0)?;
        for j in 0..height {
            let line = lines
                .next()
                .ok_or_else(|| Error::Input(format!("missing row {j}")))?
                .map_err(|e| Error::Input(e.to_string()))?;
            let row: Vec<char> = line.trim().chars().collect();
            if row.len() != width {
                return Err(Error::Input(format!("row {j} has {} cells, expected {width}", row.len())));
            }
            for (i, ch) in row.iter().enumerate() {
                match ch {
                    '1' => g.set(i, j, true),
                    '0' => {}
                    _ => return Err(Error::Input(format!("row {j}: cells must be 0 or 1"))),
                }
            }
        }
        Ok(g)
    }
}

/// Cell-sum μ-measure: Σ density(cell center)·h².
pub fn grid_measure(g: &PixelSet, d: &Density) -> f64 {
    let h2 = g.cell * g.cell;
    let mut acc = 0.0;
    for j in 0..g.height {
        for i in 0..g.width {
            if g.get(i, j) {
                let (x, y) = g.center(i, j);
                acc += d.weight(&[x, y]) * h2;
            }
        }
    }
    acc
}

/// Weighted boundary-edge sum: Σ over exposed cell edges of
/// density(edge midpoint)·h. Edges on {y = 0} are excluded (relative
/// perimeter in the open half-plane).
pub fn grid_perimeter(g: &PixelSet, d: &Density) -> f64 {
    let h = g.cell;
    let mut acc = 0.0;
    for j in 0..g.height {
        for i in 0..g.width {
            if !g.get(i, j) {
                continue;
            }
            let (x, y) = g.center(i, j);
            // left, right, bottom, top edges
            if i == 0 || !g.get(i - 1, j) {
                acc += d.weight(&[x - 0.5 * h, y]) * h;
            }
            if i + 1 == g.width || !g.get(i + 1, j) {
                acc += d.weight(&[x + 0.5 * h, y]) * h;
            }
            let bottom_y = y - 0.5 * h;
            if (j == 0 || !g.get(i, j - 1)) && bottom_y > 1e-12 {
                acc += d.weight(&[x, bottom_y]) * h;
            }
            if j + 1 == g.height || !g.get(i, j + 1) {
                acc += d.weight(&[x, y + 0.5 * h]) * h;
            }
        }
    }
    acc
}

/// Steiner symmetrization in the x-direction w.r.t. dμ_x = e^{cx²}dx:
/// each row becomes the cells nearest the y-axis carrying the same
/// 1-D weighted length.
pub fn steiner_x(g: &PixelSet, d: &Density) -> PixelSet {
    let mut out = PixelSet {
        occupied: vec![false; g.width * g.height],
        ..g.clone()
    };
    for j in 0..g.height {
        // row weights depend only on x (the y-factor is constant per row)
        let w = |i: usize| {
            let (x, _) = g.center(i, j);
            (d.c * x * x).exp()
        };
        let target: f64 = (0..g.width).filter(|&i| g.get(i, j)).map(w).sum();
        if target <= 0.0 {
            continue;
        }
        // order cells by |x| and fill until the cumulative weight is closest
        let mut order: Vec<usize> = (0..g.width).collect();
        order.sort_by(|&a, &b| {
            let xa = g.center(a, j).0.abs();
            let xb = g.center(b, j).0.abs();
            xa.partial_cmp(&xb).unwrap()
        });
        fill_to_target(&mut out, &order, j, target, w, true);
    }
    out
}

/// Steiner symmetrization in the y-direction w.r.t. dμ_y = e^{cy²}y^k dy:
/// each column becomes an interval anchored at the x-axis of equal
/// 1-D weighted length.
pub fn steiner_y(g: &PixelSet, d: &Density) -> PixelSet {
    let mut out = PixelSet {
        occupied: vec![false; g.width * g.height],
        ..g.clone()
    };
    for i in 0..g.width {
        let w = |j: usize| {
            let (_, y) = g.center(i, j);
            (d.c * y * y).exp() * y.powf(d.k)
        };
        let target: f64 = (0..g.height).filter(|&j| g.get(i, j)).map(w).sum();
        if target <= 0.0 {
            continue;
        }
        let order: Vec<usize> = (0..g.height).collect();
        fill_to_target(&mut out, &order, i, target, w, false);
    }
    out
}

fn fill_to_target<W: Fn(usize) -> f64>(
    out: &mut PixelSet,
    order: &[usize],
    fiber: usize,
    target: f64,
    weight: W,
    row_mode: bool,
) {
    let mut acc = 0.0;
    for &idx in order {
        let next = acc + weight(idx);
        // stop when adding the next cell overshoots more than it helps
        if next - target > target - acc {
            break;
        }
        acc = next;
        if row_mode {
            out.set(idx, fiber, true);
        } else {
            out.set(fiber, idx, true);
        }
    }
}
