//! Grid geometry on the unit square.
//!
//! All fields and measures live on the cell-center lattice of an `N x N`
//! mesh of `[0,1]^2`: grid point `(i, j)` sits at `((i+1/2)h, (j+1/2)h)`
//! with `h = 1/N`. Mesh cell `(i, j)` is the half-open box
//! `[ih, (i+1)h) x [jh, (j+1)h)`, so every cell's center is a grid point.

use serde::{Deserialize, Serialize};

pub type Point = (f64, f64);

pub fn dist(u: Point, v: Point) -> f64 {
    ((u.0 - v.0).powi(2) + (u.1 - v.1).powi(2)).sqrt()
}

/// Cell-center lattice of an `N x N` mesh over the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "grid size must be a power of two");
        Grid { n }
    }

    #[inline]
    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    /// Coordinates of grid point (cell center) `(i, j)`.
    #[inline]
    pub fn point(&self, i: usize, j: usize) -> Point {
        let h = self.h();
        ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    /// Index of the mesh cell containing `p` (half-open cells, lower-left
    /// closed); coordinates clamp to the boundary cells so that points on
    /// the upper/right edge of the square still resolve.
    #[inline]
    pub fn cell_of(&self, p: Point) -> (usize, usize) {
        let n = self.n as f64;
        let i = (p.0 * n).floor().clamp(0.0, n - 1.0) as usize;
        let j = (p.1 * n).floor().clamp(0.0, n - 1.0) as usize;
        (i, j)
    }

    /// Grid point nearest to `p` in the cell sense: the center of the cell
    /// containing `p`. This is the lookup rule for field values at
    /// arbitrary points.
    #[inline]
    pub fn nearest(&self, p: Point) -> usize {
        let (i, j) = self.cell_of(p);
        self.idx(i, j)
    }

    pub fn contains(&self, p: Point) -> bool {
        (0.0..=1.0).contains(&p.0) && (0.0..=1.0).contains(&p.1)
    }
}

/// A dyadic box of side `2^-depth` in exact integer coordinates:
/// `[ix, ix+1] x [iy, iy+1]` in units of `2^-depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicBox {
    pub depth: u8,
    pub ix: u32,
    pub iy: u32,
}

impl DyadicBox {
    pub fn root() -> Self {
        DyadicBox { depth: 0, ix: 0, iy: 0 }
    }

    #[inline]
    pub fn side(&self) -> f64 {
        (0.5f64).powi(self.depth as i32)
    }

    #[inline]
    pub fn center(&self) -> Point {
        let s = self.side();
        ((self.ix as f64 + 0.5) * s, (self.iy as f64 + 0.5) * s)
    }

    pub fn children(&self) -> [DyadicBox; 4] {
        let d = self.depth + 1;
        let (x, y) = (2 * self.ix, 2 * self.iy);
        [
            DyadicBox { depth: d, ix: x, iy: y },
            DyadicBox { depth: d, ix: x + 1, iy: y },
            DyadicBox { depth: d, ix: x, iy: y + 1 },
            DyadicBox { depth: d, ix: x + 1, iy: y + 1 },
        ]
    }

    /// Grid point used to evaluate the field for this box: dyadic centers
    /// are corners of the cell-center lattice, so we sample at the grid
    /// point offset by `(+h/2, +h/2)` from the geometric center. Requires
    /// `2^depth * n_cells_per_side >= 2` i.e. `depth <= log2 N - 1`.
    pub fn center_grid_idx(&self, grid: Grid) -> usize {
        let scale = grid.n >> self.depth as usize;
        debug_assert!(scale >= 1, "box deeper than the grid");
        let i = self.ix as usize * scale + scale / 2;
        let j = self.iy as usize * scale + scale / 2;
        grid.idx(i.min(grid.n - 1), j.min(grid.n - 1))
    }

    /// Half-open membership matching the lower-left-closed cell rule.
    pub fn contains_halfopen(&self, p: Point) -> bool {
        let s = self.side();
        let x0 = self.ix as f64 * s;
        let y0 = self.iy as f64 * s;
        let hi_x = if self.ix == (1u32 << self.depth) - 1 { p.0 <= x0 + s } else { p.0 < x0 + s };
        let hi_y = if self.iy == (1u32 << self.depth) - 1 { p.1 <= y0 + s } else { p.1 < y0 + s };
        p.0 >= x0 && p.1 >= y0 && hi_x && hi_y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_center_roundtrip() {
        let g = Grid::new(16);
        for i in 0..16 {
            for j in 0..16 {
                let p = g.point(i, j);
                assert_eq!(g.cell_of(p), (i, j));
            }
        }
    }

    #[test]
    fn cell_tie_goes_right() {
        let g = Grid::new(8);
        // 0.25 sits exactly on the boundary between cells 1 and 2.
        assert_eq!(g.cell_of((0.25, 0.5)).0, 2);
        assert_eq!(g.cell_of((1.0, 1.0)), (7, 7));
        assert_eq!(g.cell_of((0.0, 0.0)), (0, 0));
    }

    #[test]
    fn dyadic_center_alignment() {
        let g = Grid::new(64);
        let b = DyadicBox { depth: 3, ix: 5, iy: 2 };
        let c = b.center();
        let idx = b.center_grid_idx(g);
        let p = g.point(idx % 64, idx / 64);
        // sampled point is the geometric center shifted by (h/2, h/2)
        assert!((p.0 - c.0 - 0.5 * g.h()).abs() < 1e-15);
        assert!((p.1 - c.1 - 0.5 * g.h()).abs() < 1e-15);
    }
}
