//! Cartesian grid for the periodic channel and ghost-padded node arrays.

use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// Node grid on `[0, L) x [-H, 0]`, periodic in x.
///
/// Columns `i = 0..n` are the distinct periodic nodes (node `n` aliases node 0).
/// Rows `j = 0..=n` run from the bottom wall (`j = 0`, `y = -H`) to the
/// interface (`j = n`, `y = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub n: usize,
    pub hx: f64,
    pub hy: f64,
    pub length: f64,
    pub depth: f64,
}

impl Grid2D {
    pub const MIN_CELLS: usize = 4;
    pub const GHOST: usize = 2;

    pub fn new(params: &PhysicalParams, n: usize) -> Result<Self> {
        if n < Self::MIN_CELLS {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least {} cells per direction, got {n}",
                Self::MIN_CELLS
            )));
        }
        Ok(Grid2D {
            n,
            hx: params.length / n as f64,
            hy: params.depth / n as f64,
            length: params.length,
            depth: params.depth,
        })
    }

    /// Number of distinct columns.
    pub fn nx(&self) -> usize {
        self.n
    }

    /// Row index of the interface.
    pub fn top(&self) -> isize {
        self.n as isize
    }

    pub fn x(&self, i: isize) -> f64 {
        i as f64 * self.hx
    }

    pub fn y(&self, j: isize) -> f64 {
        if j == self.n as isize {
            0.0
        } else {
            -self.depth + j as f64 * self.hy
        }
    }

    /// Grid spacing used for `h`-scaled terms.
    pub fn h(&self) -> f64 {
        self.hx.max(self.hy)
    }

    pub fn wrap(&self, i: isize) -> usize {
        i.rem_euclid(self.n as isize) as usize
    }
}

/// Node values on a [`Grid2D`] including two ghost rows above and below.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    nx: usize,
    rows: usize,
    data: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: &Grid2D) -> Self {
        let rows = grid.n + 1 + 2 * Grid2D::GHOST;
        Field {
            nx: grid.nx(),
            rows,
            data: vec![0.0; grid.nx() * rows],
        }
    }

    /// Samples `f(x, y)` at every node including ghosts.
    pub fn from_fn(grid: &Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut field = Field::zeros(grid);
        for j in field.row_range() {
            for i in 0..field.nx {
                field.set(i as isize, j, f(grid.x(i as isize), grid.y(j)));
            }
        }
        field
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    /// All row indices, ghosts included.
    pub fn row_range(&self) -> std::ops::RangeInclusive<isize> {
        let g = Grid2D::GHOST as isize;
        -g..=(self.rows as isize - 1 - g)
    }

    fn offset(&self, i: isize, j: isize) -> usize {
        let r = (j + Grid2D::GHOST as isize) as usize;
        debug_assert!(r < self.rows, "row {j} out of range");
        r * self.nx + i.rem_euclid(self.nx as isize) as usize
    }

    #[inline]
    pub fn at(&self, i: isize, j: isize) -> f64 {
        self.data[self.offset(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, v: f64) {
        let o = self.offset(i, j);
        self.data[o] = v;
    }

    pub fn row(&self, j: isize) -> &[f64] {
        let o = self.offset(0, j);
        &self.data[o..o + self.nx]
    }

    pub fn row_mut(&mut self, j: isize) -> &mut [f64] {
        let o = self.offset(0, j);
        &mut self.data[o..o + self.nx]
    }

    pub fn set_row(&mut self, j: isize, values: &[f64]) {
        self.row_mut(j).copy_from_slice(values);
    }

    /// Raw storage, row-major from the lowest ghost row.
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Converts a storage row number back to a grid row index.
    pub fn storage_row_to_j(r: usize) -> isize {
        r as isize - Grid2D::GHOST as isize
    }

    /// Max-norm over the physical (non-ghost) rows `0..=n`.
    pub fn max_abs(&self) -> f64 {
        let n = self.rows as isize - 1 - 2 * Grid2D::GHOST as isize;
        (0..=n)
            .flat_map(|j| self.row(j).iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Max-norm of `self - other` over the physical rows.
    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        let n = self.rows as isize - 1 - 2 * Grid2D::GHOST as isize;
        (0..=n)
            .flat_map(|j| self.row(j).iter().zip(other.row(j)))
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self = a * x + b * y` elementwise.
    pub fn assign_combination(&mut self, a: f64, x: &Field, b: f64, y: &Field) {
        for ((s, xv), yv) in self.data.iter_mut().zip(&x.data).zip(&y.data) {
            *s = a * xv + b * yv;
        }
    }
}
