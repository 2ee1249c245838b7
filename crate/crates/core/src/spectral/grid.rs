use alloc::vec::Vec;

use crate::metric::TorusPoint;
use crate::{FinslerError, Result};

/// Uniform periodic `nx × ny` grid on the unit torus. Node `(i, j)` sits at
/// `(i/nx, j/ny)` and has row-major index `j * nx + i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusGrid {
    nx: usize,
    ny: usize,
}

impl TorusGrid {
    pub const MIN_SIZE: usize = 8;

    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        for n in [nx, ny] {
            if n < Self::MIN_SIZE {
                return Err(FinslerError::InvalidParameter { name: "grid size", value: n as f64 });
            }
        }
        Ok(TorusGrid { nx, ny })
    }

    pub fn square(n: usize) -> Result<Self> {
        TorusGrid::new(n, n)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        1.0 / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    /// Index of `(i, j)` with periodic wraparound.
    #[inline]
    pub fn index(&self, i: isize, j: isize) -> usize {
        let i = i.rem_euclid(self.nx as isize) as usize;
        let j = j.rem_euclid(self.ny as isize) as usize;
        j * self.nx + i
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    pub fn point(&self, idx: usize) -> TorusPoint {
        let (i, j) = self.coords(idx);
        TorusPoint::new(i as f64 * self.dx(), j as f64 * self.dy())
    }
}

/// One real value per grid node.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction(pub Vec<f64>);

impl GridFunction {
    pub fn sample(grid: &TorusGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        GridFunction(
            (0..grid.len())
                .map(|k| {
                    let p = grid.point(k);
                    f(p.x(), p.y())
                })
                .collect(),
        )
    }

    pub fn constant(grid: &TorusGrid, c: f64) -> Self {
        GridFunction(alloc::vec![c; grid.len()])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}
