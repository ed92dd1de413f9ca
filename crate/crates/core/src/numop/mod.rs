//! Finite-difference realization of `(-ih grad - A)^2` with complex `A`,
//! used as an independent check on the series residual.

mod inequalities;
mod io;

pub use inequalities::{magnetic_terms, random_bump, verify_magnetic_inequalities, InequalityReport, MagneticTerms};
pub use io::{read_grid_function, write_grid_function};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fieldmodel::FieldSpec;
use crate::pseudomode::{Evaluator, Pseudomode, ResidualReport};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Layers that must be (numerically) empty for the stencils to be valid.
pub const SUPPORT_LAYERS: usize = 4;
/// Largest tolerated value on the empty layers, relative to `max |u|`.
pub const SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum NumopError {
    #[error("grid needs at least 16 points per axis and a positive extent (n = {n}, L = {half_width})")]
    BadGrid { n: usize, half_width: f64 },
    #[error("grid function has {got} values, grid expects {expected}")]
    Shape { got: usize, expected: usize },
    #[error("function reaches the boundary layers ({boundary:.3e} of its maximum); enlarge L to at least {suggested}")]
    SupportViolation { boundary: f64, suggested: f64 },
    #[error("h must be positive, got {0}")]
    Domain(f64),
    #[error("grid file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The square `[-L, L]^2` of offsets from the field's base point, sampled at
/// `n` points per axis including the edges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    half_width: f64,
    n: usize,
}

impl Grid2D {
    pub fn new(half_width: f64, n: usize) -> Result<Self, NumopError> {
        if n < 16 || !(half_width > 0.0) || !half_width.is_finite() {
            return Err(NumopError::BadGrid { n, half_width });
        }
        Ok(Self { half_width, n })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Offset of the sample `(i, j)`, `i` along `x1`.
    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        [self.coordinate(i), self.coordinate(j)]
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Samples on a [`Grid2D`], row-major with `x2` varying slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid2D,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid2D, values: Vec<Complex64>) -> Result<Self, NumopError> {
        if values.len() != grid.len() {
            return Err(NumopError::Shape {
                got: values.len(),
                expected: grid.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn([f64; 2]) -> Complex64 + Sync>(grid: Grid2D, f: F) -> Self {
        let n = grid.n;
        let values = (0..grid.len())
            .into_par_iter()
            .map(|k| f(grid.point(k % n, k / n)))
            .collect();
        Self { grid, values }
    }

    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            values: vec![ZERO; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.grid.n + i]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `sum |u|^2 dx^2` on the grid.
    pub fn norm_sqr(&self) -> f64 {
        let dx = self.grid.spacing();
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx * dx
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `sum conj(v) u dx^2`.
    pub fn inner(&self, v: &GridFunction) -> Complex64 {
        let dx = self.grid.spacing();
        self.values
            .iter()
            .zip(&v.values)
            .map(|(a, b)| b.conj() * a)
            .sum::<Complex64>()
            * (dx * dx)
    }

    pub fn map(&self, f: impl Fn([f64; 2], Complex64) -> Complex64 + Sync) -> Self {
        let n = self.grid.n;
        let values = self
            .values
            .par_iter()
            .enumerate()
            .map(|(k, &v)| f(self.grid.point(k % n, k / n), v))
            .collect();
        Self { grid: self.grid, values }
    }

    pub fn axpy(&self, a: Complex64, other: &GridFunction) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(u, v)| u + a * v).collect();
        Self { grid: self.grid, values }
    }

    /// Largest modulus on the outer [`SUPPORT_LAYERS`] layers.
    pub fn boundary_max(&self) -> f64 {
        let n = self.grid.n;
        let edge = |i: usize| i < SUPPORT_LAYERS || i + SUPPORT_LAYERS >= n;
        (0..self.grid.len())
            .filter(|k| edge(k % n) || edge(k / n))
            .map(|k| self.values[k].norm())
            .fold(0.0, f64::max)
    }

    fn check_support(&self) -> Result<(), NumopError> {
        let max = self.max_abs();
        let boundary = self.boundary_max();
        if boundary > SUPPORT_TOL * max {
            return Err(NumopError::SupportViolation {
                boundary: boundary / max,
                suggested: 1.5 * self.grid.half_width,
            });
        }
        Ok(())
    }
}

/// Fourth-order first and second differences along one axis.
#[inline]
fn stencil(m2: Complex64, m1: Complex64, c: Complex64, p1: Complex64, p2: Complex64, dx: f64) -> (Complex64, Complex64) {
    let d = (m2 - p2 + 8.0 * (p1 - m1)) / (12.0 * dx);
    let dd = (-(m2 + p2) + 16.0 * (p1 + m1) - 30.0 * c) / (12.0 * dx * dx);
    (d, dd)
}

/// `u`, its gradient and its Laplacian at the interior sample `(i, j)`.
pub(crate) fn derivatives(u: &GridFunction, i: usize, j: usize) -> ([Complex64; 2], Complex64) {
    let dx = u.grid.spacing();
    let (d1, d11) = stencil(u.at(i - 2, j), u.at(i - 1, j), u.at(i, j), u.at(i + 1, j), u.at(i + 2, j), dx);
    let (d2, d22) = stencil(u.at(i, j - 2), u.at(i, j - 1), u.at(i, j), u.at(i, j + 1), u.at(i, j + 2), dx);
    ([d1, d2], d11 + d22)
}

/// `(-ih grad - A)^2 u = -h^2 Delta u + ih (div A) u + 2ih A.grad u + (A.A) u`
/// with `A` and `div A` taken from the field's closed form. The two outer
/// layers, where the stencils do not fit, are returned as zero.
pub fn apply_l(field: &FieldSpec, h: f64, u: &GridFunction) -> Result<GridFunction, NumopError> {
    if !(h > 0.0) {
        return Err(NumopError::Domain(h));
    }
    u.check_support()?;
    let grid = u.grid;
    let n = grid.n;
    let base = field.base_point();
    let mut values = vec![ZERO; grid.len()];
    values
        .par_chunks_mut(n)
        .enumerate()
        .filter(|(j, _)| *j >= 2 && *j + 2 < n)
        .for_each(|(j, row)| {
            for (i, out) in row.iter_mut().enumerate().take(n - 2).skip(2) {
                let v = u.at(i, j);
                let ([g1, g2], lap) = derivatives(u, i, j);
                if v == ZERO && g1 == ZERO && g2 == ZERO && lap == ZERO {
                    continue;
                }
                let y = grid.point(i, j);
                let x = [base[0] + y[0], base[1] + y[1]];
                let a = field.potential().a_at(x);
                let da = field.potential().first_partials(x);
                let div = da[0][0] + da[1][1];
                *out = -h * h * lap + I * h * div * v + 2.0 * I * h * (a[0] * g1 + a[1] * g2) + (a[0] * a[0] + a[1] * a[1]) * v;
            }
        });
    Ok(GridFunction { grid, values })
}

/// Residual ratio `||(L - h mu) u_h|| / ||u_h||` on an `n x n` grid covering
/// `[-2 r_out, 2 r_out]^2`.
pub fn residual_finite_difference(pm: &Pseudomode, h: f64, n: usize) -> Result<ResidualReport, NumopError> {
    if !(h > 0.0) {
        return Err(NumopError::Domain(h));
    }
    let grid = Grid2D::new(2.0 * pm.cutoff().r_out, n)?;
    let u = GridFunction::from_fn(grid, |x| pm.u(x, h));
    let lu = apply_l(pm.field(), h, &u)?;
    let mu = pm.solution().mu;
    let r = lu.axpy(-h * mu, &u);
    let (u_norm, residual_norm) = (u.norm(), r.norm());
    Ok(ResidualReport {
        h,
        n_used: pm.n_used(h),
        evaluator: Evaluator::FiniteDifference,
        u_norm,
        residual_norm,
        ratio: residual_norm / u_norm,
        quad_points: n,
        tail_estimate: pm.tail_estimate(h),
        interior_norm: None,
        cutoff_norm: None,
    })
}

#[cfg(test)]
mod tests;
