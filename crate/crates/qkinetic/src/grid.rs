//! Uniform periodic 2-D velocity mesh.

use crate::error::SolverError;

/// Uniform periodic velocity grid on the square `[-L, L)²` with `N` points
/// per axis. Node coordinates are `v_j = -L + j·Δv`, `j = 0..N-1`, with
/// `Δv = 2L/N`; the velocity dimension is fixed at 2.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    n_per_axis: usize,
    half_width: f64,
    spacing: f64,
    nodes: Vec<f64>,
}

impl VelocityGrid {
    /// Builds the grid. `n_per_axis` must be even and at least 8; the
    /// half-width must be positive.
    pub fn new(n_per_axis: usize, half_width: f64) -> Result<Self, SolverError> {
        if n_per_axis < 8 || n_per_axis % 2 != 0 {
            return Err(SolverError::InvalidParameter(format!(
                "n_per_axis must be even and >= 8, got {n_per_axis}"
            )));
        }
        if !(half_width > 0.0) {
            return Err(SolverError::InvalidParameter(format!(
                "half_width must be positive, got {half_width}"
            )));
        }
        let spacing = 2.0 * half_width / n_per_axis as f64;
        let nodes = (0..n_per_axis)
            .map(|j| -half_width + spacing * j as f64)
            .collect();
        Ok(VelocityGrid {
            n_per_axis,
            half_width,
            spacing,
            nodes,
        })
    }

    /// Number of points per axis (`N`).
    #[inline]
    pub fn n(&self) -> usize {
        self.n_per_axis
    }

    /// Velocity-domain half-width (`L`).
    #[inline]
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Mesh spacing `Δv = 2L/N`.
    #[inline]
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Per-axis node coordinates.
    #[inline]
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Total number of velocity nodes (`N²`).
    #[inline]
    pub fn len(&self) -> usize {
        self.n_per_axis * self.n_per_axis
    }

    /// True when the grid holds no nodes (never, for a constructed grid).
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat row-major index of node `(ix, iy)`.
    #[inline]
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        ix * self.n_per_axis + iy
    }

    /// Samples a scalar function of velocity on every node, row-major.
    pub fn sample<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for &vx in &self.nodes {
            for &vy in &self.nodes {
                out.push(f(vx, vy));
            }
        }
        out
    }

    /// Largest admissible kernel truncation radius, `2L/(3+√2)`. Radii above
    /// this bound let padded convolutions wrap around the periodic box.
    #[inline]
    pub fn max_truncation_radius(&self) -> f64 {
        2.0 * self.half_width / (3.0 + std::f64::consts::SQRT_2)
    }
}
