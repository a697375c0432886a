//! Angular factorization tables for the collision kernel.
//!
//! The quadratic part of the operator has Fourier modes driven by the kernel
//! weights
//!
//! ```text
//! β(l, m) = ∫∫_{B_R × B_R} δ(x·y) e^{i(π/L)l·x} e^{i(π/L)m·y} dx dy
//!         = ∫₀^π φ(l·e_θ) φ(m·e_θ^⊥) dθ,
//! ```
//!
//! where the planar constraint `δ(x·y)` reduces the double ball integral to a
//! single angle with the radial profile `φ(s) = (2L/(πs))·sin(πRs/L)`,
//! `φ(0) = 2R`. Discretizing the angle at `θ_p = (π/2)(p/M)`, `p = 0..M-1`,
//! with weight `π/M` factorizes every kernel weight into products of
//! `α_p(l) = φ(l·(cos θ_p, sin θ_p))` and `α′_p(m) = φ(m·(-sin θ_p, cos θ_p))`:
//! rank-one structure that turns each mode sum into FFT-sized convolutions.
//! The individual summand `(π/M)Σ_p α_p(l)α′_p(m)` is asymmetric in `(l, m)`;
//! its symmetrization is the M-point midpoint rule for the true `β`, and the
//! operator sums symmetrize automatically because every quadratic sum ranges
//! over unordered `{l, m}` pairs.
//!
//! Tables are built on the extended index range `[-N, N]²`: the cubic terms
//! evaluate kernel factors at shifted arguments `l + n` with `l` in the
//! centered block and `n` a block wavevector.

use crate::error::SolverError;
use crate::grid::VelocityGrid;

/// Radial kernel profile `φ(s) = (2L/(πs))·sin(πRs/L)` with the continuous
/// limit `φ(0) = 2R`; even in `s`.
#[inline]
pub fn kernel_profile(s: f64, half_width: f64, radius: f64) -> f64 {
    if s.abs() < 1e-12 {
        2.0 * radius
    } else {
        let a = std::f64::consts::PI * s / half_width;
        2.0 * (radius * a).sin() / a
    }
}

/// Precomputed angular factor tables `α_p`, `α′_p` on `[-N, N]²`.
pub struct KernelTables {
    n: usize,
    angular_count: usize,
    truncation_radius: f64,
    half_width: f64,
    /// Per-angle tables, each `(2N+1)²` row-major over `(l_x + N, l_y + N)`.
    alpha: Vec<Vec<f64>>,
    alpha_prime: Vec<Vec<f64>>,
}

impl KernelTables {
    /// Builds the tables for `angular_count` angles and truncation radius
    /// `truncation_radius` on the given grid.
    ///
    /// The radius must satisfy `R ≤ 2L/(3+√2)`: beyond that bound the
    /// periodized supports of the gain-term arguments overlap and the
    /// spectral evaluation aliases.
    pub fn build(
        grid: &VelocityGrid,
        angular_count: usize,
        truncation_radius: f64,
    ) -> Result<Self, SolverError> {
        if angular_count == 0 {
            return Err(SolverError::InvalidParameter(
                "angular_count must be at least 1".into(),
            ));
        }
        let bound = grid.max_truncation_radius();
        if !(truncation_radius > 0.0) || truncation_radius > bound * (1.0 + 1e-12) {
            return Err(SolverError::InvalidParameter(format!(
                "truncation radius {} outside (0, {:.6}] = (0, 2L/(3+sqrt(2))]",
                truncation_radius, bound
            )));
        }
        let n = grid.n();
        let l = grid.half_width();
        let ext = 2 * n + 1;
        let mut alpha = Vec::with_capacity(angular_count);
        let mut alpha_prime = Vec::with_capacity(angular_count);
        for p in 0..angular_count {
            let theta = std::f64::consts::FRAC_PI_2 * p as f64 / angular_count as f64;
            let (sin_t, cos_t) = theta.sin_cos();
            let mut a = vec![0.0f64; ext * ext];
            let mut ap = vec![0.0f64; ext * ext];
            for ix in 0..ext {
                let lx = ix as f64 - n as f64;
                for iy in 0..ext {
                    let ly = iy as f64 - n as f64;
                    a[ix * ext + iy] =
                        kernel_profile(lx * cos_t + ly * sin_t, l, truncation_radius);
                    ap[ix * ext + iy] =
                        kernel_profile(-lx * sin_t + ly * cos_t, l, truncation_radius);
                }
            }
            alpha.push(a);
            alpha_prime.push(ap);
        }
        Ok(KernelTables {
            n,
            angular_count,
            truncation_radius,
            half_width: l,
            alpha,
            alpha_prime,
        })
    }

    /// Grid points per axis the tables were built for.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of discrete angles `M`.
    #[inline]
    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    /// Truncation radius `R`.
    #[inline]
    pub fn truncation_radius(&self) -> f64 {
        self.truncation_radius
    }

    /// Velocity-domain half-width `L`.
    #[inline]
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Row length of the extended tables (`2N + 1`).
    #[inline]
    pub fn ext(&self) -> usize {
        2 * self.n + 1
    }

    /// `α_p(l)` for `l ∈ [-N, N]²`.
    #[inline]
    pub fn alpha(&self, p: usize, lx: i32, ly: i32) -> f64 {
        let ext = self.ext();
        let ix = (lx + self.n as i32) as usize;
        let iy = (ly + self.n as i32) as usize;
        self.alpha[p][ix * ext + iy]
    }

    /// `α′_p(m)` for `m ∈ [-N, N]²`.
    #[inline]
    pub fn alpha_prime(&self, p: usize, mx: i32, my: i32) -> f64 {
        let ext = self.ext();
        let ix = (mx + self.n as i32) as usize;
        let iy = (my + self.n as i32) as usize;
        self.alpha_prime[p][ix * ext + iy]
    }

    /// Raw extended `α_p` table, row-major over `(l_x + N, l_y + N)`.
    #[inline]
    pub(crate) fn alpha_table(&self, p: usize) -> &[f64] {
        &self.alpha[p]
    }

    /// Raw extended `α′_p` table.
    #[inline]
    pub(crate) fn alpha_prime_table(&self, p: usize) -> &[f64] {
        &self.alpha_prime[p]
    }

    /// Discrete kernel weight `(π/M) Σ_p α_p(l) α′_p(m)` (asymmetric M-point
    /// form; see the module docs).
    pub fn beta(&self, l: (i32, i32), m: (i32, i32)) -> f64 {
        let mut s = 0.0;
        for p in 0..self.angular_count {
            s += self.alpha(p, l.0, l.1) * self.alpha_prime(p, m.0, m.1);
        }
        std::f64::consts::PI / self.angular_count as f64 * s
    }

    /// Symmetrized kernel weight `(β(l,m) + β(m,l))/2`: the M-point midpoint
    /// rule for the continuum `β`, which is what the operator effectively
    /// applies.
    pub fn beta_symmetrized(&self, l: (i32, i32), m: (i32, i32)) -> f64 {
        0.5 * (self.beta(l, m) + self.beta(m, l))
    }
}

/// Reference evaluation of the continuum kernel weight
/// `β(l, m) = ∫₀^π φ(l·e_θ)φ(m·e_θ^⊥) dθ` by a dense trapezoid rule
/// (the integrand is smooth and π-periodic, so the rule converges
/// spectrally). Used in tests to validate the factorized tables.
pub fn beta_reference(
    l: (i32, i32),
    m: (i32, i32),
    half_width: f64,
    radius: f64,
    n_theta: usize,
) -> f64 {
    let h = std::f64::consts::PI / n_theta as f64;
    let mut s = 0.0;
    for i in 0..n_theta {
        // Midpoint placement avoids double-counting the periodic endpoints.
        let theta = (i as f64 + 0.5) * h;
        let (sin_t, cos_t) = theta.sin_cos();
        let lf = l.0 as f64 * cos_t + l.1 as f64 * sin_t;
        let mf = -(m.0 as f64) * sin_t + m.1 as f64 * cos_t;
        s += kernel_profile(lf, half_width, radius) * kernel_profile(mf, half_width, radius);
    }
    s * h
}
