//! Finite-volume transport in space and the kinetic time-stepping schemes.
//!
//! The spatial domain is a 1-D interval of `Nx` cells, each carrying a full
//! velocity distribution. Transport `v·∇_x f` is discretized per velocity
//! node by upwind fluxes with second-order limited reconstruction and
//! zero-gradient ghost cells. Four time steppers share that sweep:
//!
//! - [`step_forward_euler`]: fully explicit; stable only when `Δt ≲ ε`.
//! - [`step_ap_first_order`]: the penalized scheme. The stiff collision term
//!   is written as `[Q_q(f) - λ(M_c - f)]/ε + λ(M_c' - f')/ε`, where `M_c`
//!   is the classical-substitute Gaussian sharing the state's first five
//!   moments. Because the right side carries no net mass, momentum, or
//!   energy, the new conserved quantities follow from the transport fluxes
//!   alone; `M_c'` is built from them, and the update solves for `f'` in
//!   closed form — no fugacity inversion anywhere in the time loop, and the
//!   step stays explicit-cost yet uniformly stable in `ε`.
//! - [`step_imex2`]: the two-stage second-order variant (half-step predictor,
//!   then a full step whose implicit penalization averages the endpoint
//!   terms).
//! - [`step_bgk_penalized`]: the first-order scheme with `Q_q` replaced by
//!   the quantum BGK relaxation `(M_q - f)`; used for stiff-limit analysis.
//!   In the homogeneous case it contracts `f - M_q` by exactly
//!   `α = |1 + (λ-1)Δt/ε| / (1 + λΔt/ε)` per step.

use crate::collision::{CollisionConfig, CollisionOperator};
use crate::error::SolverError;
use crate::grid::VelocityGrid;
use crate::moments::ConservedState;
use crate::quantum::{classical_maxwellian_from_e, quantum_maxwellian, solve_fugacity, ThermoState};

/// Slope limiter for the second-order reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limiter {
    /// Most diffusive TVD choice: zero slope at any extremum.
    Minmod,
    /// Harmonic-mean limiter; sharper at discontinuities, still TVD.
    VanLeer,
    /// Zero slope everywhere: first-order upwind. (Unlimited central slopes
    /// would not be TVD, so "no limiter" means "no reconstruction".)
    None,
}

/// Time-integration scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Explicit update; kinetic regimes only.
    ForwardEuler,
    /// First-order penalized scheme, uniformly stable in ε.
    ApFirstOrder,
    /// Second-order implicit-explicit variant.
    Imex2,
    /// Penalized quantum BGK; stiff-limit diagnostics.
    BgkPenalized,
}

/// Spatial boundary treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Ghost cells copy the nearest interior cell.
    ZeroGradient,
}

/// A 1-D row of cells, each holding a velocity distribution.
#[derive(Debug, Clone)]
pub struct SpatialField {
    cells: Vec<Vec<f64>>,
    dx: f64,
    x_min: f64,
    x_max: f64,
    /// Boundary treatment (only zero-gradient is implemented).
    pub boundary: Boundary,
}

impl SpatialField {
    /// Builds a field from per-cell distributions on `[x_min, x_max]`.
    pub fn new(
        cells: Vec<Vec<f64>>,
        x_min: f64,
        x_max: f64,
        grid: &VelocityGrid,
    ) -> Result<Self, SolverError> {
        if cells.len() < 4 {
            return Err(SolverError::InvalidParameter(format!(
                "spatial field needs at least 4 cells, got {}",
                cells.len()
            )));
        }
        if !(x_max > x_min) {
            return Err(SolverError::InvalidParameter(format!(
                "invalid spatial extent [{x_min}, {x_max}]"
            )));
        }
        for (i, c) in cells.iter().enumerate() {
            if c.len() != grid.len() {
                return Err(SolverError::InvalidParameter(format!(
                    "cell {i} holds {} values, expected {}",
                    c.len(),
                    grid.len()
                )));
            }
        }
        let dx = (x_max - x_min) / cells.len() as f64;
        Ok(SpatialField {
            cells,
            dx,
            x_min,
            x_max,
            boundary: Boundary::ZeroGradient,
        })
    }

    /// Samples per-cell distributions from a function of the cell center.
    pub fn from_profile<F: FnMut(f64) -> Vec<f64>>(
        nx: usize,
        x_min: f64,
        x_max: f64,
        grid: &VelocityGrid,
        mut ic: F,
    ) -> Result<Self, SolverError> {
        if nx < 4 {
            return Err(SolverError::InvalidParameter(format!(
                "spatial field needs at least 4 cells, got {nx}"
            )));
        }
        let dx = (x_max - x_min) / nx as f64;
        let cells = (0..nx)
            .map(|i| ic(x_min + (i as f64 + 0.5) * dx))
            .collect();
        SpatialField::new(cells, x_min, x_max, grid)
    }

    /// Number of cells.
    pub fn nx(&self) -> usize {
        self.cells.len()
    }

    /// Cell width.
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Domain bounds.
    pub fn extent(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }

    /// Cell-center coordinate of cell `i`.
    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    /// Per-cell distributions.
    pub fn cells(&self) -> &[Vec<f64>] {
        &self.cells
    }

    /// Mutable access for in-place initialization.
    pub fn cells_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.cells
    }

    /// Index of the first cell containing a non-finite value, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.cells
            .iter()
            .position(|c| c.iter().any(|x| !x.is_finite()))
    }

    fn like(&self, cells: Vec<Vec<f64>>) -> SpatialField {
        SpatialField {
            cells,
            dx: self.dx,
            x_min: self.x_min,
            x_max: self.x_max,
            boundary: self.boundary,
        }
    }
}

/// Time-stepping parameters shared by all schemes.
#[derive(Debug, Clone, Copy)]
pub struct SchemeConfig {
    /// Knudsen number ε multiplying `1/Q`.
    pub epsilon: f64,
    /// Penalization weight λ.
    pub lambda: f64,
    /// Courant number in (0, 1].
    pub cfl: f64,
    /// Time step (derive via [`cfl_dt`]).
    pub dt: f64,
    /// Slope limiter for transport.
    pub limiter: Limiter,
    /// Scheme selector (drivers dispatch on it).
    pub scheme: Scheme,
}

impl SchemeConfig {
    /// Validates parameter ranges; the BGK-penalized contraction analysis
    /// additionally needs `λ > ½`.
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.epsilon > 0.0) {
            return Err(SolverError::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.lambda > 0.0) {
            return Err(SolverError::InvalidParameter(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SolverError::InvalidParameter(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        if !(self.dt > 0.0) {
            return Err(SolverError::InvalidParameter(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.scheme == Scheme::BgkPenalized && self.lambda <= 0.5 {
            return Err(SolverError::InvalidParameter(format!(
                "the BGK-penalized contraction analysis needs lambda > 1/2, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Transport-stable time step `Δt = cfl·Δx/L`: the fastest signal is the
/// largest velocity on the grid, i.e. the box half-width. Independent of ε.
pub fn cfl_dt(grid: &VelocityGrid, dx: f64, cfl: f64) -> Result<f64, SolverError> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(SolverError::InvalidParameter(format!(
            "cfl must lie in (0, 1], got {cfl}"
        )));
    }
    if !(dx > 0.0) {
        return Err(SolverError::InvalidParameter(format!(
            "dx must be positive, got {dx}"
        )));
    }
    Ok(cfl * dx / grid.half_width())
}

/// Default penalization weight `λ = c_λ·max_i ρ_i`. For constant collision
/// kernels the collision frequency grows linearly with density, so the
/// largest cell density bounds the linearized-collision spectral radius up
/// to the kernel constant, which `c_λ` absorbs.
pub fn estimate_lambda(
    field: &SpatialField,
    grid: &VelocityGrid,
    c_lambda: f64,
) -> Result<f64, SolverError> {
    if !(c_lambda > 0.0) {
        return Err(SolverError::InvalidParameter(format!(
            "c_lambda must be positive, got {c_lambda}"
        )));
    }
    let mut rho_max = 0.0f64;
    for cell in field.cells() {
        rho_max = rho_max.max(ConservedState::from_field(cell, grid).mass);
    }
    if !(rho_max > 0.0) {
        return Err(SolverError::InvalidParameter(
            "cannot estimate lambda: no cell has positive density".into(),
        ));
    }
    Ok(c_lambda * rho_max)
}

#[inline]
fn limited_slope(limiter: Limiter, forward: f64, backward: f64) -> f64 {
    match limiter {
        Limiter::Minmod => {
            if forward * backward > 0.0 {
                forward.signum() * forward.abs().min(backward.abs())
            } else {
                0.0
            }
        }
        Limiter::VanLeer => {
            if forward * backward > 0.0 {
                2.0 * forward * backward / (forward + backward)
            } else {
                0.0
            }
        }
        Limiter::None => 0.0,
    }
}

/// Discretizes `-v·∇_x f`: per velocity node, upwind interface fluxes with
/// limited linear reconstruction and zero-gradient ghost cells, returned as
/// one increment field per cell. The flux-difference form telescopes, so
/// summing any moment over all cells leaves only the two boundary fluxes.
pub fn transport_rhs(
    field: &SpatialField,
    grid: &VelocityGrid,
    limiter: Limiter,
) -> Vec<Vec<f64>> {
    let nx = field.nx();
    let nv = grid.len();
    let n = grid.n();
    let nodes = grid.nodes();
    let cells = field.cells();
    let inv_dx = 1.0 / field.dx;

    // Limited slopes per cell (ghost cells have zero slope by construction:
    // their zero-gradient neighbor difference vanishes).
    let mut slopes = vec![vec![0.0f64; nv]; nx];
    for i in 0..nx {
        let prev = &cells[i.saturating_sub(1)];
        let next = &cells[(i + 1).min(nx - 1)];
        let here = &cells[i];
        let s = &mut slopes[i];
        for j in 0..nv {
            s[j] = limited_slope(limiter, next[j] - here[j], here[j] - prev[j]);
        }
    }

    // Interface fluxes: index k = 0..nx is the face between cells k-1 and k.
    let mut fluxes = vec![vec![0.0f64; nv]; nx + 1];
    for k in 0..=nx {
        let fk = &mut fluxes[k];
        for ix in 0..n {
            let vx = nodes[ix];
            let row = ix * n;
            if vx > 0.0 {
                // Upwind from the left cell (ghost copy of cell 0 at k = 0).
                let (cell, slope): (&[f64], &[f64]) = if k == 0 {
                    (&cells[0], &[])
                } else {
                    (&cells[k - 1], &slopes[k - 1])
                };
                for iy in 0..n {
                    let j = row + iy;
                    let up = if slope.is_empty() {
                        cell[j]
                    } else {
                        cell[j] + 0.5 * slope[j]
                    };
                    fk[j] = vx * up;
                }
            } else if vx < 0.0 {
                // Upwind from the right cell (ghost copy of the last cell).
                let (cell, slope): (&[f64], &[f64]) = if k == nx {
                    (&cells[nx - 1], &[])
                } else {
                    (&cells[k], &slopes[k])
                };
                for iy in 0..n {
                    let j = row + iy;
                    let up = if slope.is_empty() {
                        cell[j]
                    } else {
                        cell[j] - 0.5 * slope[j]
                    };
                    fk[j] = vx * up;
                }
            }
        }
    }

    (0..nx)
        .map(|i| {
            let left = &fluxes[i];
            let right = &fluxes[i + 1];
            (0..nv).map(|j| -(right[j] - left[j]) * inv_dx).collect()
        })
        .collect()
}

/// Explicit update `f' = f + Δt·(-v·∇_x f + Q_q(f)/ε)`.
///
/// Conditionally stable: the collision term demands `Δt ≲ ε/λ_coll`, so this
/// is the reference integrator for kinetic regimes (ε ≳ 1e-2) only.
/// Instability shows up as NaN and is caught by the caller's watchdog.
pub fn step_forward_euler(
    field: &SpatialField,
    grid: &VelocityGrid,
    config: &SchemeConfig,
    op: &mut CollisionOperator,
    collision: &CollisionConfig,
) -> Result<SpatialField, SolverError> {
    let transport = transport_rhs(field, grid, config.limiter);
    let dt = config.dt;
    let inv_eps = 1.0 / config.epsilon;
    let mut out = Vec::with_capacity(field.nx());
    for (i, cell) in field.cells().iter().enumerate() {
        let q = op.qq_full(cell, collision);
        let t = &transport[i];
        out.push(
            cell.iter()
                .zip(t)
                .zip(&q)
                .map(|((&f, &tr), &qv)| f + dt * (tr + qv * inv_eps))
                .collect(),
        );
    }
    Ok(field.like(out))
}

fn classical_substitute(
    u: &ConservedState,
    cell: usize,
    grid: &VelocityGrid,
) -> Result<Vec<f64>, SolverError> {
    let mac = u.to_macro().map_err(|e| e.with_cell(cell))?;
    if !(mac.internal_energy > 0.0) {
        return Err(SolverError::DomainViolation(format!(
            "cell {cell}: non-positive internal energy {:.6e} after moment update \
             (time step too large)",
            mac.internal_energy
        )));
    }
    Ok(classical_maxwellian_from_e(
        mac.density,
        mac.velocity,
        mac.internal_energy,
        grid,
    ))
}

#[inline]
fn advance_conserved(u: &ConservedState, incr: &ConservedState, dt: f64) -> ConservedState {
    ConservedState {
        mass: u.mass + dt * incr.mass,
        momentum: [
            u.momentum[0] + dt * incr.momentum[0],
            u.momentum[1] + dt * incr.momentum[1],
        ],
        total_energy: u.total_energy + dt * incr.total_energy,
    }
}

/// One step of the first-order penalized scheme.
///
/// Moments first: `U' = U + Δt·⟨φ·(-v·∇_x f)⟩` with the same limited fluxes
/// as the distribution update (the penalized right side carries no net
/// moments), then
///
/// ```text
/// f' = [ f + Δt·(-v·∇_x f) + (Δt/ε)(Q_q(f) - λ(M_c - f)) + (λΔt/ε)·M_c' ]
///      / (1 + λΔt/ε)
/// ```
///
/// with `M_c` the classical substitute of `U` and `M_c'` that of `U'`.
pub fn step_ap_first_order(
    field: &SpatialField,
    grid: &VelocityGrid,
    config: &SchemeConfig,
    op: &mut CollisionOperator,
    collision: &CollisionConfig,
) -> Result<SpatialField, SolverError> {
    let transport = transport_rhs(field, grid, config.limiter);
    let dt = config.dt;
    let r = dt / config.epsilon;
    let lam = config.lambda;
    let denom = 1.0 + lam * r;
    let mut out = Vec::with_capacity(field.nx());
    for (i, cell) in field.cells().iter().enumerate() {
        let t = &transport[i];
        let u_now = ConservedState::from_field(cell, grid);
        let du = ConservedState::from_field(t, grid);
        let u_next = advance_conserved(&u_now, &du, dt);
        let mc_now = classical_substitute(&u_now, i, grid)?;
        let mc_next = classical_substitute(&u_next, i, grid)?;
        let q = op.qq_full(cell, collision);
        let mut new = Vec::with_capacity(cell.len());
        for j in 0..cell.len() {
            let f = cell[j];
            let numer =
                f + dt * t[j] + r * (q[j] - lam * (mc_now[j] - f)) + lam * r * mc_next[j];
            new.push(numer / denom);
        }
        out.push(new);
    }
    Ok(field.like(out))
}

/// One step of the second-order implicit-explicit scheme: a `Δt/2` predictor
/// with the same closed-form implicit penalization, then a full step whose
/// implicit part averages the old and new penalization terms (divisor
/// `1 + λΔt/(2ε)`).
pub fn step_imex2(
    field: &SpatialField,
    grid: &VelocityGrid,
    config: &SchemeConfig,
    op: &mut CollisionOperator,
    collision: &CollisionConfig,
) -> Result<SpatialField, SolverError> {
    let dt = config.dt;
    let eps = config.epsilon;
    let lam = config.lambda;
    let nx = field.nx();

    // Stage 1: half-step predictor f*.
    let transport_now = transport_rhs(field, grid, config.limiter);
    let half = 0.5 * dt;
    let r_half = half / eps;
    let denom_half = 1.0 + lam * r_half;
    let mut u_now = Vec::with_capacity(nx);
    let mut mc_now = Vec::with_capacity(nx);
    let mut mc_star = Vec::with_capacity(nx);
    let mut star_cells = Vec::with_capacity(nx);
    for (i, cell) in field.cells().iter().enumerate() {
        let t = &transport_now[i];
        let u = ConservedState::from_field(cell, grid);
        let du = ConservedState::from_field(t, grid);
        let u_mid = advance_conserved(&u, &du, half);
        let mc = classical_substitute(&u, i, grid)?;
        let mc_mid = classical_substitute(&u_mid, i, grid)?;
        let q = op.qq_full(cell, collision);
        let mut star = Vec::with_capacity(cell.len());
        for j in 0..cell.len() {
            let f = cell[j];
            let numer =
                f + half * t[j] + r_half * (q[j] - lam * (mc[j] - f)) + lam * r_half * mc_mid[j];
            star.push(numer / denom_half);
        }
        star_cells.push(star);
        u_now.push(u);
        mc_now.push(mc);
        mc_star.push(mc_mid);
    }
    let star = field.like(star_cells);

    // Stage 2: full step from the midpoint quantities.
    let transport_star = transport_rhs(&star, grid, config.limiter);
    let r = dt / eps;
    let denom = 1.0 + 0.5 * lam * r;
    let mut out = Vec::with_capacity(nx);
    for (i, cell) in field.cells().iter().enumerate() {
        let fs = &star.cells()[i];
        let ts = &transport_star[i];
        let dus = ConservedState::from_field(ts, grid);
        let u_next = advance_conserved(&u_now[i], &dus, dt);
        let mc_next = classical_substitute(&u_next, i, grid)?;
        let q_star = op.qq_full(fs, collision);
        let mc = &mc_now[i];
        let mcs = &mc_star[i];
        let mut new = Vec::with_capacity(cell.len());
        for j in 0..cell.len() {
            let f = cell[j];
            let numer = f
                + dt * ts[j]
                + r * (q_star[j] - lam * (mcs[j] - fs[j]))
                + 0.5 * lam * r * (mc[j] - f)
                + 0.5 * lam * r * mc_next[j];
            new.push(numer / denom);
        }
        out.push(new);
    }
    Ok(field.like(out))
}

/// Per-cell `(z, T)` warm starts for the BGK-penalized scheme. After a step,
/// `states[i]` holds the thermodynamic state the step used for cell `i`.
#[derive(Debug, Clone, Default)]
pub struct ThermoCache {
    /// Thermodynamic state per cell, populated lazily.
    pub states: Vec<Option<ThermoState>>,
}

impl ThermoCache {
    /// Empty cache for `nx` cells.
    pub fn new(nx: usize) -> Self {
        ThermoCache {
            states: vec![None; nx],
        }
    }
}

/// One step of the penalized scheme with `Q_q` replaced by the quantum BGK
/// operator `(M_q - f)`: used for stiff-limit diagnostics, where its
/// homogeneous contraction factor is exactly
/// `α = |1 + (λ-1)Δt/ε| / (1 + λΔt/ε)`.
///
/// Unlike the production scheme this needs a fugacity inversion per cell per
/// step to build `M_q`; the cache warm-starts each solve from the previous
/// step (classical statistics short-circuit to `M_q = M_c`).
pub fn step_bgk_penalized(
    field: &SpatialField,
    grid: &VelocityGrid,
    config: &SchemeConfig,
    collision: &CollisionConfig,
    cache: &mut ThermoCache,
) -> Result<SpatialField, SolverError> {
    if cache.states.len() != field.nx() {
        cache.states = vec![None; field.nx()];
    }
    let transport = transport_rhs(field, grid, config.limiter);
    let dt = config.dt;
    let r = dt / config.epsilon;
    let lam = config.lambda;
    let denom = 1.0 + lam * r;
    let mut out = Vec::with_capacity(field.nx());
    for (i, cell) in field.cells().iter().enumerate() {
        let t = &transport[i];
        let u_now = ConservedState::from_field(cell, grid);
        let du = ConservedState::from_field(t, grid);
        let u_next = advance_conserved(&u_now, &du, dt);
        let mc_now = classical_substitute(&u_now, i, grid)?;
        let mc_next = classical_substitute(&u_next, i, grid)?;
        let mq = match collision.statistics.statistics() {
            Some(statistics) => {
                let mac = u_now.to_macro().map_err(|e| e.with_cell(i))?;
                let hint = cache.states[i].map(|s| s.fugacity);
                let thermo = solve_fugacity(
                    mac.density,
                    mac.internal_energy,
                    collision.theta0,
                    statistics,
                    hint,
                )
                .map_err(|e| e.with_cell(i))?;
                cache.states[i] = Some(thermo);
                quantum_maxwellian(&thermo, mac.velocity, grid)
            }
            // Classical limit: the BGK target is the classical substitute.
            None => mc_now.clone(),
        };
        let mut new = Vec::with_capacity(cell.len());
        for j in 0..cell.len() {
            let f = cell[j];
            let numer = f
                + dt * t[j]
                + r * ((mq[j] - f) - lam * (mc_now[j] - f))
                + lam * r * mc_next[j];
            new.push(numer / denom);
        }
        out.push(new);
    }
    Ok(field.like(out))
}
