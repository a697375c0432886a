//! Scenario drivers: the collision-solver accuracy table, homogeneous
//! relaxation runs, and the 1-D shock tube.

use crate::collision::{CollisionConfig, CollisionOperator, CollisionStatistics, KernelTables};
use crate::dynamics::{
    cfl_dt, estimate_lambda, step_ap_first_order, step_bgk_penalized, step_forward_euler,
    step_imex2, Scheme, SchemeConfig, SpatialField, ThermoCache,
};
use crate::error::SolverError;
use crate::fields::{bose_relaxation_ic, fermi_relaxation_ic};
use crate::grid::VelocityGrid;
use crate::moments::{compute_macro, entropy, raw_moment, ConservedState};
use crate::quantum::{
    classical_fugacity_guess, classical_maxwellian_from_e, fugacity_at_density_temperature,
    macro_from_zt, quantum_maxwellian, solve_fugacity, MacroState, ThermoState,
};

use super::config::{ExperimentConfig, Scenario};

/// Builds the collision configuration for the configured statistics. The
/// classical branch ignores `theta0` (the operator is quadratic there).
pub fn collision_config(
    statistics: CollisionStatistics,
    theta0: f64,
) -> Result<CollisionConfig, SolverError> {
    match statistics.statistics() {
        None => Ok(CollisionConfig::classical()),
        Some(s) => CollisionConfig::quantum(s, theta0),
    }
}

/// Equilibrium distribution of the state (ρ = `rho`, u = 0, T = `temperature`)
/// sampled on `grid`: the quantum Maxwellian with the closed-form fugacity, or
/// the classical Maxwellian (where `e = T` in two velocity dimensions).
pub fn equilibrium_cell(
    grid: &VelocityGrid,
    statistics: CollisionStatistics,
    theta0: f64,
    rho: f64,
    temperature: f64,
) -> Result<Vec<f64>, SolverError> {
    match statistics.statistics() {
        Some(s) => {
            let z = fugacity_at_density_temperature(rho, temperature, theta0, s)?;
            let thermo = ThermoState {
                fugacity: z,
                temperature,
                theta0,
                statistics: s,
            };
            Ok(quantum_maxwellian(&thermo, [0.0, 0.0], grid))
        }
        None => Ok(classical_maxwellian_from_e(rho, [0.0, 0.0], temperature, grid)),
    }
}

// ---------------------------------------------------------------------------
// Accuracy table
// ---------------------------------------------------------------------------

/// Velocity resolutions of the accuracy study.
pub const ACCURACY_GRID_SIZES: [usize; 3] = [16, 32, 64];

/// One resolution's result: `‖Q(M)‖_∞` on the `n × n` grid.
#[derive(Debug, Clone, Copy)]
pub struct AccuracyRow {
    /// Velocity nodes per axis.
    pub n: usize,
    /// Sup norm of the collision operator applied to the equilibrium.
    pub max_norm: f64,
}

/// The three-resolution study plus its observed convergence rate.
#[derive(Debug, Clone)]
pub struct AccuracyResult {
    /// One row per entry of [`ACCURACY_GRID_SIZES`].
    pub rows: Vec<AccuracyRow>,
    /// `log₂(e_16 / e_64) / 2`: decades of decay per doubling, halved.
    pub rate: f64,
}

/// Measures `‖Q(M)‖_∞` at one resolution for the configured statistics,
/// with the equilibrium at ρ = 1, T = 1. The exact operator vanishes on the
/// equilibrium, so the measured norm is pure discretization error and should
/// fall spectrally with `n`.
pub fn accuracy_point(
    n: usize,
    config: &ExperimentConfig,
) -> Result<AccuracyRow, SolverError> {
    let grid = VelocityGrid::new(n, config.l)?;
    let f = equilibrium_cell(&grid, config.statistics, config.theta0, 1.0, 1.0)?;
    let tables = KernelTables::build(&grid, config.m, grid.max_truncation_radius())?;
    let mut op = CollisionOperator::new(&grid, tables);
    let cc = collision_config(config.statistics, config.theta0)?;
    let q = op.qq_full(&f, &cc);
    let max_norm = q.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    Ok(AccuracyRow { n, max_norm })
}

/// Runs the accuracy study over N ∈ {16, 32, 64}.
pub fn run_accuracy_table(config: &ExperimentConfig) -> Result<AccuracyResult, SolverError> {
    let mut rows = Vec::with_capacity(ACCURACY_GRID_SIZES.len());
    for &n in &ACCURACY_GRID_SIZES {
        rows.push(accuracy_point(n, config)?);
    }
    let rate = (rows[0].max_norm / rows[2].max_norm).log2() / 2.0;
    Ok(AccuracyResult { rows, rate })
}

// ---------------------------------------------------------------------------
// Homogeneous relaxation
// ---------------------------------------------------------------------------

/// Observables recorded once per time step during relaxation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesSample {
    /// Simulation time.
    pub t: f64,
    /// Entropy functional `H[f]` (monotone non-increasing under collisions).
    pub entropy: f64,
    /// Raw 4th velocity moment `∫ |v|⁴ f dv`.
    pub m4: f64,
    /// Raw 6th velocity moment `∫ |v|⁶ f dv`.
    pub m6: f64,
    /// Mass.
    pub mass: f64,
    /// x-momentum.
    pub momentum_x: f64,
    /// Kinetic energy `∫ ½|v|² f dv`.
    pub energy: f64,
}

/// Output of a homogeneous relaxation run.
#[derive(Debug, Clone)]
pub struct RelaxationResult {
    /// Time step actually used (the default 1e-3 or a halving of it).
    pub dt: f64,
    /// Per-step observables, starting at `t = 0`.
    pub series: Vec<SeriesSample>,
    /// Labeled distribution snapshots, e.g. `("t0.02", f)`.
    pub snapshots: Vec<(String, Vec<f64>)>,
    /// The distribution at `t_end`.
    pub final_field: Vec<f64>,
}

/// Times at which the distribution is snapshotted (those past `t_end` are
/// skipped).
pub const SNAPSHOT_TIMES: [f64; 4] = [0.0, 0.02, 0.04, 0.5];

fn sample_series(
    t: f64,
    f: &[f64],
    grid: &VelocityGrid,
    cc: &CollisionConfig,
) -> Result<SeriesSample, SolverError> {
    let u = ConservedState::from_field(f, grid);
    Ok(SeriesSample {
        t,
        entropy: entropy(f, grid, cc)?,
        m4: raw_moment(f, grid, 4),
        m6: raw_moment(f, grid, 6),
        mass: u.mass,
        momentum_x: u.momentum[0],
        energy: u.total_energy,
    })
}

/// Integrates the space-homogeneous equation `df/dt = Q(f)/ε` with forward
/// Euler from the scenario's two-bump initial datum, recording entropy, 4th
/// and 6th moments, and the conserved quantities each step, and snapshotting
/// the distribution at the standard times.
///
/// The time step defaults to 1e-3; if the run produces a non-finite value the
/// step is halved and the run restarted, up to 8 attempts, after which the
/// blow-up is reported with its step index.
pub fn run_relaxation(config: &ExperimentConfig) -> Result<RelaxationResult, SolverError> {
    let grid = VelocityGrid::new(config.n, config.l)?;
    let ic = match config.scenario {
        Scenario::RelaxFermi => fermi_relaxation_ic(&grid),
        Scenario::RelaxBose => bose_relaxation_ic(&grid, config.symmetrize_ic),
        other => {
            return Err(SolverError::Config(format!(
                "run_relaxation needs a relaxation scenario, got {}",
                other.name()
            )))
        }
    };
    let cc = collision_config(config.statistics, config.theta0)?;
    let tables = KernelTables::build(&grid, config.m, grid.max_truncation_radius())?;
    let mut op = CollisionOperator::new(&grid, tables);
    let base_dt = config.dt.unwrap_or(1e-3);
    let inv_eps = 1.0 / config.epsilon;
    let targets: Vec<f64> = SNAPSHOT_TIMES
        .iter()
        .copied()
        .filter(|&s| s <= config.t_end + 1e-9)
        .collect();

    let mut last_blowup_step = 0;
    for halvings in 0..8u32 {
        let dt = base_dt / f64::from(1u32 << halvings);
        let mut f = ic.clone();
        let mut t = 0.0;
        let mut series = vec![sample_series(0.0, &f, &grid, &cc)?];
        let mut snapshots: Vec<(String, Vec<f64>)> = Vec::new();
        let mut next_target = 0;
        while next_target < targets.len() && t >= targets[next_target] - 1e-9 {
            snapshots.push((format!("t{:.2}", targets[next_target]), f.clone()));
            next_target += 1;
        }
        let mut blown_up = false;
        let mut step = 0usize;
        while t < config.t_end - 1e-12 {
            let step_dt = dt.min(config.t_end - t);
            let q = op.qq_full(&f, &cc);
            for (fv, qv) in f.iter_mut().zip(&q) {
                *fv += step_dt * qv * inv_eps;
            }
            if f.iter().any(|x| !x.is_finite()) {
                last_blowup_step = step;
                blown_up = true;
                break;
            }
            t = if config.t_end - t <= dt * (1.0 + 1e-12) {
                config.t_end
            } else {
                t + step_dt
            };
            step += 1;
            series.push(sample_series(t, &f, &grid, &cc)?);
            while next_target < targets.len() && t >= targets[next_target] - 1e-9 {
                snapshots.push((format!("t{:.2}", targets[next_target]), f.clone()));
                next_target += 1;
            }
        }
        if !blown_up {
            return Ok(RelaxationResult {
                dt,
                series,
                snapshots,
                final_field: f,
            });
        }
    }
    Err(SolverError::NumericalBlowup {
        step: last_blowup_step,
        cell: 0,
    })
}

// ---------------------------------------------------------------------------
// Shock tube
// ---------------------------------------------------------------------------

/// Left shock-tube state `(ρ, T)` (at rest).
pub const SHOCK_LEFT: (f64, f64) = (1.0, 1.0);
/// Right shock-tube state `(ρ, T)` (at rest).
pub const SHOCK_RIGHT: (f64, f64) = (0.125, 0.25);
/// Position of the initial discontinuity.
pub const SHOCK_SPLIT: f64 = 0.5;

/// Conserved state of one shock-tube side. For quantum statistics the
/// internal energy comes from the constitutive relation at the closed-form
/// fugacity (a Bose gas at fixed (ρ, T) carries *less* energy than the
/// classical `e = T`, a Fermi gas more), so hydrodynamic reference runs start
/// from the same conserved state as the kinetic field.
pub fn shock_side_conserved(
    statistics: CollisionStatistics,
    theta0: f64,
    rho: f64,
    temperature: f64,
) -> Result<ConservedState, SolverError> {
    let e = match statistics.statistics() {
        Some(s) => {
            let z = fugacity_at_density_temperature(rho, temperature, theta0, s)?;
            let (_, e) = macro_from_zt(&ThermoState {
                fugacity: z,
                temperature,
                theta0,
                statistics: s,
            })?;
            e
        }
        None => temperature,
    };
    Ok(ConservedState::from_macro(&MacroState {
        density: rho,
        velocity: [0.0, 0.0],
        internal_energy: e,
    }))
}

/// One cell of the final shock-tube profile.
#[derive(Debug, Clone, Copy)]
pub struct ProfileRow {
    /// Cell-center position.
    pub x: f64,
    /// Density.
    pub rho: f64,
    /// Bulk x-velocity.
    pub ux: f64,
    /// Bulk y-velocity.
    pub uy: f64,
    /// Specific internal energy.
    pub e: f64,
    /// Fugacity.
    pub z: f64,
    /// Temperature.
    pub temperature: f64,
}

/// Output of a shock-tube run.
#[derive(Debug, Clone)]
pub struct ShockResult {
    /// Time step used (CFL-derived unless fixed in the config).
    pub dt: f64,
    /// Penalization weight used (estimated unless fixed in the config).
    pub lambda: f64,
    /// Number of time steps taken.
    pub steps: usize,
    /// Final per-cell diagnostics; one row per spatial cell.
    pub profile: Vec<ProfileRow>,
}

/// Converts a kinetic field to per-cell `(ρ, u, e, z, T)` rows. Quantum runs
/// invert the constitutive system per cell (warm-started left-to-right);
/// classical runs read `T = e` and the classical-limit fugacity directly.
pub fn diagnose_profile(
    field: &SpatialField,
    grid: &VelocityGrid,
    statistics: CollisionStatistics,
    theta0: f64,
) -> Result<Vec<ProfileRow>, SolverError> {
    let mut rows = Vec::with_capacity(field.nx());
    let mut hint: Option<f64> = None;
    for (i, cell) in field.cells().iter().enumerate() {
        let mac = compute_macro(cell, grid).map_err(|e| e.with_cell(i))?;
        let (z, temperature) = match statistics.statistics() {
            Some(s) => {
                let thermo =
                    solve_fugacity(mac.density, mac.internal_energy, theta0, s, hint)
                        .map_err(|e| e.with_cell(i))?;
                hint = Some(thermo.fugacity);
                (thermo.fugacity, thermo.temperature)
            }
            None => (
                classical_fugacity_guess(mac.density, mac.internal_energy, theta0),
                mac.internal_energy,
            ),
        };
        rows.push(ProfileRow {
            x: field.center(i),
            rho: mac.density,
            ux: mac.velocity[0],
            uy: mac.velocity[1],
            e: mac.internal_energy,
            z,
            temperature,
        });
    }
    Ok(rows)
}

/// Runs the shock tube: each cell starts as the equilibrium of its side's
/// (ρ, T) at rest (fugacity solved once per side), the configured scheme
/// advances to `t_end` (the last step is shortened to land exactly), and the
/// final field is converted to `(ρ, u, e, z, T)` rows.
pub fn run_shock_tube(config: &ExperimentConfig) -> Result<ShockResult, SolverError> {
    if config.scenario != Scenario::ShockTube {
        return Err(SolverError::Config(format!(
            "run_shock_tube needs the shock scenario, got {}",
            config.scenario.name()
        )));
    }
    let grid = VelocityGrid::new(config.n, config.l)?;
    let cc = collision_config(config.statistics, config.theta0)?;
    let left = equilibrium_cell(&grid, config.statistics, config.theta0, SHOCK_LEFT.0, SHOCK_LEFT.1)?;
    let right = equilibrium_cell(
        &grid,
        config.statistics,
        config.theta0,
        SHOCK_RIGHT.0,
        SHOCK_RIGHT.1,
    )?;
    let mut field =
        SpatialField::from_profile(config.nx, config.x_min, config.x_max, &grid, |x| {
            if x < SHOCK_SPLIT {
                left.clone()
            } else {
                right.clone()
            }
        })?;
    let lambda = match config.lambda {
        Some(l) => l,
        None => estimate_lambda(&field, &grid, config.c_lambda)?,
    };
    let dt = match config.dt {
        Some(d) => d,
        None => cfl_dt(&grid, field.dx(), config.cfl)?,
    };
    let scheme_config = SchemeConfig {
        epsilon: config.epsilon,
        lambda,
        cfl: config.cfl,
        dt,
        limiter: config.limiter,
        scheme: config.scheme,
    };
    scheme_config.validate()?;
    let tables = KernelTables::build(&grid, config.m, grid.max_truncation_radius())?;
    let mut op = CollisionOperator::new(&grid, tables);
    let mut cache = ThermoCache::new(config.nx);
    let mut t = 0.0;
    let mut steps = 0usize;
    while t < config.t_end - 1e-12 {
        let step_dt = dt.min(config.t_end - t);
        let mut sc = scheme_config;
        sc.dt = step_dt;
        field = match config.scheme {
            Scheme::ForwardEuler => step_forward_euler(&field, &grid, &sc, &mut op, &cc)?,
            Scheme::ApFirstOrder => step_ap_first_order(&field, &grid, &sc, &mut op, &cc)?,
            Scheme::Imex2 => step_imex2(&field, &grid, &sc, &mut op, &cc)?,
            Scheme::BgkPenalized => step_bgk_penalized(&field, &grid, &sc, &cc, &mut cache)?,
        };
        if let Some(cell) = field.first_non_finite() {
            return Err(SolverError::NumericalBlowup { step: steps, cell });
        }
        t = if config.t_end - t <= dt * (1.0 + 1e-12) {
            config.t_end
        } else {
            t + step_dt
        };
        steps += 1;
    }
    let profile = diagnose_profile(&field, &grid, config.statistics, config.theta0)?;
    Ok(ShockResult {
        dt,
        lambda,
        steps,
        profile,
    })
}
