//! CSV and JSON artifact emission for scenario runs.
//!
//! Every float is printed in scientific notation with 17 significant
//! digits, which round-trips `f64` exactly; combined with the fully
//! deterministic solvers this makes reruns of the same configuration
//! byte-identical. Files are written atomically enough for our purposes
//! (single `fs::write` per file) into a directory created on demand.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::json;

use crate::error::SolverError;
use crate::grid::VelocityGrid;

use super::config::ExperimentConfig;
use super::scenarios::{AccuracyResult, RelaxationResult, ShockResult};

/// Scientific notation with 16 fractional digits = 17 significant digits,
/// the smallest count guaranteed to round-trip any `f64`.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), SolverError> {
    fs::create_dir_all(dir)
        .map_err(|e| SolverError::Io(format!("creating {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| SolverError::Io(format!("{}: {e}", path.display())))
}

/// Writes `table1.csv` with one data row per grid size. The `rate` column
/// repeats the table's single observed order (from coarsest to finest grid)
/// on every row so the file is self-contained when rows are filtered.
pub fn write_accuracy(result: &AccuracyResult, dir: &Path) -> Result<(), SolverError> {
    let mut out = String::from("N,max_norm,rate\n");
    for row in &result.rows {
        let _ = writeln!(out, "{},{},{}", row.n, fmt17(row.max_norm), fmt17(result.rate));
    }
    write_file(dir, "table1.csv", &out)
}

/// Writes `series.csv` (entropy and moment traces, one row per time step)
/// plus one `snapshot_<label>.csv` per captured field, with columns
/// `vx,vy,f` in row-major grid order.
pub fn write_relaxation(
    result: &RelaxationResult,
    grid: &VelocityGrid,
    dir: &Path,
) -> Result<(), SolverError> {
    let mut out = String::from("t,H,m4,m6,mass,momentum_x,energy\n");
    for s in &result.series {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt17(s.t),
            fmt17(s.entropy),
            fmt17(s.m4),
            fmt17(s.m6),
            fmt17(s.mass),
            fmt17(s.momentum_x),
            fmt17(s.energy)
        );
    }
    write_file(dir, "series.csv", &out)?;

    let n = grid.n();
    let nodes = grid.nodes();
    for (label, field) in &result.snapshots {
        let mut snap = String::from("vx,vy,f\n");
        for ix in 0..n {
            for iy in 0..n {
                let _ = writeln!(
                    snap,
                    "{},{},{}",
                    fmt17(nodes[ix]),
                    fmt17(nodes[iy]),
                    fmt17(field[grid.idx(ix, iy)])
                );
            }
        }
        write_file(dir, &format!("snapshot_{label}.csv"), &snap)?;
    }
    Ok(())
}

/// Writes `profile.csv`, one row per spatial cell.
pub fn write_shock(result: &ShockResult, dir: &Path) -> Result<(), SolverError> {
    let mut out = String::from("x,rho,ux,uy,e,z,T\n");
    for row in &result.profile {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt17(row.x),
            fmt17(row.rho),
            fmt17(row.ux),
            fmt17(row.uy),
            fmt17(row.e),
            fmt17(row.z),
            fmt17(row.temperature)
        );
    }
    write_file(dir, "profile.csv", &out)
}

/// Writes `meta.json`: the fully resolved configuration plus the time step
/// and penalty weight the run actually used. Keys serialize in sorted order
/// (serde_json's default map), so the file is deterministic.
pub fn write_meta(
    config: &ExperimentConfig,
    dt: Option<f64>,
    lambda: Option<f64>,
    dir: &Path,
) -> Result<(), SolverError> {
    let meta = json!({
        "scenario": config.scenario.name(),
        "statistics": config.statistics_name(),
        "theta0": config.theta0,
        "epsilon": config.epsilon,
        "n": config.n,
        "l": config.l,
        "m": config.m,
        "nx": config.nx,
        "x_min": config.x_min,
        "x_max": config.x_max,
        "cfl": config.cfl,
        "scheme": config.scheme_name(),
        "limiter": config.limiter_name(),
        "t_end": config.t_end,
        "seed": config.seed,
        "symmetrize_ic": config.symmetrize_ic,
        "c_lambda": config.c_lambda,
        "dt": dt,
        "lambda": lambda,
    });
    let text = serde_json::to_string_pretty(&meta)
        .map_err(|e| SolverError::Io(format!("meta.json serialization: {e}")))?;
    write_file(dir, "meta.json", &format!("{text}\n"))
}
